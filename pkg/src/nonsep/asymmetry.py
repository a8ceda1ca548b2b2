"""Central-asymmetry constant of a polytope.

The constant is the least factor mu such that, for a well-chosen
center q, the reflected body -(K - q) covers (K - q) after dilation
by mu.  It is 1 exactly for centrally symmetric bodies and peaks at
dim(K) on simplices.  Two independent routes are provided: a single
joint LP over (center, mu), and a bisection on mu with a feasibility
LP per step.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import lp
from .errors import GeometryError
from .polytope import Polytope, polar


@dataclass(frozen=True)
class AsymmetryResult:
    sigma: float
    center: np.ndarray
    method: str

    def to_dict(self) -> dict:
        return {"sigma": self.sigma, "center": self.center.tolist(),
                "method": self.method}


def _reflection_rows(p: Polytope):
    """Per-facet data for the containment K - q <= -mu (K - q).

    Containment holds iff for every facet normal a_i and every vertex v:
    <a_i, (1+mu) q> - mu b_i <= <a_i, v>.  Only the minimizing vertex
    binds, and min_v <a_i, v> = -h_K(-a_i).
    """
    a = p.facet_normals
    b = p.facet_offsets
    rhs_min = np.array([-p.support(-ai) for ai in a])
    return a, b, rhs_min


def sigma_lp(p: Polytope) -> AsymmetryResult:
    """Asymmetry constant by one LP in the variables (r, mu), r = (1+mu) q."""
    a, b, rhs_min = _reflection_rows(p)
    d = p.dim
    m = a.shape[0]
    a_ub = np.zeros((m + 1, d + 1))
    a_ub[:m, :d] = a
    a_ub[:m, d] = -b
    a_ub[m, d] = -1.0  # mu >= 1
    b_ub = np.concatenate([rhs_min, [-1.0]])
    c = np.zeros(d + 1)
    c[d] = 1.0
    res = lp.solve(c, a_ub, b_ub, maximize=False)
    if not res.optimal:
        raise GeometryError(f"asymmetry LP ended {res.status}")
    mu = float(res.x[d])
    center = res.x[:d] / (1.0 + mu)
    return AsymmetryResult(mu, center, "lp")


def _reflection_feasible(a, b, rhs_min, mu, tol):
    return lp.feasible_point((1.0 + mu) * a, mu * b + rhs_min, tol=tol)


def sigma_bisection(p: Polytope, tol: float = 1e-9) -> AsymmetryResult:
    """Asymmetry constant by bisection; independent of `sigma_lp`.

    Returns the certified upper end of the final bracket, with a center
    witnessing feasibility there.
    """
    a, b, rhs_min = _reflection_rows(p)
    lo, hi = 1.0, float(p.dim)
    q = _reflection_feasible(a, b, rhs_min, lo, tol=1e-8)
    if q is not None:
        return AsymmetryResult(lo, q, "bisection")
    q = _reflection_feasible(a, b, rhs_min, hi, tol=1e-8)
    if q is None:
        raise GeometryError("containment infeasible at mu = dim")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        cand = _reflection_feasible(a, b, rhs_min, mid, tol=1e-8)
        if cand is None:
            lo = mid
        else:
            hi, q = mid, cand
    return AsymmetryResult(hi, q, "bisection")


def polar_asymmetry_value(p: Polytope, center) -> float:
    """Asymmetry of the polar about the origin, after recentering at `center`."""
    q = polar(p.translate(-np.asarray(center, dtype=float)))
    return float(max(q.gauge(-w) for w in q.vertices))


def polar_sigma_check(p: Polytope, tol: float = 1e-6) -> bool:
    """Verify sigma through polars: P* <= -sigma P* about the optimal center.

    Asymmetry about a fixed center is invariant under polarity, so the
    polar of P recentred at the center from `sigma_lp` must reflect into
    sigma times itself; checked by vertex membership.
    """
    res = sigma_lp(p)
    value = polar_asymmetry_value(p, res.center)
    return value <= res.sigma + tol * max(1.0, res.sigma)


def bm_bound_report(p: Polytope):
    """Distance-to-simplex bound from near-maximal asymmetry.

    Returns (eps, bound) with eps = dim - sigma clamped at 0.  When eps
    is below 1 / (8 (dim + 1)) the body is within Banach-Mazur factor
    1 + 8 (dim + 1) eps of a simplex; otherwise the bound does not apply
    and None is reported in its place.
    """
    res = sigma_lp(p)
    d = p.dim
    eps = max(0.0, d - res.sigma)
    if eps < 1.0 / (8.0 * (d + 1)):
        return eps, 1.0 + 8.0 * (d + 1) * eps
    return eps, None
