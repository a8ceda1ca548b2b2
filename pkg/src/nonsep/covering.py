"""Covering translates for families of homothets.

All covers are reported in one convention: the covering body is
t + lambda * T * P, where P is the family's base and T the sum of the
homothety ratios.  So lambda = 1 means "a translate of the total-ratio
homothet suffices".

Routes provided:

* `cover_intervals`: the 1-D engine, exact for Fraction inputs,
* `weighted_cover`: lambda = 1 for centrally symmetric bases,
* `sigma_cover`: lambda = (sigma + 1) / 2 for arbitrary bases, sigma
  the base's central asymmetry,
* `lambda_min`: the exact optimum by LP,
* `is_summand` / `wip_summand_check` / `lutwak_check`: the structural
  side conditions tying coverability to impassability.
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Rational

import numpy as np

from . import lp
from .asymmetry import sigma_lp
from .errors import GeometryError, InputError
from .family import HomotheticFamily, edges_covered
from .polytope import (
    Polytope,
    circumscribed_simplices,
    contains_translate,
    edges,
    is_generic,
)
from .tolerances import DEFAULT_TOLS, ToleranceContext


@dataclass(frozen=True)
class CoverResult:
    t: np.ndarray
    lam: float
    certified: bool

    def to_dict(self) -> dict:
        return {"t": np.asarray(self.t, dtype=float).tolist(),
                "lambda": float(self.lam), "certified": bool(self.certified)}


def cover_intervals(intervals):
    """Covering interval for a connected union of 1-D intervals.

    Input is a list of (center, half-width) pairs, members being
    [c_i - r_i, c_i + r_i].  Returns (center, halfwidth) with halfwidth
    the sum of the inputs' and center their radius-weighted mean; the
    result always contains the whole union (verified before returning).
    Arithmetic stays in the input type, so Fractions come back exact.
    Raises InputError when the union is disconnected.
    """
    pairs = [(c, r) for c, r in intervals]
    if not pairs:
        raise InputError("need at least one interval")
    if any(r <= 0 for _, r in pairs):
        raise InputError("half-widths must be positive")
    pieces = sorted((c - r, c + r) for c, r in pairs)
    reach = pieces[0][1]
    for lo, hi in pieces[1:]:
        if lo > reach:
            raise InputError("not non-separable")
        if hi > reach:
            reach = hi
    total = sum(r for _, r in pairs)
    center = sum(r * c for c, r in pairs) / total
    lo_all = min(c - r for c, r in pairs)
    hi_all = max(c + r for c, r in pairs)
    # containment is automatic in exact arithmetic; floats get an ulp allowance
    exact = all(isinstance(v, Rational) for pair in pairs for v in pair)
    slack = 0 if exact else 1e-12 * max(1.0, abs(float(center)) + float(total))
    if not (center - total <= lo_all + slack
            and hi_all <= center + total + slack):
        raise GeometryError("cover postcondition failed")
    return center, total


def _support_dominates(family, t, lam, tols):
    """Does t + lam * T * P contain every member, by facet support?"""
    p = family.base
    total = family.total_ratio
    a, b = p.facet_normals, p.facet_offsets
    member_sup = (family.translations @ a.T
                  + np.outer(family.ratios, b)).max(axis=0)
    cover_sup = a @ t + lam * total * b
    scale = max(1.0, float(np.abs(member_sup).max()))
    return bool((member_sup <= cover_sup + tols.feas(scale)).all())


def weighted_cover(family: HomotheticFamily,
                   tols: ToleranceContext = DEFAULT_TOLS) -> CoverResult:
    """Ratio-weighted center cover at lambda = 1.

    Requires an origin-symmetric base and a weakly non-separable family;
    under those, the translate of the total-ratio homothet placed at the
    weighted center always covers, and the certificate is re-verified by
    support comparison anyway.
    """
    from .family import is_wns

    if not family.base.is_origin_symmetric():
        raise InputError("requires symmetric base")
    if not is_wns(family, tols)[0]:
        raise InputError("family is weakly separable")
    total = family.total_ratio
    t = (family.ratios @ family.translations) / total
    certified = _support_dominates(family, t, 1.0, tols)
    return CoverResult(t, 1.0, certified)


def sigma_cover(family: HomotheticFamily, sigma: float = None,
                tols: ToleranceContext = DEFAULT_TOLS) -> CoverResult:
    """Cover at lambda = (sigma + 1) / 2 about the base's asymmetry center.

    `sigma` is the base's central asymmetry; omitted, it is computed
    here.  The base need not be pre-centered: the family is recentred at
    the asymmetry center internally and the translate mapped back.  For
    symmetric bases this degenerates to `weighted_cover`.
    """
    from .family import is_wns

    if not is_wns(family, tols)[0]:
        raise InputError("family is weakly separable")
    res = sigma_lp(family.base)
    q = res.center
    if sigma is None:
        sigma = res.sigma
    lam = 0.5 * (sigma + 1.0)
    total = family.total_ratio
    shifted = family.translations + np.outer(family.ratios, q)
    t = (family.ratios @ shifted) / total - lam * total * q
    certified = _support_dominates(family, t, lam, tols)
    return CoverResult(t, lam, certified)


def lambda_min(family: HomotheticFamily,
               tols: ToleranceContext = DEFAULT_TOLS) -> CoverResult:
    """Smallest lambda admitting any covering translate, by LP.

    The base is recentered at its vertex centroid so every facet offset
    is positive, which makes lambda enter each constraint with a
    positive coefficient.
    """
    p = family.base
    c0 = p.vertices.mean(axis=0)
    pc = p.translate(-c0)
    a, b = pc.facet_normals, pc.facet_offsets
    if (b <= 0).any():
        raise GeometryError("recentred base must contain its centroid")
    total = family.total_ratio
    shifted = family.translations + np.outer(family.ratios, c0)
    rhs_max = (shifted @ a.T + np.outer(family.ratios, b)).max(axis=0)

    d = p.dim
    m = a.shape[0]
    a_ub = np.zeros((m, d + 1))
    a_ub[:, :d] = -a
    a_ub[:, d] = -total * b
    c = np.zeros(d + 1)
    c[d] = 1.0
    res = lp.solve(c, a_ub, -rhs_max, maximize=False)
    if not res.optimal:
        raise GeometryError(f"covering LP ended {res.status}")
    lam = float(res.x[d])
    t = res.x[:d] - lam * total * c0
    certified = _support_dominates(family, t, lam, tols)
    return CoverResult(t, lam, certified)


def is_summand(q: Polytope, k: Polytope,
               tols: ToleranceContext = DEFAULT_TOLS):
    """Is `q` a Minkowski summand of `k` (does q slide freely in k)?

    Edge criterion: for every edge E of q, the face of k exposed by a
    direction interior to E's normal cone must contain a translate of
    E.  Each containment is one feasibility LP asking for a point x
    with both x and x + E inside the near-tight face of k.  Returns
    (bool, failing edge direction or None).
    """
    if q.dim != k.dim:
        raise InputError("dimension mismatch")
    if q.dim < 2:
        raise InputError("need dim >= 2")
    ak, bk = k.facet_normals, k.facet_offsets
    tight = tols.tight(max(1.0, float(np.abs(q.facet_offsets).max())))
    for (i, j) in edges(q):
        vi, vj = q.vertices[i], q.vertices[j]
        evec = vj - vi
        slack_i = q.facet_offsets - q.facet_normals @ vi
        slack_j = q.facet_offsets - q.facet_normals @ vj
        incident = (slack_i <= tight) & (slack_j <= tight)
        u = q.facet_normals[incident].mean(axis=0)
        u /= np.linalg.norm(u)
        h = k.support(u)
        ftol = tols.tight(max(1.0, abs(h)))
        a_ub = np.vstack([ak, ak, -u[None, :], -u[None, :]])
        b_ub = np.concatenate([bk, bk - ak @ evec,
                               [-h + ftol], [-h + ftol + u @ evec]])
        x = lp.feasible_point(a_ub, b_ub, tol=tols.lp)
        if x is None:
            return False, evec / np.linalg.norm(evec)
    return True, None


def wip_summand_check(family: HomotheticFamily,
                      tols: ToleranceContext = DEFAULT_TOLS):
    """Structural half of the impassability-to-summand pipeline.

    Assumes the caller has already screened the family with
    `is_kwip_sampled(family, dim - 2)` and `edges_covered`.  Computes
    the hull of the union, asks whether it slides freely in the
    total-ratio homothet of the base, and attaches the optimal lambda.
    Returns (ok, report): ok means summand holds and lambda_min stays
    at most 1.
    """
    d = family.dim
    if d < 2:
        raise InputError("pipeline needs dim >= 2")
    edges_ok, _ = edges_covered(family, tols)
    hull = family.hull()
    scaled = family.base.homothet(np.zeros(d), family.total_ratio)
    summand_ok, direction = is_summand(hull, scaled, tols)
    lam = lambda_min(family, tols)
    ok = summand_ok and lam.certified and lam.lam <= 1.0 + 1e-7
    report = {
        "edges_covered": edges_ok,
        "summand": summand_ok,
        "failing_direction": None if direction is None else direction.tolist(),
        "lambda": lam.lam,
        "lambda_certified": lam.certified,
    }
    return ok, report


def lutwak_check(outer: Polytope, inner: Polytope,
                 tols: ToleranceContext = DEFAULT_TOLS):
    """Translate-containment vs. the circumscribed-simplex criterion.

    `inner` fits in `outer` by translation iff it fits in every simplex
    circumscribing `outer`.  Both routes are computed independently and
    must agree; returns (consistent, detail).  Requires a generic outer
    body so the circumscribing simplices are a finite honest list.
    """
    if not is_generic(outer):
        raise InputError("outer body must be generic")
    direct, _ = contains_translate(outer, inner, tols)
    via = True
    for simplex in circumscribed_simplices(outer):
        ok, _ = contains_translate(simplex, inner, tols)
        if not ok:
            via = False
            break
    return direct == via, {"direct": direct, "via_simplices": via}
