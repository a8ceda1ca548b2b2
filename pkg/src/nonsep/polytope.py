"""Convex polytopes with synchronized facet and vertex descriptions.

A `Polytope` always carries both sides of the duality: facet halfspaces
``<a_i, x> <= b_i`` with unit outer normals, and the vertex list.
Constructing from one side completes the other (vertex enumeration over
rank-d facet subsets, facet enumeration via the convex hull), prunes
redundant data, and cross-validates the pair. Downstream code treats
instances as immutable; the arrays are marked read-only.

Also here: support functions, polarity, containment of a translate (an LP
feasibility problem over the translation), genericity testing and repair,
circumscribed simplices, and low-dimensional measures.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from . import lp
from .errors import GeometryError, InputError
from .tolerances import DEFAULT_TOLS, ToleranceContext


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Polytope:
    """Bounded full-dimensional polytope in R^d, d >= 1.

    ``facet_normals`` has unit rows; ``facet_offsets`` are the matching
    right-hand sides; ``vertices`` is the full extreme-point list. Use the
    ``from_facets`` / ``from_vertices`` constructors, not the raw one.
    """

    dim: int
    facet_normals: np.ndarray
    facet_offsets: np.ndarray
    vertices: np.ndarray
    tol: float = 1e-9

    # -- construction ------------------------------------------------------

    @staticmethod
    def from_facets(normals, offsets, tol: float = 1e-9) -> "Polytope":
        a = np.atleast_2d(np.asarray(normals, dtype=float))
        b = np.atleast_1d(np.asarray(offsets, dtype=float))
        if a.ndim != 2 or a.shape[0] != b.size:
            raise InputError("facet arrays have inconsistent shapes")
        d = a.shape[1]
        norms = np.linalg.norm(a, axis=1)
        if (norms <= tol).any():
            raise InputError("zero facet normal")
        a = a / norms[:, None]
        b = b / norms
        a, b = _dedupe_facets(a, b, tol)
        if d == 1:
            return _interval_from_facets(a, b, tol)
        if not _positive_hull_spans(a, tol):
            raise GeometryError("unbounded")
        verts = _enumerate_vertices(a, b, tol)
        if verts.shape[0] < d + 1 or _affine_rank(verts) < d:
            raise GeometryError("not full-dimensional")
        a, b = _prune_facets(a, b, verts, d, tol)
        return _build(d, a, b, verts, tol)

    @staticmethod
    def from_vertices(points, tol: float = 1e-9) -> "Polytope":
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        d = pts.shape[1]
        if d == 1:
            lo, hi = pts.min(), pts.max()
            if hi - lo <= tol:
                raise GeometryError("not full-dimensional")
            return _build(1, np.array([[1.0], [-1.0]]), np.array([hi, -lo]),
                          np.array([[lo], [hi]]), tol)
        if pts.shape[0] < d + 1 or _affine_rank(pts) < d:
            raise GeometryError("not full-dimensional")
        try:
            hull = ConvexHull(pts)
        except QhullError as exc:
            raise GeometryError("not full-dimensional") from exc
        # qhull rows are [normal | offset] with normal @ x + offset <= 0.
        eq = hull.equations
        a, b = _dedupe_facets(eq[:, :-1], -eq[:, -1], tol)
        verts = pts[hull.vertices]
        return _build(d, a, b, verts, tol)

    @staticmethod
    def from_dual(normals, offsets, points, tol: float = 1e-9) -> "Polytope":
        """Trusted construction from both sides at once; still validated."""
        a = np.atleast_2d(np.asarray(normals, dtype=float))
        b = np.atleast_1d(np.asarray(offsets, dtype=float))
        v = np.atleast_2d(np.asarray(points, dtype=float))
        norms = np.linalg.norm(a, axis=1)
        return _build(a.shape[1], a / norms[:, None], b / norms, v, tol)

    # -- basic queries -----------------------------------------------------

    @property
    def n_facets(self) -> int:
        return self.facet_offsets.size

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    def support(self, u) -> float:
        """max_{x in P} <u, x>; rejects the zero direction."""
        u = np.asarray(u, dtype=float)
        if np.linalg.norm(u) <= self.tol:
            raise InputError("zero direction")
        return float((self.vertices @ u).max())

    def argsupport(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        vals = self.vertices @ u
        return self.vertices[int(np.argmax(vals))]

    def contains_point(self, x, slack: float | None = None) -> bool:
        x = np.asarray(x, dtype=float)
        s = self._scale() if slack is None else 0.0
        eps = slack if slack is not None else DEFAULT_TOLS.feas(s)
        return bool((self.facet_normals @ x - self.facet_offsets <= eps).all())

    def gauge(self, x) -> float:
        """Minkowski functional; requires the origin strictly inside."""
        if (self.facet_offsets <= self.tol).any():
            raise GeometryError("origin not interior")
        x = np.asarray(x, dtype=float)
        return max(0.0, float((self.facet_normals @ x / self.facet_offsets).max()))

    def centroid(self) -> np.ndarray:
        return self.vertices.mean(axis=0)

    def _scale(self) -> float:
        return float(np.abs(self.vertices).max(initial=1.0))

    # -- affine images -----------------------------------------------------

    def translate(self, v) -> "Polytope":
        v = np.asarray(v, dtype=float)
        return _build(self.dim, self.facet_normals,
                      self.facet_offsets + self.facet_normals @ v,
                      self.vertices + v, self.tol, validate=False)

    def scale(self, s: float) -> "Polytope":
        if s <= 0:
            raise InputError("scale must be positive")
        return _build(self.dim, self.facet_normals, self.facet_offsets * s,
                      self.vertices * s, self.tol, validate=False)

    def negate(self) -> "Polytope":
        return _build(self.dim, -self.facet_normals, self.facet_offsets,
                      -self.vertices, self.tol, validate=False)

    def homothet(self, x, ratio: float) -> "Polytope":
        """x + ratio * P for ratio > 0."""
        return self.scale(ratio).translate(x)

    def is_origin_symmetric(self) -> bool:
        v = self.vertices
        eps = DEFAULT_TOLS.dedupe(self._scale())
        for p in v:
            if np.linalg.norm(v + p, axis=1).min() > eps:
                return False
        return True

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "facets": [{"a": row.tolist(), "b": float(off)}
                       for row, off in zip(self.facet_normals, self.facet_offsets)],
            "vertices": self.vertices.tolist(),
        }


def polytope_from_dict(obj: dict, tol: float = 1e-9) -> Polytope:
    """Load from the JSON form; either facet or vertex list may be absent."""
    if not isinstance(obj, dict) or "dim" not in obj:
        raise InputError("polytope JSON must be an object with a 'dim' key")
    d = obj["dim"]
    facets = obj.get("facets")
    verts = obj.get("vertices")
    if facets:
        a = np.array([f["a"] for f in facets], dtype=float)
        b = np.array([f["b"] for f in facets], dtype=float)
        if a.shape[1] != d:
            raise InputError("facet dimension does not match 'dim'")
        p = Polytope.from_facets(a, b, tol)
    elif verts:
        v = np.array(verts, dtype=float)
        if v.shape[1] != d:
            raise InputError("vertex dimension does not match 'dim'")
        p = Polytope.from_vertices(v, tol)
    else:
        raise InputError("polytope JSON needs 'facets' or 'vertices'")
    return p


# ---------------------------------------------------------------------------
# construction internals


def _build(d, a, b, verts, tol, validate=True) -> Polytope:
    p = Polytope(d, _freeze(a), _freeze(b), _freeze(verts), tol)
    if validate:
        _validate(p)
    return p


def _validate(p: Polytope) -> None:
    scale = p._scale()
    feas = DEFAULT_TOLS.feas(scale)
    res = p.facet_normals @ p.vertices.T - p.facet_offsets[:, None]
    if res.max(initial=0.0) > feas:
        raise GeometryError("vertex violates a facet; representations disagree")
    tight = np.abs(res) <= DEFAULT_TOLS.tight(scale)
    if (tight.sum(axis=1) < p.dim).any():
        raise GeometryError("facet tight at fewer than dim vertices")
    if p.n_vertices < p.dim + 1 or p.n_facets < p.dim + 1:
        raise GeometryError("not full-dimensional")


def _dedupe_facets(a, b, tol):
    norms = np.linalg.norm(a, axis=1)
    a = a / norms[:, None]
    b = b / norms
    keep_a, keep_b = [], []
    eps = max(1e-7, 100 * tol)
    for row, off in zip(a, b):
        dup = False
        for ka, kb in zip(keep_a, keep_b):
            if np.abs(row - ka).max() <= eps and abs(off - kb) <= eps * (1 + abs(kb)):
                dup = True
                break
        if not dup:
            keep_a.append(row)
            keep_b.append(off)
    return np.array(keep_a), np.array(keep_b)


def _interval_from_facets(a, b, tol):
    # d == 1: normals are +-1 after normalization.
    ups = b[a[:, 0] > 0]
    downs = b[a[:, 0] < 0]
    if ups.size == 0 or downs.size == 0:
        raise GeometryError("unbounded")
    hi, lo = ups.min(), -downs.min()
    if hi - lo <= tol:
        raise GeometryError("not full-dimensional")
    return _build(1, np.array([[1.0], [-1.0]]), np.array([hi, -lo]),
                  np.array([[lo], [hi]]), tol)


def _affine_rank(pts) -> int:
    centered = pts - pts.mean(axis=0)
    if centered.shape[0] < 2:
        return 0
    s = np.linalg.svd(centered, compute_uv=False)
    scale = s.max(initial=0.0)
    if scale == 0.0:
        return 0
    return int((s > 1e-9 * max(1.0, scale)).sum())


def _positive_hull_spans(normals, tol) -> bool:
    """Bounded iff the origin is interior to conv of the unit normals."""
    m, d = normals.shape
    if m < d + 1:
        return False
    # max t  s.t.  sum(l_i a_i) = 0, sum(l_i) = 1, l_i >= t
    c = np.zeros(m + 1)
    c[-1] = 1.0
    a_eq = np.zeros((d + 1, m + 1))
    a_eq[:d, :m] = normals.T
    a_eq[d, :m] = 1.0
    b_eq = np.zeros(d + 1)
    b_eq[d] = 1.0
    a_ub = np.hstack([-np.eye(m), np.ones((m, 1))])
    res = lp.solve(c, a_ub=a_ub, b_ub=np.zeros(m), a_eq=a_eq, b_eq=b_eq)
    return res.optimal and res.value > 1e-9


def _enumerate_vertices(a, b, tol):
    """Feasible intersections of rank-d facet subsets, deduplicated."""
    m, d = a.shape
    scale = 1.0 + float(np.abs(b).max(initial=0.0))
    feas = DEFAULT_TOLS.feas(scale)
    found = []
    for idx in itertools.combinations(range(m), d):
        sub = a[list(idx)]
        det = np.linalg.det(sub)
        if abs(det) < 1e-10:
            continue
        x = np.linalg.solve(sub, b[list(idx)])
        if np.abs(x).max() > 1e9:
            continue
        if (a @ x <= b + feas).all():
            found.append(x)
    if not found:
        return np.zeros((0, d))
    return _dedupe_points(np.array(found), DEFAULT_TOLS.dedupe(scale))


def _dedupe_points(pts, eps):
    kept = []
    for p in pts:
        if not kept or min(np.linalg.norm(p - q) for q in kept) > eps:
            kept.append(p)
    return np.array(kept)


def _prune_facets(a, b, verts, d, tol):
    """Keep facets tight at >= d vertices; drops redundant halfspaces."""
    scale = 1.0 + float(np.abs(verts).max(initial=0.0))
    tight = np.abs(a @ verts.T - b[:, None]) <= DEFAULT_TOLS.tight(scale)
    mask = tight.sum(axis=1) >= d
    if not mask.any():
        raise GeometryError("not full-dimensional")
    return a[mask], b[mask]


# ---------------------------------------------------------------------------
# free-function operations


def support(p: Polytope, u) -> float:
    return p.support(u)


def vertices_from_facets(normals, offsets, tol: float = 1e-9) -> Polytope:
    return Polytope.from_facets(normals, offsets, tol)


def facets_from_vertices(points, tol: float = 1e-9) -> Polytope:
    return Polytope.from_vertices(points, tol)


def contains_translate(outer: Polytope, inner: Polytope,
                       tols: ToleranceContext = DEFAULT_TOLS):
    """Does some translate of `inner` fit inside `outer`?

    Feasibility of <a_i, t> <= b_i - h_inner(a_i) over translations t;
    returns (bool, witness translation or None).
    """
    if outer.dim != inner.dim:
        raise InputError("dimension mismatch")
    h = np.array([inner.support(a) for a in outer.facet_normals])
    t = lp.feasible_point(outer.facet_normals, outer.facet_offsets - h, tol=tols.lp)
    if t is None:
        return False, None
    return True, t


def polar(p: Polytope) -> Polytope:
    """Polar dual; needs the origin strictly interior."""
    if (p.facet_offsets <= p.tol).any():
        raise GeometryError("origin not interior")
    verts = p.facet_normals / p.facet_offsets[:, None]
    norms = np.linalg.norm(p.vertices, axis=1)
    if (norms <= p.tol).any():
        raise GeometryError("origin not interior")
    normals = p.vertices / norms[:, None]
    offsets = 1.0 / norms
    return _build(p.dim, normals, offsets, verts, p.tol)


def is_generic(p: Polytope) -> bool:
    """Every d-subset of facet normals linearly independent?"""
    m, d = p.facet_normals.shape
    idx = np.array(list(itertools.combinations(range(m), d)))
    dets = np.linalg.det(p.facet_normals[idx])
    return bool((np.abs(dets) > 1e-9).all())


def genericize(p: Polytope, eps: float, seed: int = 0,
               max_tries: int = 1000) -> Polytope:
    """Randomly tilt facet normals by angles <= eps until generic.

    Offsets are refit as support-plus-margin so the result contains the
    original. Fails after `max_tries` rejected draws.
    """
    if not 0 < eps < 0.1:
        raise InputError("eps must lie in (0, 0.1)")
    rng = np.random.default_rng(seed)
    radius = float(np.linalg.norm(p.vertices, axis=1).max())
    m = p.n_facets
    for _ in range(max_tries):
        new_a = np.empty_like(np.asarray(p.facet_normals))
        for i, a in enumerate(p.facet_normals):
            new_a[i] = _tilt(a, rng.uniform(0.0, 0.9 * eps), rng)
        new_b = np.array([p.support(a) for a in new_a]) + eps * radius
        try:
            q = Polytope.from_facets(new_a, new_b, p.tol)
        except GeometryError:
            continue
        if q.n_facets != m or not is_generic(q):
            continue
        angles = _pairing_angles(p.facet_normals, q.facet_normals)
        if angles.max() <= eps:
            return q
    raise GeometryError("genericization failed")


def _tilt(a, theta, rng):
    d = a.size
    g = rng.standard_normal(d)
    g -= (g @ a) * a
    n = np.linalg.norm(g)
    if n < 1e-12:
        return a.copy()
    out = a + math.tan(theta) * g / n
    return out / np.linalg.norm(out)


def _pairing_angles(old, new):
    cos = np.clip(new @ old.T, -1.0, 1.0)
    return np.arccos(cos.max(axis=1))


def containment_ratio(outer: Polytope, inner: Polytope) -> float:
    """Smallest ratio r with inner a subset of r*outer (origin inside outer)."""
    return max(outer.gauge(v) for v in inner.vertices)


def circumscribed_simplices(p: Polytope) -> list[Polytope]:
    """All bounded (d+1)-facet-subset simplices; each contains p."""
    if not is_generic(p):
        raise GeometryError("polytope is not generic")
    a, b = p.facet_normals, p.facet_offsets
    m, d = a.shape
    out = []
    feas = DEFAULT_TOLS.feas(p._scale())
    for idx in itertools.combinations(range(m), d + 1):
        sub = a[list(idx)]
        if not _positive_hull_spans(sub, p.tol):
            continue
        simplex = Polytope.from_facets(sub, b[list(idx)], p.tol)
        res = simplex.facet_normals @ p.vertices.T - simplex.facet_offsets[:, None]
        if res.max() > feas:
            raise GeometryError("circumscribed simplex fails to contain input")
        out.append(simplex)
    return out


def edges(p: Polytope) -> list[tuple[int, int]]:
    """Vertex index pairs forming 1-faces.

    A pair is an edge iff the facets tight at both endpoints have normals
    of rank d-1. Works uniformly for d >= 2 (in the plane this reduces to
    the two endpoints of each facet).
    """
    if p.dim < 2:
        raise InputError("edges need d >= 2")
    scale = p._scale()
    tight = np.abs(p.facet_normals @ p.vertices.T
                   - p.facet_offsets[:, None]) <= DEFAULT_TOLS.tight(scale)
    k = p.n_vertices
    out = []
    for i in range(k):
        for j in range(i + 1, k):
            common = tight[:, i] & tight[:, j]
            if common.sum() < p.dim - 1:
                continue
            sub = p.facet_normals[common]
            s = np.linalg.svd(sub, compute_uv=False)
            if (s > 1e-7).sum() >= p.dim - 1:
                out.append((i, j))
    return out


def ordered_vertices_2d(p: Polytope) -> np.ndarray:
    if p.dim != 2:
        raise InputError("only meaningful in the plane")
    c = p.centroid()
    ang = np.arctan2(p.vertices[:, 1] - c[1], p.vertices[:, 0] - c[0])
    return p.vertices[np.argsort(ang)]


def measure(p: Polytope, kind: str) -> float:
    """'volume' for d <= 3, 'area' and 'perimeter' for d == 2."""
    if kind == "perimeter":
        if p.dim != 2:
            raise InputError("perimeter needs d == 2")
        v = ordered_vertices_2d(p)
        return float(np.linalg.norm(np.roll(v, -1, axis=0) - v, axis=1).sum())
    if kind == "area":
        if p.dim != 2:
            raise InputError("area needs d == 2")
        return _shoelace(ordered_vertices_2d(p))
    if kind == "volume":
        if p.dim == 1:
            return float(p.vertices.max() - p.vertices.min())
        if p.dim == 2:
            return _shoelace(ordered_vertices_2d(p))
        if p.dim == 3:
            return _volume_3d(p)
        raise InputError("volume implemented for d <= 3")
    raise InputError(f"unknown measure kind {kind!r}")


def _shoelace(v) -> float:
    x, y = v[:, 0], v[:, 1]
    x2, y2 = np.roll(x, -1), np.roll(y, -1)
    return float(abs(np.dot(x, y2) - np.dot(x2, y)) / 2.0)


def _volume_3d(p: Polytope) -> float:
    c = p.centroid()
    scale = p._scale()
    tight = np.abs(p.facet_normals @ p.vertices.T
                   - p.facet_offsets[:, None]) <= DEFAULT_TOLS.tight(scale)
    total = 0.0
    for f in range(p.n_facets):
        pts = p.vertices[tight[f]]
        if pts.shape[0] < 3:
            raise GeometryError("degenerate facet in volume computation")
        # Order the facet polygon inside its own plane, then fan out.
        normal = p.facet_normals[f]
        basis = _plane_basis(normal)
        flat = (pts - pts.mean(axis=0)) @ basis.T
        order = np.argsort(np.arctan2(flat[:, 1], flat[:, 0]))
        pts = pts[order]
        for i in range(1, pts.shape[0] - 1):
            mat = np.stack([pts[0] - c, pts[i] - c, pts[i + 1] - c])
            total += abs(np.linalg.det(mat)) / 6.0
    return total


def _plane_basis(normal):
    """Two orthonormal vectors spanning the plane orthogonal to `normal`."""
    d = normal.size
    basis = []
    for e in np.eye(d):
        v = e - (e @ normal) * normal
        for b in basis:
            v -= (v @ b) * b
        n = np.linalg.norm(v)
        if n > 1e-8:
            basis.append(v / n)
        if len(basis) == d - 1:
            break
    return np.array(basis)


# ---------------------------------------------------------------------------
# stock shapes


def box(lo, hi, tol: float = 1e-9) -> Polytope:
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))
    if lo.size != hi.size or (hi <= lo).any():
        raise InputError("box needs lo < hi componentwise")
    d = lo.size
    a = np.vstack([np.eye(d), -np.eye(d)])
    b = np.concatenate([hi, -lo])
    corners = np.array(list(itertools.product(*zip(lo, hi))))
    return _build(d, a, b, corners, tol)


def cube(d: int, half: float = 0.5, tol: float = 1e-9) -> Polytope:
    """Axis cube [-half, half]^d."""
    return box(-half * np.ones(d), half * np.ones(d), tol)


def unit_cube(d: int, tol: float = 1e-9) -> Polytope:
    """Axis cube [0, 1]^d."""
    return box(np.zeros(d), np.ones(d), tol)


def cross_polytope(d: int, radius: float = 1.0, tol: float = 1e-9) -> Polytope:
    signs = np.array(list(itertools.product([1.0, -1.0], repeat=d)))
    a = signs / math.sqrt(d)
    b = np.full(signs.shape[0], radius / math.sqrt(d))
    verts = np.vstack([radius * np.eye(d), -radius * np.eye(d)])
    return _build(d, a, b, verts, tol)


def standard_simplex(d: int, tol: float = 1e-9) -> Polytope:
    """conv{0, e_1, ..., e_d}."""
    verts = np.vstack([np.zeros(d), np.eye(d)])
    return Polytope.from_vertices(verts, tol)


def parallelotope(edges, tol: float = 1e-9) -> Polytope:
    """Centred parallelotope spanned by the given edge vectors."""
    e = np.asarray(edges, dtype=float)
    if e.ndim != 2 or e.shape[0] != e.shape[1]:
        raise InputError("need d edge vectors of dimension d")
    if abs(np.linalg.det(e)) <= tol:
        raise InputError("edge vectors are linearly dependent")
    signs = np.array(list(itertools.product([-0.5, 0.5], repeat=e.shape[0])))
    return Polytope.from_vertices(signs @ e, tol)


def regular_polygon(k: int, radius: float = 1.0, phase: float = 0.0,
                    tol: float = 1e-9) -> Polytope:
    ang = phase + 2 * np.pi * np.arange(k) / k
    verts = radius * np.stack([np.cos(ang), np.sin(ang)], axis=1)
    return Polytope.from_vertices(verts, tol)


def random_polytope(d: int, npoints: int, rng, symmetric: bool = False,
                    tol: float = 1e-9) -> Polytope:
    """Hull of gaussian points; resamples until full-dimensional."""
    for _ in range(100):
        pts = rng.standard_normal((npoints, d))
        if symmetric:
            pts = np.vstack([pts, -pts])
        try:
            return Polytope.from_vertices(pts, tol)
        except GeometryError:
            continue
    raise GeometryError("could not draw a full-dimensional polytope")


def random_simplex(d: int, rng, tol: float = 1e-9) -> Polytope:
    for _ in range(100):
        pts = rng.standard_normal((d + 1, d))
        if abs(np.linalg.det(pts[1:] - pts[0])) > 0.05:
            return Polytope.from_vertices(pts, tol)
    raise GeometryError("could not draw a well-conditioned simplex")
