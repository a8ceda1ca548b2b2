"""Shared test utilities: set comparisons, generators, small oracles."""

import numpy as np


def arrangement_with_lambda1(rng, band, nverts=8):
    """Random symmetric 2-D arrangement rescaled to a target dual length.

    Scaling the body scales the shortest dual vector's polar-gauge length
    by the same factor, so any target inside `band` is hit exactly.
    Targets are kept away from the 1/2 decision line by the caller's
    choice of band.
    """
    from nonsep.lattice import Lattice, LatticeArrangement, is_ns_lattice
    from nonsep.polytope import random_polytope

    while True:
        basis = rng.uniform(-1.5, 1.5, size=(2, 2))
        if abs(np.linalg.det(basis)) > 0.3:
            break
    lat = Lattice.from_basis(basis)
    body = random_polytope(2, nverts, rng, symmetric=True)
    _, lam1 = is_ns_lattice(LatticeArrangement(body, lat))
    target = float(rng.uniform(*band))
    scaled = body.scale(target / lam1)
    return LatticeArrangement(scaled, lat), target


def overlap_chain(base, n, rng, direction=None):
    """Members strung along a line with consecutive overlap, hence WNS.

    Step lengths use the radial reach of the recentred base along the
    travel direction, not the support width: the reach bounds how far a
    member can move before it stops meeting its predecessor.
    """
    from nonsep.family import HomotheticFamily

    d = base.dim
    if direction is None:
        direction = rng.standard_normal(d)
    direction = np.asarray(direction, float)
    direction /= np.linalg.norm(direction)
    c = base.vertices.mean(axis=0)
    pc = base.translate(-c)
    r_fwd = 1.0 / pc.gauge(direction)
    r_back = 1.0 / pc.gauge(-direction)
    taus = rng.uniform(0.5, 2.0, size=n)
    ys = np.zeros((n, d))
    for i in range(1, n):
        step = 0.45 * (taus[i - 1] * r_fwd + taus[i] * r_back)
        ys[i] = ys[i - 1] + step * direction
    xs = ys - np.outer(taus, c)
    return HomotheticFamily(base, xs, taus)


def same_point_set(a, b, eps=1e-7) -> bool:
    """Bijective matching of rows within eps."""
    a = np.atleast_2d(np.asarray(a, float))
    b = np.atleast_2d(np.asarray(b, float))
    if a.shape != b.shape:
        return False
    used = np.zeros(b.shape[0], dtype=bool)
    for row in a:
        dist = np.linalg.norm(b - row, axis=1)
        dist[used] = np.inf
        j = int(np.argmin(dist))
        if dist[j] > eps:
            return False
        used[j] = True
    return bool(used.all())


def grid_contains_translate(outer, inner, res=80, slack=1e-7):
    """Brute force: scan candidate translations on a grid.

    Returns True as soon as one grid translation puts every vertex of
    `inner` inside `outer`. A False is only meaningful for instances with
    a robust margin; callers are expected to test away from the critical
    scale.
    """
    lo = outer.vertices.min(axis=0) - inner.vertices.min(axis=0)
    hi = outer.vertices.max(axis=0) - inner.vertices.max(axis=0)
    axes = [np.linspace(l, h, res) if h > l else np.array([(l + h) / 2])
            for l, h in zip(lo, hi)]
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, outer.dim)
    a, b = outer.facet_normals, outer.facet_offsets
    v = inner.vertices
    for t in mesh:
        pts = v + t
        if (a @ pts.T <= b[:, None] + slack).all():
            return True
    return False
