import numpy as np
import pytest

from nonsep.cubes import (
    IntegerCubeFamily,
    bounding_box,
    construct_extremal,
    cube_family_from_dict,
    cube_is_wns,
    exhaustive_max,
    hull_metrics,
    shadow_normalize,
)
from nonsep.errors import InputError
from nonsep.family import is_wns

F5 = [(1, 0), (4, 1), (3, 4), (0, 3), (2, 2)]


def fam(offs):
    return IntegerCubeFamily(np.array(offs))


def offsets_sorted(f):
    return sorted(map(tuple, f.offsets.tolist()))


def test_validation():
    with pytest.raises(InputError):
        fam([(0, 0), (0, 0)])
    with pytest.raises(InputError):
        fam([(0.5, 0), (1, 1)])
    with pytest.raises(InputError):
        IntegerCubeFamily(np.zeros((0, 2)))
    with pytest.raises(InputError):
        IntegerCubeFamily(np.array([1, 2, 3]))
    single = fam([(7, -3)])
    assert single.n == 1 and single.dim == 2


def test_integer_floats_accepted():
    f = fam([(0.0, 1.0), (2.0, 0.0)])
    assert f.offsets.dtype == np.int64
    assert offsets_sorted(f) == [(0, 1), (2, 0)]


def test_axis_separability_examples():
    assert cube_is_wns(fam(F5))
    assert not cube_is_wns(fam([(0, 0), (2, 2)]))
    assert cube_is_wns(fam([(0, 0), (1, 1)]))
    assert cube_is_wns(fam([(0, 0), (1, 0)]))
    # contiguous in x, gap in y
    assert not cube_is_wns(fam([(0, 0), (1, 2)]))


def test_bounding_box_examples():
    lo, hi = bounding_box(fam(F5))
    assert lo.tolist() == [0, 0] and hi.tolist() == [5, 5]
    lo, hi = bounding_box(fam([(2, 5)]))
    assert lo.tolist() == [2, 5] and hi.tolist() == [3, 6]
    lo, hi = bounding_box(fam([(0, 0), (1, 0)]))
    assert lo.tolist() == [0, 0] and hi.tolist() == [2, 1]


def test_hull_metrics_small_cases():
    assert hull_metrics(fam([(0, 0)])) == (1.0, 4.0)
    for k in (2, 3, 5):
        row = fam([(i, 0) for i in range(k)])
        assert hull_metrics(row) == (float(k), float(2 * k + 2))
    with pytest.raises(InputError):
        hull_metrics(fam([(0, 0, 0), (1, 0, 0)]))


def test_hull_metrics_two_diagonal_cubes():
    # hexagon: four unit edges and two diagonals
    area, per = hull_metrics(fam([(0, 0), (1, 1)]))
    assert area == 3.0
    assert per == pytest.approx(4 + 2 * np.sqrt(2), abs=1e-12)


def test_construction_pinned_offsets():
    assert offsets_sorted(construct_extremal(4)) == sorted(
        [(1, 0), (3, 1), (2, 3), (0, 2)])
    assert offsets_sorted(construct_extremal(5)) == sorted(F5)
    with pytest.raises(InputError):
        construct_extremal(3)
    with pytest.raises(InputError):
        construct_extremal(5, d=3)


@pytest.mark.parametrize("n", range(4, 13))
def test_construction_attains_closed_forms(n):
    f = construct_extremal(n)
    assert f.n == n
    assert cube_is_wns(f)
    lo, hi = bounding_box(f)
    assert lo.tolist() == [0, 0] and hi.tolist() == [n, n]
    area, per = hull_metrics(f)
    assert area == float(n * n - 2 * n + 4)
    assert per == pytest.approx(4 + 4 * np.sqrt(n * n - 4 * n + 5), abs=1e-9)


def test_normalize_two_cube_column():
    out = shadow_normalize(fam([(0, 0), (0, 1)]))
    assert offsets_sorted(out) in ([(0, 0), (1, 1)], [(0, 1), (1, 0)])
    lo, hi = bounding_box(out)
    assert (hi - lo).tolist() == [2, 2]


@pytest.mark.parametrize("objective", ["area", "perimeter"])
def test_normalize_spreads_column(objective):
    col = fam([(0, k) for k in range(5)])
    before = dict(zip(("area", "perimeter"), hull_metrics(col)))[objective]
    out = shadow_normalize(col, objective)
    assert cube_is_wns(out)
    lo, hi = bounding_box(out)
    assert (hi - lo).tolist() == [5, 5]
    after = dict(zip(("area", "perimeter"), hull_metrics(out)))[objective]
    assert after > before


def test_normalize_fixed_point():
    f = construct_extremal(6)
    out = shadow_normalize(f, "perimeter")
    assert offsets_sorted(out) == offsets_sorted(f)


def test_normalize_never_decreases_objective():
    rng = np.random.default_rng(11)
    done = 0
    while done < 20:
        n = int(rng.integers(2, 6))
        cells = rng.choice(16, size=n, replace=False)
        f = IntegerCubeFamily(np.stack([cells // 4, cells % 4], axis=1))
        if not cube_is_wns(f):
            continue
        done += 1
        for objective in ("area", "perimeter"):
            before = dict(zip(("area", "perimeter"), hull_metrics(f)))[objective]
            out = shadow_normalize(f, objective)
            after = dict(zip(("area", "perimeter"), hull_metrics(out)))[objective]
            assert after >= before - 1e-9
            assert cube_is_wns(out)


def test_normalize_three_dim_heuristic():
    col = IntegerCubeFamily(np.array([(0, 0, k) for k in range(3)]))
    out = shadow_normalize(col, "volume")
    assert cube_is_wns(out)
    lo, hi = bounding_box(out)
    assert (hi - lo).tolist() == [3, 3, 3]
    with pytest.raises(InputError):
        shadow_normalize(col, "area")


def test_normalize_rejections():
    with pytest.raises(InputError):
        shadow_normalize(fam([(0, 0), (2, 2)]))
    with pytest.raises(InputError):
        shadow_normalize(fam([(0, 0), (1, 1)]), "girth")


@pytest.mark.parametrize("n", [4, 5, 6])
def test_search_area_matches_closed_form(n):
    f, val = exhaustive_max(n, "area")
    assert val == float(n * n - 2 * n + 4)
    assert cube_is_wns(f)
    lo, hi = bounding_box(f)
    assert lo.tolist() == [0, 0] and hi.tolist() == [n, n]


def test_search_area_argmax_is_lex_first():
    f, _ = exhaustive_max(5, "area")
    assert f.offsets.tolist() == [[0, 1], [1, 4], [2, 2], [3, 0], [4, 3]]


@pytest.mark.parametrize("n", [4, 5, 6])
def test_search_perimeter_beats_corner_construction(n):
    # frozen from the enumeration itself: the best staircases split the
    # two diagonal runs as (n-3, n-1), and sqrt(k^2+1) is convex in k,
    # so they outrun the corner-glued configuration's (n-2, n-2) split
    f, val = exhaustive_max(n, "perimeter")
    record = 4 + 2 * np.sqrt((n - 3) ** 2 + 1) + 2 * np.sqrt((n - 1) ** 2 + 1)
    glued = hull_metrics(construct_extremal(n))[1]
    assert val == pytest.approx(record, abs=1e-9)
    assert val > glued + 0.02
    assert cube_is_wns(f)
    lo, hi = bounding_box(f)
    assert lo.tolist() == [0, 0] and hi.tolist() == [n, n]


def test_search_perimeter_argmax_pinned():
    f, _ = exhaustive_max(4, "perimeter")
    assert f.offsets.tolist() == [[0, 0], [1, 3], [2, 2], [3, 1]]


def test_search_wider_box_spot_check():
    # four cubes cannot occupy five slabs, so the 5-box adds nothing
    _, area5 = exhaustive_max(4, "area", box_size=5)
    assert area5 == 12.0
    _, per5 = exhaustive_max(4, "perimeter", box_size=5)
    _, per4 = exhaustive_max(4, "perimeter")
    assert per5 == pytest.approx(per4, abs=1e-12)


def test_search_deterministic():
    a, va = exhaustive_max(5, "perimeter")
    b, vb = exhaustive_max(5, "perimeter")
    assert va == vb and a.offsets.tolist() == b.offsets.tolist()


def test_search_rejections():
    for bad in (3, 7):
        with pytest.raises(InputError):
            exhaustive_max(bad, "area")
    with pytest.raises(InputError):
        exhaustive_max(4, "width")
    with pytest.raises(InputError):
        exhaustive_max(5, "area", box_size=4)
    with pytest.raises(InputError):
        exhaustive_max(4, "area", box_size=8)


def test_axis_check_agrees_with_general_route():
    rng = np.random.default_rng(5)
    seen = {True: 0, False: 0}
    for _ in range(40):
        n = int(rng.integers(2, 6))
        cells = rng.choice(16, size=n, replace=False)
        f = IntegerCubeFamily(np.stack([cells // 4, cells % 4], axis=1))
        verdict, _ = is_wns(f.as_homothets())
        assert verdict == cube_is_wns(f)
        seen[verdict] += 1
    assert seen[True] >= 5 and seen[False] >= 5


def test_json_round_trip():
    f = fam(F5)
    d = f.to_dict()
    assert d["d"] == 2
    back = cube_family_from_dict(d)
    assert offsets_sorted(back) == offsets_sorted(f)
    with pytest.raises(InputError):
        cube_family_from_dict({"d": 2})
    with pytest.raises(InputError):
        cube_family_from_dict({"d": 3, "offsets": [[0, 0], [1, 1]]})
