import pytest

from grinv.fixtures import build_fixture
from grinv.gf import FFMatrix
from grinv.invariants import RankCache
from grinv.modules import generalized_rank, generalized_rank_fast, grid_interval_module
from grinv.posets import GridInterval, grid_poset
from grinv.sampling import (
    random_faithful_path,
    random_grid_interval,
    random_interval_decomposable,
    random_module,
)
from grinv.zigzag import (
    ZigzagPath,
    boundary_cap,
    enumerate_simple_paths,
    full_bar_multiplicity,
    gri_bounds_from_zib,
    interval_hull,
    is_solid,
    is_tame,
    is_thin,
    max_zz,
    maximal_simple_paths,
    min_zz,
    multiplicity_bounds,
    negative_cover_path,
    rank_bounds_from_gri,
    simple_tame_path,
    zib,
    zigzag_barcode,
    zigzag_rank,
)


def chain_barcode_oracle(module, points):
    """Classical persistence of a monotone run, via plain composite-map ranks."""
    idx = module.poset.id_of_coord()
    ids = [idx[pt] for pt in points]
    n = len(ids)

    def r(i, j):
        if i > j:
            return 0
        t = module.transition(ids[i], ids[j])
        return FFMatrix(t, module.p).rank()

    bars = {}
    for i in range(n):
        for j in range(i, n):
            m = r(i, j)
            if i > 0:
                m -= r(i - 1, j)
            if j < n - 1:
                m -= r(i, j + 1)
            if i > 0 and j < n - 1:
                m += r(i - 1, j + 1)
            if m:
                bars[(i, j)] = m
    return bars


# -- paths and hulls ----------------------------------------------------------------


def test_path_validation():
    with pytest.raises(ValueError):
        ZigzagPath(())
    with pytest.raises(ValueError):
        ZigzagPath(((0, 0), (0, 0)))
    with pytest.raises(ValueError):
        ZigzagPath(((0, 1), (1, 0)))  # incomparable step
    p = ZigzagPath(((0, 0), (2, 2), (2, 0)))  # comparable but not faithful
    assert not p.faithful


def test_path_flags():
    mono = ZigzagPath(((0, 0), (1, 0), (1, 1)))
    assert mono.faithful and mono.simple and mono.monotone and not mono.negative
    neg = ZigzagPath(((2, 0), (1, 0), (1, 1), (0, 1)))
    assert neg.negative and not neg.monotone
    assert neg.reverse().negative
    revisit = ZigzagPath(((0, 0), (1, 0), (0, 0)))
    assert revisit.faithful and not revisit.simple


def test_canonical_orientation():
    p = ZigzagPath(((1, 1), (1, 0), (0, 0)))
    assert p.canonical().points[0] == (0, 0)
    assert p.canonical() == p.reverse().canonical()


def test_hull_of_single_point_and_segment():
    assert interval_hull(ZigzagPath(((2, 3),))).member_set == {(2, 3)}
    seg = ZigzagPath(((0, 0), (1, 0), (1, 1)))
    assert interval_hull(seg).member_set == {(0, 0), (1, 0), (1, 1), (0, 1)}


def test_hull_matches_brute_scan(rng, grid33):
    for _ in range(20):
        path = random_faithful_path(rng, grid33, int(rng.integers(1, 8)))
        hull = interval_hull(path)
        pts = set(path.points)
        xs = [x for x, _ in pts]
        ys = [y for _, y in pts]
        scan = {
            (x, y)
            for x in range(min(xs), max(xs) + 1)
            for y in range(min(ys), max(ys) + 1)
            if any(px <= x and py <= y for px, py in pts)
            and any(x <= px and y <= py for px, py in pts)
        }
        assert hull.member_set == scan


def test_path_text_round_trip():
    p = ZigzagPath(((0, 0), (1, 0), (1, 1), (1, 2)))
    assert ZigzagPath.from_text(p.to_text()) == p


# -- fences, tameness, thin/solid ----------------------------------------------------


def test_fences_of_rectangle():
    rect = GridInterval.rectangle((0, 0), (2, 1))
    assert min_zz(rect).points == ((0, 0),)
    assert max_zz(rect).points == ((2, 1),)


def test_boundary_cap_is_tame(rng):
    for _ in range(25):
        gi = random_grid_interval(rng, (0, 0, 4, 4))
        cap = boundary_cap(gi)
        assert cap.faithful
        assert is_tame(cap)
        assert interval_hull(cap).member_set == gi.member_set


def test_tame_detection_on_handmade_paths():
    stair = GridInterval(0, ((1, 3), (0, 2)))
    cap = boundary_cap(stair)
    assert is_tame(cap)
    # same hull shape, but the lower fence never appears contiguously
    around = ZigzagPath(((1, 0), (2, 0), (2, 1), (1, 1), (0, 1)))
    assert not is_tame(around)
    single = ZigzagPath(((1, 1),))
    assert is_tame(single)


def test_monotone_and_negative_paths_are_tame(rng, grid33):
    mono = ZigzagPath(((0, 0), (0, 1), (1, 1), (2, 1), (2, 2)))
    assert is_tame(mono)
    neg = ZigzagPath(((2, 0), (1, 0), (1, 1), (0, 1), (0, 2)))
    assert is_tame(neg)


def test_thin_and_solid_classification():
    row = GridInterval.rectangle((0, 0), (3, 0))
    assert is_thin(row) and is_solid(row)
    square = GridInterval.rectangle((0, 0), (1, 1))
    assert not is_thin(square) and is_solid(square)
    stair = GridInterval(0, ((1, 3), (0, 2)))
    assert not is_thin(stair) and not is_solid(stair)
    elbow = GridInterval(0, ((1, 2), (0, 1)))
    assert is_thin(elbow)  # one overlap column: traced by a negative path
    fat = GridInterval(0, ((0, 2), (0, 1)))
    assert not is_thin(fat)  # contains a 2x2 square
    vee = GridInterval(0, ((1, 1), (0, 1)))
    assert is_thin(vee)


def test_negative_cover_path_traces_thin_intervals(rng):
    vee = GridInterval(0, ((2, 3), (1, 2), (0, 1)))
    path = negative_cover_path(vee)
    assert path.negative and path.simple
    assert set(path.points) == vee.member_set
    with pytest.raises(ValueError):
        negative_cover_path(GridInterval.rectangle((0, 0), (1, 1)))


def test_simple_tame_path_for_solid_intervals(rng):
    found = 0
    for _ in range(40):
        gi = random_grid_interval(rng, (0, 0, 4, 4))
        path = simple_tame_path(gi)
        if path is None:
            continue
        found += 1
        assert path.simple and is_tame(path)
        assert interval_hull(path).member_set == gi.member_set
    assert found > 10


def test_staircase_pair_interval_is_not_solid():
    stair = GridInterval(0, ((1, 3), (0, 2)))
    assert simple_tame_path(stair) is None


# -- zigzag ranks and barcodes ----------------------------------------------------------


def test_single_point_barcode_is_dimension(grid33, rng):
    m = random_module(rng, grid33)
    idx = grid33.id_of_coord()
    for pt in ((0, 0), (1, 1), (2, 2)):
        bc = zigzag_barcode(m, ZigzagPath((pt,)))
        total = sum(v for _, v in bc.bars)
        assert total == m.dims[idx[pt]]


def test_chain_barcode_matches_composite_rank_oracle(rng):
    win = grid_poset(6, 1, (0, 0))
    for _ in range(10):
        m = random_module(rng, win, allow_nondecomposable=False)
        pts = tuple((i, 0) for i in range(6))
        bc = zigzag_barcode(m, ZigzagPath(pts))
        assert dict(bc.bars) == chain_barcode_oracle(m, pts)


def test_barcode_counts_dimensions_at_every_index(rng, grid33):
    idx = grid33.id_of_coord()
    for _ in range(8):
        m = random_module(rng, grid33)
        path = random_faithful_path(rng, grid33, int(rng.integers(2, 9)))
        bc = zigzag_barcode(m, path)
        for i, pt in enumerate(path.points):
            assert bc.total_at(i) == m.dims[idx[pt]]


def test_barcode_reversal_symmetry(rng, grid33):
    for _ in range(8):
        m = random_module(rng, grid33)
        path = random_faithful_path(rng, grid33, 6)
        fwd = zigzag_barcode(m, path)
        bwd = zigzag_barcode(m, path.reverse())
        assert dict(fwd.reflected().bars) == dict(bwd.bars)


def test_full_bar_of_covering_interval_module(grid33, rng):
    gi = GridInterval.from_points([(1, 0), (2, 0), (0, 1), (1, 1)])
    m = grid_interval_module(grid33, gi)
    cap = boundary_cap(gi)
    assert full_bar_multiplicity(m, cap) == 1


def test_tame_paths_compute_hull_rank(rng, grid33):
    cache_hits = 0
    for _ in range(6):
        m = random_module(rng, grid33)
        for _ in range(10):
            path = random_faithful_path(rng, grid33, int(rng.integers(1, 9)))
            if not is_tame(path):
                continue
            cache_hits += 1
            assert zigzag_rank(m, path) == generalized_rank_fast(m, interval_hull(path))
    assert cache_hits > 8


def test_tame_paths_on_5x5_sampled(rng):
    win = grid_poset(5, 5, (0, 0))
    hits = 0
    for _ in range(3):
        m = random_module(rng, win)
        cache = RankCache(m)
        for _ in range(40):
            path = random_faithful_path(rng, win, int(rng.integers(1, 11)))
            if not is_tame(path):
                continue
            hits += 1
            assert zigzag_rank(m, path) == cache.rank(interval_hull(path))
        for _ in range(4):
            gi = random_grid_interval(rng, (0, 0, 4, 4))
            hits += 1
            assert zigzag_rank(m, boundary_cap(gi)) == cache.rank(gi)
    assert hits > 20


def test_zigzag_rank_on_nonfaithful_path():
    fx = build_fixture("betti-pair")
    gam = fx.paths["gamma"]
    assert not gam.faithful
    assert zigzag_rank(fx.modules["m"], gam) == 1
    assert zigzag_rank(fx.modules["n"], gam) == 0
    bc = zigzag_barcode(fx.modules["m"], gam)
    assert bc.full_bar() == 1
    bcn = zigzag_barcode(fx.modules["n"], gam)
    assert bcn.full_bar() == 0


def test_zib_over_monotone_paths_reproduces_segment_ranks(rng, grid33):
    m, _ = random_interval_decomposable(rng, grid33, 4)
    mono = ZigzagPath(((0, 0), (1, 0), (1, 1), (2, 1), (2, 2)))
    bc = zib(m, [mono])[mono.canonical()]
    cache = RankCache(m)
    pts = mono.points
    for i in range(len(pts)):
        for j in range(i, len(pts)):
            seg = GridInterval.from_points(
                interval_hull(ZigzagPath(pts[i : j + 1])).points()
            )
            full = sum(v for (a, b), v in bc.bars if a <= i and j <= b)
            assert full == cache.rank(seg)


def test_zib_of_zero_module(grid33):
    from grinv.modules import zero_module

    z = zero_module(grid33)
    path = ZigzagPath(((0, 0), (1, 0), (1, 1)))
    assert zib(z, [path])[path.canonical()].bars == ()


def test_staircase_fixture_six_maximal_paths_and_ranks():
    fx = build_fixture("staircase-zz-pair")
    m, n = fx.modules["m"], fx.modules["n"]
    stair = fx.intervals["I"]
    paths = maximal_simple_paths(stair.points())
    assert len(paths) == 6
    for path in paths:
        assert dict(zigzag_barcode(m, path).bars) == dict(zigzag_barcode(n, path).bars)
    assert generalized_rank(m, stair) == 1
    assert generalized_rank(n, stair) == 0


def test_grid3_fixture_path_barcodes_differ():
    fx = build_fixture("grid3-zib-pair")
    gam = fx.paths["gamma"]
    bm = zigzag_barcode(fx.modules["m"], gam)
    bn = zigzag_barcode(fx.modules["n"], gam)
    assert dict(bm.bars) != dict(bn.bars)


# -- bounds --------------------------------------------------------------------------


def test_rank_bounds_tame_equality(rng, grid33):
    for _ in range(5):
        m = random_module(rng, grid33)
        cache = RankCache(m)
        path = boundary_cap(random_grid_interval(rng, (0, 0, 2, 2)))
        lo, hi = rank_bounds_from_gri(path, cache.rank)
        assert lo == hi == zigzag_rank(m, path)


def test_rank_bounds_singleton(rng, grid33):
    m = random_module(rng, grid33)
    cache = RankCache(m)
    idx = grid33.id_of_coord()
    path = ZigzagPath(((1, 1),))
    lo, hi = rank_bounds_from_gri(path, cache.rank)
    assert lo == hi == m.dims[idx[(1, 1)]]


def test_rank_bounds_bracket_oracle(rng):
    win = grid_poset(4, 4, (0, 0))
    for _ in range(6):
        m = random_module(rng, win)
        cache = RankCache(m)
        for _ in range(6):
            path = random_faithful_path(rng, win, int(rng.integers(2, 9)))
            lo, hi = rank_bounds_from_gri(path, cache.rank)
            true = zigzag_rank(m, path)
            assert lo <= true <= hi
            if is_tame(path):
                assert lo == hi == true


def test_multiplicity_bounds_bracket_oracle(rng):
    win = grid_poset(4, 4, (0, 0))
    for _ in range(5):
        m = random_module(rng, win)
        cache = RankCache(m)
        path = random_faithful_path(rng, win, int(rng.integers(3, 8)))
        bc = zigzag_barcode(m, path)
        n = len(path.points)
        for i in range(n):
            for j in range(i, n):
                lo, hi = multiplicity_bounds(path, (i, j), cache.rank)
                assert lo <= bc.multiplicity(i, j) <= hi


def test_multiplicity_bounds_exact_on_monotone(rng, grid33):
    for _ in range(5):
        m = random_module(rng, grid33)
        cache = RankCache(m)
        path = ZigzagPath(((0, 0), (0, 1), (1, 1), (2, 1), (2, 2)))
        bc = zigzag_barcode(m, path)
        n = len(path.points)
        for i in range(n):
            for j in range(i, n):
                lo, hi = multiplicity_bounds(path, (i, j), cache.rank)
                assert lo == hi == bc.multiplicity(i, j)


def test_multiplicity_bounds_zero_module(grid33):
    from grinv.modules import zero_module

    z = zero_module(grid33)
    cache = RankCache(z)
    path = ZigzagPath(((0, 0), (1, 0), (1, 1)))
    assert multiplicity_bounds(path, (0, 1), cache.rank) == (0, 0)


def test_gri_bounds_thin_and_solid_exact(rng, grid33):
    for _ in range(4):
        m = random_module(rng, grid33)
        vee = GridInterval(0, ((1, 2), (0, 1)))
        lo, hi = gri_bounds_from_zib(m, vee)
        assert lo == hi == generalized_rank_fast(m, vee)
        rect = GridInterval.rectangle((0, 0), (2, 1))
        lo, hi = gri_bounds_from_zib(m, rect)
        assert lo == hi == generalized_rank_fast(m, rect)


def test_gri_bounds_staircase_straddle():
    fx = build_fixture("staircase-zz-pair")
    stair = fx.intervals["I"]
    lo_m, hi_m = gri_bounds_from_zib(fx.modules["m"], stair)
    lo_n, hi_n = gri_bounds_from_zib(fx.modules["n"], stair)
    assert lo_m <= 1 <= hi_m
    assert lo_n <= 0 and hi_n >= 1  # the bound cannot separate the pair
    assert (lo_m, hi_m) == (lo_n, hi_n)


def test_gri_bounds_scale_to_larger_windows(rng):
    # above the exhaustive cap the light families must still be sound and fast
    win = grid_poset(6, 6, (0, 0))
    m = random_module(rng, win)
    fat = GridInterval(0, ((0, 5),) * 4)  # 24 points: far beyond the cap
    import time

    t0 = time.perf_counter()
    lo, hi = gri_bounds_from_zib(m, fat)
    assert time.perf_counter() - t0 < 5
    true = generalized_rank_fast(m, fat)
    assert lo <= true <= hi


def test_enumerate_simple_paths_small():
    pts = [(0, 0), (1, 0)]
    paths = enumerate_simple_paths(pts)
    assert {p.points for p in paths} == {((0, 0),), ((1, 0),), ((0, 0), (1, 0))}
