import numpy as np
import pytest

from grinv.gf import FFMatrix
from grinv.modules import (
    PModule,
    colimit,
    direct_sum,
    generalized_rank,
    generalized_rank_fast,
    grid_interval_module,
    interval_module,
    limit,
    pullback,
    zero_module,
)
from grinv.posets import (
    FinitePoset,
    GridInterval,
    enumerate_grid_intervals,
    grid_poset,
)
from grinv.sampling import (
    random_grid_interval,
    random_interval_decomposable,
    random_module,
    random_poset,
)


def all_pairs_limit_dim(module):
    """Oracle: sections constrained on every comparable pair, not just covers."""
    offs = [0]
    for d in module.dims:
        offs.append(offs[-1] + d)
    rows = []
    for a in range(module.poset.n):
        for b in range(module.poset.n):
            if a != b and module.poset.leq[a, b]:
                block = np.zeros((module.dims[b], offs[-1]), dtype=np.int64)
                block[:, offs[b] : offs[b + 1]] = np.eye(module.dims[b], dtype=np.int64)
                block[:, offs[a] : offs[a + 1]] = -module.transition(a, b)
                rows.append(block)
    if not rows:
        return offs[-1]
    mat = FFMatrix(np.vstack(rows), module.p)
    return mat.kernel_basis().cols


def all_pairs_colimit_dim(module):
    offs = [0]
    for d in module.dims:
        offs.append(offs[-1] + d)
    cols = []
    for a in range(module.poset.n):
        for b in range(module.poset.n):
            if a != b and module.poset.leq[a, b]:
                block = np.zeros((offs[-1], module.dims[a]), dtype=np.int64)
                block[offs[a] : offs[a + 1], :] = np.eye(module.dims[a], dtype=np.int64)
                block[offs[b] : offs[b + 1], :] = -module.transition(a, b)
                cols.append(block)
    if not cols:
        return offs[-1]
    mat = FFMatrix(np.hstack(cols), module.p)
    return offs[-1] - mat.rank()


# -- construction -----------------------------------------------------------------


def test_interval_module_simple_and_full(chain4):
    simple = interval_module(chain4, [1])
    assert simple.dims == (0, 1, 0, 0)
    c3 = FinitePoset.chain(3)
    full = interval_module(c3, [0, 1, 2])
    assert full.dims == (1, 1, 1)
    assert all(full._edge(a, b).tolist() == [[1]] for a, b in c3.covers)


def test_interval_module_on_chain4_prefix(chain4):
    m = interval_module(chain4, [0, 1, 2])
    assert m.dims == (1, 1, 1, 0)


def test_interval_module_rejects_nonintervals(chain4):
    with pytest.raises(ValueError):
        interval_module(chain4, [0, 2])


def test_direct_sum_dims_and_blocks(chain4):
    a = interval_module(chain4, [0, 1, 2, 3])
    b = interval_module(chain4, [1, 2])
    s = direct_sum(a, b)
    assert s.dims == (1, 2, 2, 1)
    assert s._edge(1, 2).tolist() == [[1, 0], [0, 1]]
    z = zero_module(chain4)
    same = direct_sum(a, z)
    assert same.dims == a.dims
    assert all(np.array_equal(same._edge(*e), a._edge(*e)) for e in chain4.covers)


def test_direct_sum_rank_additive(rng):
    win = grid_poset(3, 3, (0, 0))
    ints = enumerate_grid_intervals(win)
    for _ in range(5):
        m, _ = random_interval_decomposable(rng, win, 3)
        n, _ = random_interval_decomposable(rng, win, 3)
        s = direct_sum(m, n)
        for gi in ints[:: max(1, len(ints) // 11)]:
            assert generalized_rank(s, gi) == generalized_rank(m, gi) + generalized_rank(n, gi)


def test_functoriality_check_rejects_corruption():
    win = grid_poset(2, 2, (0, 0))
    dims = [1, 1, 1, 1]
    good = {
        (0, 1): [[1]], (0, 2): [[1]], (1, 3): [[1]], (2, 3): [[1]],
    }
    PModule(win, dims, good)  # fine
    bad = dict(good)
    bad[(2, 3)] = [[0]]
    with pytest.raises(ValueError, match="functoriality"):
        PModule(win, dims, bad)


def test_shape_mismatch_rejected(chain4):
    with pytest.raises(ValueError, match="shape"):
        PModule(chain4, [1, 2, 0, 0], {(0, 1): [[1]]})


# -- pullback -----------------------------------------------------------------------


def test_pullback_identity(rng):
    win = grid_poset(3, 3, (0, 0))
    m, _ = random_interval_decomposable(rng, win, 3)
    back = pullback(m, list(range(win.n)), win)
    assert back.dims == m.dims
    for e in win.covers:
        assert np.array_equal(back._edge(*e), m._edge(*e))


def test_pullback_constant_map(chain4):
    q = FinitePoset.chain(1)
    n = PModule(q, [2], {})
    m = pullback(n, [0, 0, 0, 0], chain4)
    assert m.dims == (2, 2, 2, 2)
    for a, b in chain4.covers:
        assert np.array_equal(m._edge(a, b), np.eye(2, dtype=np.int64))


def test_pullback_rejects_non_monotone(chain4):
    q = FinitePoset.chain(2)
    n = PModule(q, [1, 1], {(0, 1): [[1]]})
    with pytest.raises(ValueError, match="order-preserving"):
        pullback(n, [1, 0, 0, 1], chain4)


# -- restriction, limits, colimits ------------------------------------------------------


def test_restrict_whole_poset_is_identity(rng):
    win = grid_poset(3, 2, (0, 0))
    m, _ = random_interval_decomposable(rng, win, 3)
    r = m.restrict(range(win.n))
    assert r.dims == m.dims
    for e in win.covers:
        assert np.array_equal(r._edge(*e), m._edge(*e))


def test_restrict_of_interval_module_is_all_ones(chain4):
    m = interval_module(chain4, [0, 1, 2, 3])
    r = m.restrict([1, 2])
    assert r.dims == (1, 1)
    assert r._edge(0, 1).tolist() == [[1]]


def test_limit_singleton_is_the_space():
    p = grid_poset(1, 1)
    m = PModule(p, [3], {})
    assert limit(m).dim == 3
    qdim, _ = colimit(m)
    assert qdim == 3


def test_limit_colimit_of_interval_module_are_lines(grid33):
    gi = GridInterval.from_points([(0, 0), (1, 0), (0, 1)])
    m = grid_interval_module(grid33, gi)
    sub = m.restrict([0, 1, 3])  # ids of the three points
    assert limit(sub).dim == 1
    assert colimit(sub)[0] == 1


def test_limit_sections_satisfy_cover_constraints(rng):
    win = grid_poset(3, 3, (0, 0))
    m = random_module(rng, win)
    sec = limit(m)
    offs = sec.offsets
    for a, b in win.covers:
        for col in range(sec.dim):
            va = sec.basis.a[offs[a] : offs[a + 1], col]
            vb = sec.basis.a[offs[b] : offs[b + 1], col]
            assert np.array_equal((m._edge(a, b) @ va) % m.p, vb)


def test_cover_only_limits_match_all_pairs_oracle(rng):
    for _ in range(12):
        p = random_poset(rng, 6)
        mods = []
        from conftest import brute_force_intervals

        ivs = brute_force_intervals(p)
        for _ in range(2):
            ms = ivs[int(rng.integers(0, len(ivs)))]
            mods.append(interval_module(p, ms))
        m = direct_sum(*mods).scramble(rng)
        if not p.is_connected_subset(range(p.n)):
            continue
        assert limit(m).dim == all_pairs_limit_dim(m)
        assert colimit(m)[0] == all_pairs_colimit_dim(m)


def test_staircase_fixture_limit_matches_all_pairs_oracle():
    from grinv.fixtures import build_fixture

    fx = build_fixture("staircase-zz-pair")
    stair = fx.intervals["I"]
    idx = fx.poset.id_of_coord()
    ids = [idx[pt] for pt in stair.points()]
    for module in (fx.modules["m"], fx.modules["n"]):
        sub = module.restrict(ids)
        assert limit(sub).dim == all_pairs_limit_dim(sub)
        assert colimit(sub)[0] == all_pairs_colimit_dim(sub)


def test_colimit_dim_bounded_by_total(rng):
    win = grid_poset(3, 3, (0, 0))
    for _ in range(5):
        m = random_module(rng, win)
        assert colimit(m)[0] <= sum(m.dims)


# -- generalized rank ---------------------------------------------------------------


def test_rank_of_interval_module_is_containment_indicator(rng, grid33):
    for _ in range(6):
        j = random_grid_interval(rng, (0, 0, 2, 2))
        kj = grid_interval_module(grid33, j)
        for _ in range(8):
            i = random_grid_interval(rng, (0, 0, 2, 2))
            want = 1 if j.issuperset(i) else 0
            assert generalized_rank(kj, i) == want
            assert generalized_rank_fast(kj, i) == want


def test_rank_zero_on_zero_dimension_points(grid33):
    m = grid_interval_module(grid33, GridInterval.from_points([(0, 0)]))
    assert generalized_rank(m, GridInterval.rectangle((0, 0), (1, 1))) == 0


def test_rank_errors_on_empty_or_disconnected(grid22):
    m = grid_interval_module(grid22, GridInterval.rectangle((0, 0), (1, 1)))
    with pytest.raises(ValueError):
        generalized_rank(m, [])
    with pytest.raises(ValueError):
        generalized_rank(m, [1, 2])  # antichain


def test_ambient_extension_by_zero(grid22):
    m = grid_interval_module(grid22, GridInterval.rectangle((0, 0), (1, 1)))
    outside = GridInterval.rectangle((0, 0), (2, 2))
    assert generalized_rank(m, outside) == 0
    assert generalized_rank_fast(m, outside) == 0


def test_rank_monotone_under_containment(rng):
    win = grid_poset(3, 3, (0, 0))
    ints = enumerate_grid_intervals(win)
    for _ in range(4):
        m = random_module(rng, win)
        vals = {gi: generalized_rank_fast(m, gi) for gi in ints}
        for i in ints:
            for j in ints:
                if j.issuperset(i):
                    assert vals[i] >= vals[j]


def test_rank_counts_containing_summands(rng):
    win = grid_poset(3, 3, (0, 0))
    for _ in range(6):
        m, barcode = random_interval_decomposable(rng, win, 5)
        for _ in range(8):
            i = random_grid_interval(rng, (0, 0, 2, 2))
            want = sum(mult for pts, mult in barcode.items() if i.member_set <= pts)
            assert generalized_rank(m, i) == want


def test_rank_over_connected_sets_counts_containing_summands(rng):
    win = grid_poset(3, 3, (0, 0))
    from grinv.posets import enumerate_connected

    conn = enumerate_connected(win)
    coords = win.grid_coords
    for _ in range(4):
        m, barcode = random_interval_decomposable(rng, win, 4)
        for sub in conn[:: max(1, len(conn) // 60)]:
            pts = frozenset(coords[i] for i in sub.members)
            want = sum(mult for supp, mult in barcode.items() if pts <= supp)
            assert generalized_rank(m, sub) == want


def test_fast_equals_slow_on_all_intervals(rng):
    win = grid_poset(3, 3, (0, 0))
    ints = enumerate_grid_intervals(win)
    for _ in range(4):
        m = random_module(rng, win)
        for gi in ints:
            assert generalized_rank_fast(m, gi) == generalized_rank(m, gi)


def test_fast_equals_slow_sampled_4x4(rng):
    win = grid_poset(4, 4, (0, 0))
    for _ in range(3):
        m = random_module(rng, win)
        for _ in range(40):
            gi = random_grid_interval(rng, (0, 0, 3, 3))
            assert generalized_rank_fast(m, gi) == generalized_rank(m, gi)


def test_rectangle_rank_equals_corner_map_rank(rng):
    win = grid_poset(4, 4, (0, 0))
    for _ in range(5):
        m = random_module(rng, win)
        idx = win.id_of_coord()
        for _ in range(6):
            x0, y0 = int(rng.integers(0, 3)), int(rng.integers(0, 3))
            x1, y1 = int(rng.integers(x0, 4)), int(rng.integers(y0, 4))
            rect = GridInterval.rectangle((x0, y0), (x1, y1))
            t = m.transition(idx[(x0, y0)], idx[(x1, y1)])
            assert generalized_rank_fast(m, rect) == FFMatrix(t, m.p).rank()


# -- serialisation --------------------------------------------------------------------


def test_module_text_round_trip(rng):
    win = grid_poset(3, 2, (0, 0))
    m = random_module(rng, win, p=3, allow_nondecomposable=False)
    back = PModule.from_text(m.to_text())
    assert back.dims == m.dims
    assert back.p == m.p
    for e in win.covers:
        assert np.array_equal(back._edge(*e), m._edge(*e))


def test_module_text_round_trip_abstract_poset(rng):
    p = random_poset(rng, 6)
    from conftest import brute_force_intervals

    ivs = brute_force_intervals(p)
    m = interval_module(p, ivs[int(rng.integers(0, len(ivs)))])
    back = PModule.from_text(m.to_text())
    assert back.dims == m.dims
