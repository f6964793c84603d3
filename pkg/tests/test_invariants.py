import pytest

from grinv.fixtures import build_fixture
from grinv.invariants import (
    IntervalDecomposableError,
    containment_dot,
    format_members,
    gpd,
    gri,
    gri_difference_kernel_check,
    indicator_inversion,
    minimal_nonisomorphic_pair,
    minimal_rank_decomposition,
    realize,
    reconstruct_table,
    tightness_pair,
    verify_invertibility,
)
from grinv.modules import direct_sum, grid_interval_module, zero_module
from grinv.posets import (
    GridInterval,
    containment_poset,
    enumerate_grid_intervals,
    grid_poset,
)
from grinv.sampling import random_grid_interval, random_interval_decomposable
from grinv.zigzag import ZigzagPath, zigzag_barcode


def chain_window(n):
    return grid_poset(n, 1, (0, 0))


def segments_of_chain(n):
    return [
        GridInterval.rectangle((i, 0), (j, 0)) for i in range(n) for j in range(i, n)
    ]


# -- gri tables ---------------------------------------------------------------------


def test_gri_of_zero_module(grid33):
    ints = enumerate_grid_intervals(grid33)
    table = gri(zero_module(grid33), ints)
    assert set(table.ranks) == {0}
    assert table.check_monotone() is None


def test_gri_of_interval_module_is_indicator(grid33, rng):
    j = random_grid_interval(rng, (0, 0, 2, 2))
    table = gri(grid_interval_module(grid33, j), enumerate_grid_intervals(grid33))
    for it, r in zip(table.collection, table.ranks):
        assert r == (1 if j.issuperset(it) else 0)


def test_gri_square_fixture_tables():
    fx = build_fixture("ex-2x2-indicator")
    coll = [fx.intervals[k] for k in ("I", "J1", "J2", "J3")]
    tm = gri(fx.modules["m"], coll)
    tn = gri(fx.modules["n"], coll)
    small = [fx.intervals[k] for k in ("J1", "J2", "J3")]
    assert tm.restrict(small).ranks == tn.restrict(small).ranks
    assert tm.rank_of(fx.intervals["I"]) == 1
    assert tn.rank_of(fx.intervals["I"]) == 0


def test_gri_threads_deterministic(rng, grid33):
    m, _ = random_interval_decomposable(rng, grid33, 4)
    ints = enumerate_grid_intervals(grid33)
    assert gri(m, ints).ranks == gri(m, ints, threads=4).ranks


# -- gpd ----------------------------------------------------------------------------


def test_gpd_of_single_interval_module(grid33, rng):
    j = random_grid_interval(rng, (0, 0, 2, 2))
    table = gri(grid_interval_module(grid33, j), enumerate_grid_intervals(grid33))
    d = gpd(table)
    assert len(d.support) == 1
    it, v = d.support[0]
    assert it.member_set == j.member_set and v == 1


def test_gpd_support_inside_rank_support(rng, grid33):
    for _ in range(5):
        m, _ = random_interval_decomposable(rng, grid33, 5)
        table = gri(m, enumerate_grid_intervals(grid33))
        d = gpd(table)
        ranks = table.as_dict()
        positive = {it.member_set for it, r in ranks.items() if r > 0}
        for it, v in d.support:
            assert it.member_set in positive


def test_gpd_zeta_round_trip(rng, grid33):
    ints = enumerate_grid_intervals(grid33)
    for _ in range(5):
        m, _ = random_interval_decomposable(rng, grid33, 5)
        table = gri(m, ints)
        assert reconstruct_table(gpd(table), ints).ranks == table.ranks


def test_gpd_on_chain_equals_zigzag_barcode(rng):
    from grinv.sampling import random_chain_module

    for _ in range(10):
        n = int(rng.integers(2, 7))
        win = chain_window(n)
        idx = win.id_of_coord()
        mod = random_chain_module(rng, n)
        # re-house the chain module on the 1-row window so both machines see it
        maps = {(idx[(i, 0)], idx[(i + 1, 0)]): mod._edge(i, i + 1) for i in range(n - 1)}
        m = type(mod)(win, mod.dims, maps, mod.p, ambient=True)
        table = gri(m, segments_of_chain(n))
        d = gpd(table)
        path = ZigzagPath(tuple((i, 0) for i in range(n)))
        bars = dict(zigzag_barcode(m, path).bars)
        got = {it.member_set: v for it, v in d.support}
        want = {
            frozenset((x, 0) for x in range(i, j + 1)): mult
            for (i, j), mult in bars.items()
        }
        assert got == want
        assert all(v >= 0 for v in got.values())


def test_gpd_additive(rng, grid33):
    ints = enumerate_grid_intervals(grid33)
    for _ in range(4):
        m, _ = random_interval_decomposable(rng, grid33, 3)
        n, _ = random_interval_decomposable(rng, grid33, 3)
        dm = gpd(gri(m, ints))
        dn = gpd(gri(n, ints))
        dsum = gpd(gri(direct_sum(m, n), ints))
        assert dsum == dm + dn


def test_completeness_holds_at_odd_characteristic(grid33):
    import numpy as np

    for p in (3, 5):
        rng = np.random.default_rng(1000 + p)
        ints = enumerate_grid_intervals(grid33)
        for _ in range(5):
            m, barcode = random_interval_decomposable(rng, grid33, 5, p=p)
            d = gpd(gri(m, ints))
            assert {it.member_set: v for it, v in d.support} == barcode


def test_gpd_completeness_recovers_barcode(rng, grid33):
    ints = enumerate_grid_intervals(grid33)
    for _ in range(10):
        m, barcode = random_interval_decomposable(rng, grid33, 6)
        d = gpd(gri(m, ints))
        got = {it.member_set: v for it, v in d.support}
        assert got == barcode


def test_chain4_pair_tables_and_diagrams():
    fx = build_fixture("chain4-pair")
    win = chain_window(4)
    # rebuild on the 1-row window for grid machinery
    seg = lambda i, j: GridInterval.rectangle((i, 0), (j, 0))
    plus = direct_sum(
        grid_interval_module(win, seg(0, 3)), grid_interval_module(win, seg(1, 2))
    )
    minus = direct_sum(
        grid_interval_module(win, seg(0, 2)), grid_interval_module(win, seg(1, 3))
    )
    small = [seg(1, 2), seg(0, 2), seg(1, 3)]
    big = small + [seg(0, 3)]
    tp = gri(plus, big)
    tn = gri(minus, big)
    assert tp.restrict(small).ranks == tn.restrict(small).ranks
    assert tp.rank_of(seg(0, 3)) == 1 and tn.rank_of(seg(0, 3)) == 0
    dp, dn = gpd(tp), gpd(tn)
    assert {it.member_set: v for it, v in dp.support} == {
        seg(0, 3).member_set: 1,
        seg(1, 2).member_set: 1,
    }
    assert {it.member_set: v for it, v in dn.support} == {
        seg(0, 2).member_set: 1,
        seg(1, 3).member_set: 1,
    }
    # the difference is the inverted indicator of the full segment
    d = indicator_inversion(big, seg(0, 3))
    want = {
        seg(0, 3).member_set: 1,
        seg(0, 2).member_set: -1,
        seg(1, 3).member_set: -1,
        seg(1, 2).member_set: 1,
    }
    assert {it.member_set: v for it, v in d.support} == want
    got_diff = {it.member_set: v for it, v in dp.support}
    for it, v in dn.support:
        got_diff[it.member_set] = got_diff.get(it.member_set, 0) - v
    assert {k: v for k, v in got_diff.items() if v} == want


# -- invertibility -------------------------------------------------------------------


def test_invertibility_over_self_is_tautological(rng, grid33):
    ints = enumerate_grid_intervals(grid33)
    m, _ = random_interval_decomposable(rng, grid33, 4)
    table = gri(m, ints)
    report = verify_invertibility(table, list(table.collection))
    assert report.ok


def test_invertibility_over_barcode_support(rng, grid33):
    ints = enumerate_grid_intervals(grid33)
    for _ in range(5):
        m, barcode = random_interval_decomposable(rng, grid33, 4)
        table = gri(m, ints)
        support = [it for it in ints if it.member_set in barcode]
        report = verify_invertibility(table, support)
        assert report.ok
        got = {it.member_set: v for it, v in report.diagram.support}
        assert got == barcode


def test_invertibility_failure_returns_first_witness(grid33):
    # support {corner point} cannot explain the rank of the full square module
    full = GridInterval.rectangle((0, 0), (2, 2))
    corner = GridInterval.from_points([(0, 0)])
    m = grid_interval_module(grid33, full)
    table = gri(m, [corner, full])
    report = verify_invertibility(table, [corner])
    assert not report.ok
    assert report.witness.member_set == full.member_set


def test_counterexample_witnesses_accumulate():
    # the serrated intervals all demand +1, so the mass below a fixed point grows
    deficits = {}
    for window in (4, 6, 8):
        fx = build_fixture("thm-tame-counterexample", window=window)
        m = fx.modules["m"]
        serrated = sorted(fx.intervals.values(), key=lambda gi: gi.sort_key)
        point = GridInterval.from_points([(-1, -1)])
        coll = serrated + [point]
        table = gri(m, coll)
        d = gpd(table)
        for gi in serrated:
            assert d.value_of(gi) == 1
        deficits[window] = d.value_of(point)
        report = verify_invertibility(table, serrated)
        if len(serrated) == 1:
            assert report.ok  # one +1 exactly matches the point's rank
        else:
            assert not report.ok and report.witness.member_set == point.member_set
    assert deficits[4] > deficits[6] > deficits[8]
    assert deficits[window] == 1 - len(fx.intervals)


# -- decomposition and realisation ------------------------------------------------------


def test_minimal_rank_decomposition_of_decomposable_is_barcode(rng, grid33):
    ints = enumerate_grid_intervals(grid33)
    m, barcode = random_interval_decomposable(rng, grid33, 5)
    d = gpd(gri(m, ints))
    plus, minus = minimal_rank_decomposition(d)
    assert minus == ()
    assert {it.member_set: v for it, v in plus} == barcode


def test_decomposition_reevaluates_to_table(rng, grid33):
    ints = enumerate_grid_intervals(grid33)
    for _ in range(5):
        m, _ = random_interval_decomposable(rng, grid33, 4)
        table = gri(m, ints)
        plus, minus = minimal_rank_decomposition(gpd(table))
        mp = realize(plus, grid33)
        mm = realize(minus, grid33)
        tp = gri(mp, ints)
        tm = gri(mm, ints)
        diff = tuple(a - b for a, b in zip(tp.ranks, tm.ranks))
        assert diff == table.ranks


def test_realize_single_and_pair(grid33):
    j = GridInterval.rectangle((0, 0), (1, 1))
    m = realize(((j, 1),), grid33)
    assert m.dims == grid_interval_module(grid33, j).dims
    with pytest.raises(ValueError):
        realize(((j, -1),), grid33)


def test_square_fixture_minimal_pair():
    fx = build_fixture("ex-2x2-indicator")
    small = [fx.intervals[k] for k in ("J1", "J2", "J3")]
    big = small + [fx.intervals["I"]]
    plus, minus, d = minimal_nonisomorphic_pair(big, fx.intervals["I"], fx.poset)
    # full interval tables identify interval-decomposables up to isomorphism
    ints = enumerate_grid_intervals(fx.poset)
    assert gri(plus, ints).ranks == gri(fx.modules["m"], ints).ranks
    assert gri(minus, ints).ranks == gri(fx.modules["n"], ints).ranks
    tp = gri(plus, big)
    tn = gri(minus, big)
    assert tp.restrict(small).ranks == tn.restrict(small).ranks
    assert tp.rank_of(fx.intervals["I"]) != tn.rank_of(fx.intervals["I"])


def test_minimal_pairs_distinct_for_distinct_members(grid33):
    ints = enumerate_grid_intervals(grid33)
    small = ints[:0]
    seen = set()
    for item in ints[40:44]:
        _, _, d = minimal_nonisomorphic_pair(ints, item, grid33)
        key = tuple(sorted((tuple(sorted(it.member_set)), v) for it, v in d.support))
        assert key not in seen
        seen.add(key)


def test_tightness_pair_on_center_double():
    fx = build_fixture("center-double")
    m = fx.modules["m"]
    win = fx.poset
    ints = enumerate_grid_intervals(win)
    collection = enumerate_grid_intervals(win, 1, 1)  # segments
    n_plus, n_prime = tightness_pair(m, collection, full_collection=ints)
    t1 = gri(n_plus, collection)
    t2 = gri(n_prime, collection)
    assert t1.ranks == t2.ranks
    # both tables are the superset-sum of the positive part of the diagram
    from grinv.invariants import SignedDiagram, reconstruct_table

    diagram = gpd(gri(m, collection))
    positive = SignedDiagram(diagram.positive_part())
    assert reconstruct_table(positive, collection).ranks == t1.ranks
    # over the full interval collection their diagrams differ
    d1 = gpd(gri(n_plus, ints))
    d2 = gpd(gri(n_prime, ints))
    assert d1 != d2


def test_tightness_pair_rejects_decomposable(rng, grid33):
    ints = enumerate_grid_intervals(grid33)
    m, _ = random_interval_decomposable(rng, grid33, 3)
    with pytest.raises(IntervalDecomposableError):
        tightness_pair(m, ints[:20], full_collection=ints)


def test_center_double_diagram_has_negative_entry():
    fx = build_fixture("center-double")
    d = gpd(gri(fx.modules["m"], enumerate_grid_intervals(fx.poset)))
    assert any(v < 0 for _, v in d.support)


# -- kernel check -------------------------------------------------------------------


def test_difference_kernel_check_trivial(rng, grid33):
    ints = enumerate_grid_intervals(grid33)
    m, _ = random_interval_decomposable(rng, grid33, 3)
    assert gri_difference_kernel_check(m, m, ints[:30], ints)


def test_difference_kernel_check_square_pair():
    fx = build_fixture("ex-2x2-indicator")
    small = [fx.intervals[k] for k in ("J1", "J2", "J3")]
    big = small + [fx.intervals["I"]]
    assert gri_difference_kernel_check(fx.modules["m"], fx.modules["n"], small, big)
    assert not gri_difference_kernel_check(fx.modules["m"], fx.modules["n"], big, big)


def test_difference_kernel_check_random_equal_pairs(rng, grid33):
    # build pairs with equal small-collection tables by adding the canonical pair
    ints = enumerate_grid_intervals(grid33)
    small = [it for it in ints if len(it) <= 2]
    hook = GridInterval.from_points([(0, 0), (0, 1), (1, 0)])
    plus, minus, _ = minimal_nonisomorphic_pair(ints, hook, grid33)
    base, _ = random_interval_decomposable(rng, grid33, 2)
    m1 = direct_sum(base, plus)
    m2 = direct_sum(base, minus)
    assert gri_difference_kernel_check(m1, m2, small, ints)


# -- emission ------------------------------------------------------------------------


def test_tsv_and_dot_emission(grid33, rng):
    m, _ = random_interval_decomposable(rng, grid33, 3)
    coll = enumerate_grid_intervals(grid33, 1, 1)
    table = gri(m, coll)
    tsv = table.to_tsv()
    assert len(tsv.splitlines()) == len(coll)
    assert "\t" in tsv.splitlines()[0]
    d = gpd(table)
    dot = containment_dot(containment_poset(coll), d)
    assert dot.startswith("digraph") and "->" in dot


def test_format_members_grid_and_ids(chain4, grid22):
    from grinv.posets import subposet

    gi = GridInterval.from_points([(1, 0), (0, 0)])
    assert format_members(gi) == "0,0 1,0"
    assert format_members(subposet(chain4, (2, 0, 1))) == "0 1 2"
