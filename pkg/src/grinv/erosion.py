"""Erosion distance between rank invariants of grid modules.

The collection is a thickening-closed family of plane intervals; the
working finite slice is the set of members inside the union bounding
box of the two windows, since every rank over an interval leaving both
windows vanishes under extension-by-zero and the erosion inequalities
hold there automatically.  Feasibility is monotone in the thickening
radius, so the distance is found by binary search.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

from .invariants import RankCache
from .modules import PModule
from .posets import GridInterval, iter_grid_intervals


@dataclass(frozen=True)
class ThickeningFamily:
    """Finite plane intervals with bounded minimal/maximal point counts.

    Closed under thickenings: dilation only merges extreme points, so
    the budgets cannot grow.  (1, 1) is the family of rectangles.
    """

    max_min_pts: int | None = None
    max_max_pts: int | None = None

    def members_within(self, bbox) -> list[GridInterval]:
        out = list(iter_grid_intervals(bbox, self.max_min_pts, self.max_max_pts))
        out.sort(key=lambda gi: gi.sort_key)
        return out


def union_bbox(m1: PModule, m2: PModule) -> tuple[int, int, int, int]:
    (ox1, oy1), (w1, h1) = m1.window_origin_size()
    (ox2, oy2), (w2, h2) = m2.window_origin_size()
    return (
        min(ox1, ox2),
        min(oy1, oy2),
        max(ox1 + w1 - 1, ox2 + w2 - 1),
        max(oy1 + h1 - 1, oy2 + h2 - 1),
    )


def verify_erosion(m1: PModule, m2: PModule, collection, eps: int,
                   cache1: RankCache | None = None, cache2: RankCache | None = None):
    """Check both erosion inequalities at radius eps over the collection.

    Returns None when every member passes, else the first witness
    interval in canonical order (one whose thickened rank on one side
    exceeds the other side's rank).
    """
    cache1 = cache1 or RankCache(m1)
    cache2 = cache2 or RankCache(m2)
    for gi in collection:
        thick = gi.thicken(eps)
        r1, r2 = cache1.rank(gi), cache2.rank(gi)
        if cache1.rank(thick) > r2 or cache2.rank(thick) > r1:
            return gi
    return None


def erosion_distance(m1: PModule, m2: PModule, collection=None,
                     family: ThickeningFamily | None = None,
                     caches=None) -> int | float:
    """Least radius admitting an erosion between the two rank invariants.

    With extension-by-zero windows the search is bounded: one past the
    bounding-box diameter every thickened interval exits both windows
    and the check passes, so the distance is finite; the infinity return
    is kept for interface completeness.
    """
    if m1.p != m2.p:
        raise ValueError("field mismatch")
    bbox = union_bbox(m1, m2)
    if collection is None:
        family = family or ThickeningFamily(2, 2)
        collection = family.members_within(bbox)
    if caches is None:
        caches = (RankCache(m1), RankCache(m2))
    c1, c2 = caches
    hi = max(bbox[2] - bbox[0], bbox[3] - bbox[1]) + 1
    if verify_erosion(m1, m2, collection, hi, c1, c2) is not None:
        return math.inf
    lo = 0
    if verify_erosion(m1, m2, collection, lo, c1, c2) is None:
        return 0
    # invariant: lo infeasible, hi feasible
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if verify_erosion(m1, m2, collection, mid, c1, c2) is None:
            hi = mid
        else:
            lo = mid
    return hi


def shift_module(module: PModule, delta: int) -> PModule:
    """The diagonal shift: the same spaces and maps read delta steps up-right.

    The value at a point is the original value at the point plus
    (delta, delta), so the support window translates down-left; the
    original transition maps interleave the module with its shift, which
    is what makes the shifted pair a stability fixture.
    """
    if delta < 0:
        raise ValueError("delta must be >= 0")
    if module.poset.grid_coords is None:
        raise ValueError("shift needs a grid module")
    from .posets import FinitePoset

    coords = tuple((x - delta, y - delta) for x, y in module.poset.grid_coords)
    shifted = FinitePoset(module.poset.leq, grid_coords=coords, validate=False)
    return PModule(shifted, module.dims, module.maps, module.p, ambient=module.ambient,
                   validate=False)


@dataclass(frozen=True)
class ErosionStudyRow:
    side: int
    max_min_pts: int
    max_max_pts: int
    collection_size: int
    distance: int | float
    rank_queries: int
    wall_seconds: float


def erosion_study(module_builder, sides, budgets, collection_padding: int = 0) -> list[ErosionStudyRow]:
    """Timing/work table for the efficiency-versus-power trade-off.

    ``module_builder(side)`` must return a pair of modules on an
    side x side window.  For each window side and each (min, max) budget
    the erosion distance is computed and the wall time plus the number
    of distinct rank queries recorded.
    """
    rows = []
    for side in sides:
        m1, m2 = module_builder(side)
        for mm, xx in budgets:
            family = ThickeningFamily(mm, xx)
            bbox = union_bbox(m1, m2)
            bbox = (bbox[0] - collection_padding, bbox[1] - collection_padding,
                    bbox[2] + collection_padding, bbox[3] + collection_padding)
            collection = family.members_within(bbox)
            caches = (RankCache(m1), RankCache(m2))
            t0 = time.perf_counter()
            dist = erosion_distance(m1, m2, collection, caches=caches)
            dt = time.perf_counter() - t0
            rows.append(
                ErosionStudyRow(side, mm, xx, len(collection), dist,
                                caches[0].queries + caches[1].queries, dt)
            )
    return rows


def study_table(rows: list[ErosionStudyRow]) -> str:
    head = "side\tmin_pts\tmax_pts\tcollection\tdistance\trank_queries\tseconds"
    out = [head]
    for r in rows:
        out.append(
            f"{r.side}\t{r.max_min_pts}\t{r.max_max_pts}\t{r.collection_size}"
            f"\t{r.distance}\t{r.rank_queries}\t{r.wall_seconds:.4f}"
        )
    return "\n".join(out)
