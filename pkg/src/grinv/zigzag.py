"""Paths in the integer plane, zigzag restrictions, and barcodes.

A path is a sequence of pairwise-comparable consecutive points; faithful
paths take unit steps, simple paths never revisit a point.  Restricting
a grid module to a path gives a zigzag module (over the index poset of
the path, not the induced subposet), which is always
interval-decomposable; its barcode is computed here by inclusion-
exclusion over subpath ranks.

Fences (min_zz / max_zz), tameness, solidity and thinness connect path
ranks to interval ranks: over a tame path the zigzag rank equals the
generalized rank of the interval hull, which is both the fast
computation route and the bridge for estimating either invariant from
the other.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .modules import PModule, generalized_rank
from .posets import FinitePoset, GridInterval, lower_fence, upper_fence

_STEPS = ((1, 0), (-1, 0), (0, 1), (0, -1))


def _comparable(p, q) -> bool:
    return (p[0] <= q[0] and p[1] <= q[1]) or (q[0] <= p[0] and q[1] <= p[1])


def _is_unit_step(p, q) -> bool:
    return abs(p[0] - q[0]) + abs(p[1] - q[1]) == 1 and _comparable(p, q)


@dataclass(frozen=True)
class ZigzagPath:
    """A path in the plane: consecutive points distinct and comparable."""

    points: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not self.points:
            raise ValueError("empty path")
        pts = tuple((int(x), int(y)) for x, y in self.points)
        object.__setattr__(self, "points", pts)
        for p, q in zip(pts, pts[1:]):
            if p == q:
                raise ValueError("consecutive path points must be distinct")
            if not _comparable(p, q):
                raise ValueError(f"consecutive path points {p}, {q} are incomparable")

    def __len__(self):
        return len(self.points)

    @cached_property
    def faithful(self) -> bool:
        return all(_is_unit_step(p, q) for p, q in zip(self.points, self.points[1:]))

    @cached_property
    def simple(self) -> bool:
        return self.faithful and len(set(self.points)) == len(self.points)

    @cached_property
    def monotone(self) -> bool:
        return self.faithful and all(
            q[0] - p[0] >= 0 and q[1] - p[1] >= 0 for p, q in zip(self.points, self.points[1:])
        )

    @cached_property
    def negative(self) -> bool:
        """Mirror image of a monotone path: steps go left or up (either orientation)."""
        if not self.faithful or len(self.points) == 1:
            return self.faithful
        deltas = {(q[0] - p[0], q[1] - p[1]) for p, q in zip(self.points, self.points[1:])}
        return deltas <= {(-1, 0), (0, 1)} or deltas <= {(1, 0), (0, -1)}

    def reverse(self) -> "ZigzagPath":
        return ZigzagPath(tuple(reversed(self.points)))

    def canonical(self) -> "ZigzagPath":
        """A path and its reverse are identified; keep the lex-smaller endpoint first."""
        rev = tuple(reversed(self.points))
        return self if self.points <= rev else ZigzagPath(rev)

    def subpath(self, i: int, j: int) -> "ZigzagPath":
        if not (0 <= i <= j < len(self.points)):
            raise ValueError("bad subpath indices")
        return ZigzagPath(self.points[i : j + 1])

    def hull(self) -> GridInterval:
        return interval_hull(self)

    # -- serialisation -------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"path {len(self.points)}"]
        lines += [f"{x} {y}" for x, y in self.points]
        return "\n".join(lines)

    @classmethod
    def from_text(cls, text: str) -> "ZigzagPath":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        head = lines[0].split()
        if head[0] != "path":
            raise ValueError("expected 'path <n>'")
        n = int(head[1])
        pts = []
        for ln in lines[1 : 1 + n]:
            x, y = ln.split()
            pts.append((int(x), int(y)))
        return cls(tuple(pts))


def interval_hull(path: ZigzagPath) -> GridInterval:
    """Smallest interval containing the path: points sandwiched between path points."""
    pts = path.points
    xs = [x for x, _ in pts]
    ys = [y for _, y in pts]
    hull = []
    for x in range(min(xs), max(xs) + 1):
        for y in range(min(ys), max(ys) + 1):
            below = any(px <= x and py <= y for px, py in pts)
            above = any(x <= px and y <= py for px, py in pts)
            if below and above:
                hull.append((x, y))
    return GridInterval.from_points(hull)


def min_zz(gi: GridInterval) -> ZigzagPath:
    """Lower fence as a path (single-point path for a unique minimal point)."""
    return ZigzagPath(lower_fence(gi))


def max_zz(gi: GridInterval) -> ZigzagPath:
    """Upper fence as a path."""
    return ZigzagPath(upper_fence(gi))


def _connector(gi: GridInterval) -> tuple[tuple[int, int], ...]:
    """Canonical monotone unit path inside gi from the first minimal point
    to the first maximal point (up the column, then along the top row)."""
    p0 = gi.minimal_points()[0]
    q0 = gi.maximal_points()[0]
    pts = [p0]
    x, y = p0
    while y < q0[1]:
        y += 1
        pts.append((x, y))
    while x < q0[0]:
        x += 1
        pts.append((x, y))
    if pts[-1] != q0:
        raise AssertionError("connector failed to reach the first maximal point")
    return tuple(pts)


def boundary_cap(gi: GridInterval) -> ZigzagPath:
    """Reversed lower fence, a monotone connector, then the upper fence.

    Always a faithful tame path with interval hull gi; not simple in
    general.
    """
    low = list(reversed(lower_fence(gi)))
    conn = list(_connector(gi))
    up = list(upper_fence(gi))
    pts = low + conn[1:]
    if pts[-1] == up[0]:
        pts += up[1:]
    else:
        pts += up
    return ZigzagPath(tuple(pts))


def _is_contiguous(small: tuple, big: tuple) -> bool:
    n, m = len(small), len(big)
    if n > m:
        return False
    return any(big[i : i + n] == small for i in range(m - n + 1))


def is_tame(path: ZigzagPath) -> bool:
    """Both fences of the hull appear (forwards or backwards) as contiguous subpaths."""
    hull = interval_hull(path)
    for fence in (lower_fence(hull), upper_fence(hull)):
        rev = tuple(reversed(fence))
        if not (_is_contiguous(fence, path.points) or _is_contiguous(rev, path.points)):
            return False
    return True


def is_thin(gi: GridInterval) -> bool:
    """Thin: the interval is the hull of a negative path (no 2x2 square)."""
    return all(b2 == a for (a, _), (_, b2) in zip(gi.rows, gi.rows[1:]))


def negative_cover_path(gi: GridInterval) -> ZigzagPath:
    """The negative path tracing a thin interval (right-to-left, bottom-to-top)."""
    if not is_thin(gi):
        raise ValueError("interval is not thin")
    pts = []
    for i, (a, b) in enumerate(gi.rows):
        start = b if i == 0 else a  # a == previous row's b when thin
        if i > 0:
            pts.append((gi.rows[i - 1][0], gi.y0 + i))
            start = gi.rows[i - 1][0] - 1
        for x in range(start, a - 1, -1):
            pts.append((x, gi.y0 + i))
    path = ZigzagPath(tuple(pts))
    if not path.negative or interval_hull(path).member_set != gi.member_set:
        raise AssertionError("negative cover construction failed")
    return path


def simple_tame_path(gi: GridInterval) -> ZigzagPath | None:
    """A simple tame faithful path whose hull is the interval, if one exists.

    The search connects an end of one fence to an end of the other by a
    shortest faithful connector inside the interval that avoids every
    other fence point; any simple tame spanning path must contain both
    fences contiguously, so this family is exhaustive up to the
    irrelevant freedom of extra prefixes.  The result is validated.
    """
    low = lower_fence(gi)
    up = upper_fence(gi)
    if set(low) & set(up):
        if len(gi) == 1:
            return ZigzagPath(low)
        return None
    inside = gi.member_set
    blocked = (set(low) | set(up))
    for lo_rev in (False, True):
        lseq = tuple(reversed(low)) if lo_rev else low
        for up_rev in (False, True):
            useq = tuple(reversed(up)) if up_rev else up
            e1, e2 = lseq[-1], useq[0]
            conn = _bfs_connector(e1, e2, inside, blocked - {e1, e2})
            if conn is None:
                continue
            pts = lseq + conn[1:-1] + useq
            path = ZigzagPath(pts)
            if path.simple and is_tame(path) and interval_hull(path).member_set == inside:
                return path
    return None


def _bfs_connector(src, dst, inside, blocked):
    if src == dst:
        return (src,)
    frontier = [src]
    prev = {src: None}
    while frontier:
        nxt = []
        for p in frontier:
            for dx, dy in _STEPS:
                q = (p[0] + dx, p[1] + dy)
                if q == dst:
                    out = [dst, p]
                    while prev[out[-1]] is not None:
                        out.append(prev[out[-1]])
                    return tuple(reversed(out))
                if q in prev or q not in inside or q in blocked:
                    continue
                prev[q] = p
                nxt.append(q)
        frontier = nxt
    return None


def is_solid(gi: GridInterval) -> bool:
    """Disjoint fences and a simple tame spanning path.

    Disjointness alone is not enough: a staircase can have disjoint
    fences that exhaust the interval, leaving no room for a simple
    connector, and no simple tame path then spans it.
    """
    if set(lower_fence(gi)) & set(upper_fence(gi)):
        return False
    return simple_tame_path(gi) is not None


# -- zigzag modules and barcodes -------------------------------------------------


def path_module(module: PModule, path: ZigzagPath) -> PModule:
    """The zigzag module: the pullback of the module along the path's index poset.

    Points outside an extension-by-zero window carry the zero space.
    """
    idx = module._window_idx
    if idx is None:
        raise ValueError("path restriction needs a grid module")
    n = len(path.points)
    covers = []
    for i, (p, q) in enumerate(zip(path.points, path.points[1:])):
        if p[0] <= q[0] and p[1] <= q[1]:
            covers.append((i, i + 1))
        else:
            covers.append((i + 1, i))
    index_poset = FinitePoset.from_covers(n, covers)
    dims = []
    for pt in path.points:
        i = idx.get(pt)
        if i is None and not module.ambient:
            raise ValueError(f"path point {pt} outside the window")
        dims.append(0 if i is None else module.dims[i])
    maps = {}
    for a, b in covers:
        if dims[a] == 0 or dims[b] == 0:
            continue
        maps[(a, b)] = module.transition(idx[path.points[a]], idx[path.points[b]])
    return PModule(index_poset, dims, maps, module.p, validate=False)


def zigzag_rank(module: PModule, path: ZigzagPath) -> int:
    """Rank of the limit-to-colimit map of the zigzag module over the path."""
    zz = path_module(module, path)
    if any(d == 0 for d in zz.dims):
        return 0
    return generalized_rank(zz, range(zz.poset.n))


@dataclass(frozen=True)
class Barcode:
    """Multiset of subpath supports: bars[(i, j)] = multiplicity of the bar
    spanning path indices i..j (inclusive)."""

    path: ZigzagPath
    bars: tuple[tuple[tuple[int, int], int], ...]

    def multiplicity(self, i: int, j: int) -> int:
        return dict(self.bars).get((i, j), 0)

    def full_bar(self) -> int:
        return self.multiplicity(0, len(self.path.points) - 1)

    def total_at(self, i: int) -> int:
        return sum(m for (a, b), m in self.bars if a <= i <= b)

    def reflected(self) -> "Barcode":
        n = len(self.path.points)
        bars = sorted(((n - 1 - b, n - 1 - a), m) for (a, b), m in self.bars)
        return Barcode(self.path.reverse(), tuple(bars))

    def to_tsv(self) -> str:
        return "\n".join(f"{a}\t{b}\t{m}" for (a, b), m in self.bars)


class _SubpathRanks:
    """Memoised ranks of all contiguous subpaths of one path."""

    def __init__(self, module: PModule, path: ZigzagPath):
        self.module = module
        self.path = path
        self._memo: dict[tuple[int, int], int] = {}

    def rank(self, i: int, j: int) -> int:
        key = (i, j)
        if key not in self._memo:
            self._memo[key] = zigzag_rank(self.module, self.path.subpath(i, j))
        return self._memo[key]


def zigzag_barcode(module: PModule, path: ZigzagPath) -> Barcode:
    """Barcode of the zigzag module by inclusion-exclusion over subpath ranks.

    The multiplicity of the bar on indices [i, j] is
    rank(i,j) - rank(i-1,j) - rank(i,j+1) + rank(i-1,j+1), with terms
    falling off the ends of the path dropped.  Zigzag modules decompose
    into interval summands, so every multiplicity must be >= 0 (checked).

    Any path of comparable steps qualifies, faithful or not: the corner
    zigzag p -> (p join q) <- q is the standard non-faithful use.
    """
    n = len(path.points)
    ranks = _SubpathRanks(module, path)
    bars = []
    for i in range(n):
        for j in range(i, n):
            m = ranks.rank(i, j)
            if i > 0:
                m -= ranks.rank(i - 1, j)
            if j < n - 1:
                m -= ranks.rank(i, j + 1)
            if i > 0 and j < n - 1:
                m += ranks.rank(i - 1, j + 1)
            if m < 0:
                raise AssertionError(f"negative bar multiplicity at ({i}, {j})")
            if m:
                bars.append(((i, j), m))
    return Barcode(path, tuple(sorted(bars)))


def full_bar_multiplicity(module: PModule, path: ZigzagPath) -> int:
    """Multiplicity of the full bar: the zigzag rank of the whole path."""
    return zigzag_rank(module, path)


def zib(module: PModule, paths) -> dict[ZigzagPath, Barcode]:
    """Barcode for each path, keyed by the canonical orientation."""
    out = {}
    for path in paths:
        canon = path.canonical()
        if canon not in out:
            out[canon] = zigzag_barcode(module, canon)
    return out


# -- estimating one invariant from the other ----------------------------------------


def _tame_subpaths(path: ZigzagPath):
    n = len(path.points)
    for i in range(n):
        for j in range(i, n):
            sub = path.subpath(i, j)
            if is_tame(sub):
                yield (i, j), sub


def rank_bounds_from_gri(path: ZigzagPath, interval_rank) -> tuple[int, int]:
    """Bracket the zigzag rank of a path by interval ranks.

    ``interval_rank`` maps a GridInterval to its generalized rank (table
    lookup or module query).  Lower bound: rank of the path's hull.
    Upper bound: least hull-rank over tame subpaths (single points are
    tame, so the minimum exists).  For a tame path the two coincide.
    """
    m = interval_rank(interval_hull(path))
    ell = min(interval_rank(interval_hull(sub)) for _, sub in _tame_subpaths(path))
    return m, ell


def multiplicity_bounds(path: ZigzagPath, span: tuple[int, int], interval_rank) -> tuple[int, int]:
    """Bracket a bar multiplicity using only interval ranks.

    Applies the inclusion-exclusion formula with each exact subpath rank
    replaced by its bracket from :func:`rank_bounds_from_gri`; extension
    terms that fall off the path are dropped.
    """
    i, j = span
    n = len(path.points)
    if not (0 <= i <= j < n):
        raise ValueError("span is not a subpath")

    def bounds(a, b):
        return rank_bounds_from_gri(path.subpath(a, b), interval_rank)

    m0, l0 = bounds(i, j)
    lo, hi = m0, l0
    if j < n - 1:
        mp, lp = bounds(i, j + 1)
        lo -= lp
        hi -= mp
    if i > 0:
        mm, lm = bounds(i - 1, j)
        lo -= lm
        hi -= mm
    if i > 0 and j < n - 1:
        mpm, lpm = bounds(i - 1, j + 1)
        lo += mpm
        hi += lpm
    return lo, hi


def enumerate_simple_paths(points, max_len: int | None = None):
    """All simple faithful paths through the given plane points, one orientation each."""
    pts = sorted(set(points))
    inside = set(pts)
    limit = max_len if max_len is not None else len(pts)
    out = []

    def extend(seq):
        if len(seq) <= limit:
            path = ZigzagPath(tuple(seq))
            if path.points <= tuple(reversed(path.points)):
                out.append(path)
            if len(seq) < limit:
                x, y = seq[-1]
                for dx, dy in _STEPS:
                    q = (x + dx, y + dy)
                    if q in inside and q not in seq_set:
                        seq.append(q)
                        seq_set.add(q)
                        extend(seq)
                        seq_set.remove(q)
                        seq.pop()

    for start in pts:
        seq = [start]
        seq_set = {start}
        extend(seq)
    return out


def maximal_simple_paths(points):
    """Simple faithful paths in the point set that cannot be extended at either end."""
    inside = set(points)

    def extendable(seq):
        ends = [seq[0], seq[-1]]
        for e in ends:
            for dx, dy in _STEPS:
                q = (e[0] + dx, e[1] + dy)
                if q in inside and q not in seq:
                    return True
        return False

    out = []
    for path in enumerate_simple_paths(points):
        if not extendable(list(path.points)):
            out.append(path)
    return out


def _monotone_path_inside(gi: GridInterval, src, dst) -> ZigzagPath | None:
    """A monotone unit-step path src -> dst inside the interval, if src <= dst."""
    if not (src[0] <= dst[0] and src[1] <= dst[1]):
        return None
    conn = _bfs_connector(src, dst, gi.member_set, set())
    return ZigzagPath(conn) if conn is not None else None


def _exactly_spanned(module: PModule, gi: GridInterval) -> int | None:
    """Full-bar multiplicity over a spanning negative or simple tame path."""
    if is_thin(gi):
        return full_bar_multiplicity(module, negative_cover_path(gi))
    path = simple_tame_path(gi)
    if path is not None:
        return full_bar_multiplicity(module, path)
    return None


def gri_bounds_from_zib(module: PModule, gi: GridInterval,
                        search_window: tuple[int, int, int, int] | None = None,
                        exhaustive_cap: int = 12) -> tuple[int, int]:
    """Bracket an interval's generalized rank using only path barcodes.

    Thin intervals are traced by a negative path and solid intervals by
    a simple tame path, so both are exact (lower == upper).  Otherwise:
    the upper bound is the least full-bar multiplicity over simple paths
    inside the interval, the lower bound the largest one over exactly
    spanned supersets inside the search window (default: the module's
    window).  Every simple path inside and every spanned superset gives
    a sound bound, so above ``exhaustive_cap`` points the exponential
    families are replaced by small sound ones: min-to-max monotone paths
    inside, and window-clipped thickenings outside.
    """
    exact = _exactly_spanned(module, gi)
    if exact is not None:
        return exact, exact
    if len(gi) <= exhaustive_cap:
        inside = maximal_simple_paths(gi.points())
    else:
        inside = []
        for p in gi.minimal_points():
            for q in gi.maximal_points():
                path = _monotone_path_inside(gi, p, q)
                if path is not None:
                    inside.append(path)
    upper = min(full_bar_multiplicity(module, path) for path in inside)

    if search_window is None:
        (ox, oy), (w, h) = module.window_origin_size()
        search_window = (ox, oy, ox + w - 1, oy + h - 1)
    from .posets import count_grid_intervals, iter_grid_intervals

    x0, y0, x1, y1 = search_window
    lower = 0
    if count_grid_intervals(x1 - x0 + 1, y1 - y0 + 1) <= 20_000:
        candidates = iter_grid_intervals(search_window)
    else:
        clipped = []
        diam = max(x1 - x0, y1 - y0)
        for eps in range(1, diam + 1):
            fat = gi.thicken(eps)
            rows = []
            for i, (a, b) in enumerate(fat.rows):
                y = fat.y0 + i
                if y0 <= y <= y1 and max(a, x0) <= min(b, x1):
                    rows.append((y, (max(a, x0), min(b, x1))))
            if rows:
                clipped.append(GridInterval(rows[0][0], tuple(r for _, r in rows)))
        candidates = clipped
    for cand in candidates:
        if not cand.issuperset(gi):
            continue
        v = _exactly_spanned(module, cand)
        if v is not None:
            lower = max(lower, v)
    return lower, upper
