"""Finite posets, grid windows, and their intervals / connected subsets.

Two representations coexist:

* ``FinitePoset`` — an abstract finite poset on ids 0..n-1 (boolean leq
  matrix + Hasse cover list), optionally carrying grid coordinates when
  the poset is a product-order window of the integer plane.
* ``GridInterval`` — an interval of the ambient integer plane, stored as
  a staircase of per-row x-ranges.  This is the working representation
  for thickenings and fence constructions, which must not be clipped to
  any particular window.

Canonical enumeration order everywhere: subsets sorted by
(size, lexicographic sorted member list), which keeps every downstream
table deterministic and diffable.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import numpy as np

DEFAULT_INTERVAL_CAP = 5_000_000
DEFAULT_CONNECTED_CAP = 16


class EnumerationCapError(Exception):
    """Raised when an enumeration would exceed its configured guard."""


class FinitePoset:
    """A finite poset on elements 0..n-1.

    ``leq`` is a read-only boolean matrix (reflexive, antisymmetric,
    transitive — validated on construction); ``covers`` is its transitive
    reduction.  Instances are immutable and safe to share.
    """

    __slots__ = ("n", "leq", "grid_coords", "_covers", "_topo")

    def __init__(self, leq: np.ndarray, grid_coords: tuple | None = None, validate: bool = True):
        leq = np.asarray(leq, dtype=bool)
        n = leq.shape[0]
        if leq.shape != (n, n):
            raise ValueError("leq must be square")
        if validate:
            if not leq.diagonal().all():
                raise ValueError("leq is not reflexive")
            if (leq & leq.T & ~np.eye(n, dtype=bool)).any():
                raise ValueError("leq is not antisymmetric")
            closure = leq @ leq
            if not np.array_equal(closure | leq, leq):
                raise ValueError("leq is not transitive")
        leq = leq.copy()
        leq.setflags(write=False)
        self.n = n
        self.leq = leq
        self.grid_coords = tuple(grid_coords) if grid_coords is not None else None
        self._covers = None
        self._topo = None

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_covers(cls, n: int, cover_pairs, grid_coords=None) -> "FinitePoset":
        adj = np.eye(n, dtype=bool)
        for a, b in cover_pairs:
            adj[a, b] = True
        # Kleene closure by repeated squaring.
        closure = adj
        while True:
            nxt = closure | (closure @ closure)
            if np.array_equal(nxt, closure):
                break
            closure = nxt
        return cls(closure, grid_coords=grid_coords)

    @classmethod
    def chain(cls, n: int) -> "FinitePoset":
        return cls(np.triu(np.ones((n, n), dtype=bool)), validate=False)

    # -- structure -------------------------------------------------------

    @property
    def covers(self) -> tuple[tuple[int, int], ...]:
        """Hasse edges (a, b) with a covered by b, sorted."""
        if self._covers is None:
            lt = self.leq & ~np.eye(self.n, dtype=bool)
            redundant = lt @ lt
            self._covers = tuple(zip(*np.nonzero(lt & ~redundant)))
            self._covers = tuple(sorted((int(a), int(b)) for a, b in self._covers))
        return self._covers

    def topological_order(self) -> tuple[int, ...]:
        """A linear extension of the order (ids sorted by down-set size, then id)."""
        if self._topo is None:
            depth = self.leq.sum(axis=0)
            self._topo = tuple(int(i) for i in np.lexsort((np.arange(self.n), depth)))
        return self._topo

    def up_ids(self, a: int) -> np.ndarray:
        return np.nonzero(self.leq[a])[0]

    def down_ids(self, a: int) -> np.ndarray:
        return np.nonzero(self.leq[:, a])[0]

    def segment(self, a: int, b: int) -> np.ndarray:
        """Ids x with a <= x <= b."""
        return np.nonzero(self.leq[a] & self.leq[:, b])[0]

    def comparable(self, a: int, b: int) -> bool:
        return bool(self.leq[a, b] or self.leq[b, a])

    def minimal_of(self, members) -> tuple[int, ...]:
        ms = sorted(members)
        return tuple(a for a in ms if not any(self.leq[b, a] and b != a for b in ms))

    def maximal_of(self, members) -> tuple[int, ...]:
        ms = sorted(members)
        return tuple(a for a in ms if not any(self.leq[a, b] and b != a for b in ms))

    # -- subset predicates -------------------------------------------------

    def is_connected_subset(self, members) -> bool:
        ms = sorted(set(members))
        if not ms:
            return False
        seen = {ms[0]}
        stack = [ms[0]]
        while stack:
            a = stack.pop()
            for b in ms:
                if b not in seen and (self.leq[a, b] or self.leq[b, a]):
                    seen.add(b)
                    stack.append(b)
        return len(seen) == len(ms)

    def is_convex_subset(self, members) -> bool:
        ms = sorted(set(members))
        inside = np.zeros(self.n, dtype=bool)
        inside[ms] = True
        for a in ms:
            for b in ms:
                if a != b and self.leq[a, b]:
                    if not inside[self.segment(a, b)].all():
                        return False
        return True

    def is_interval_subset(self, members) -> bool:
        ms = set(members)
        if not ms:
            return False
        return self.is_convex_subset(ms) and self.is_connected_subset(ms)

    def coord_of(self, a: int) -> tuple[int, int]:
        if self.grid_coords is None:
            raise ValueError("poset has no grid coordinates")
        return self.grid_coords[a]

    def id_of_coord(self) -> dict[tuple[int, int], int]:
        if self.grid_coords is None:
            raise ValueError("poset has no grid coordinates")
        return {xy: i for i, xy in enumerate(self.grid_coords)}

    # -- serialisation -----------------------------------------------------

    def to_text(self) -> str:
        if self.grid_coords is not None:
            xs = sorted({x for x, _ in self.grid_coords})
            ys = sorted({y for _, y in self.grid_coords})
            if len(self.grid_coords) == len(xs) * len(ys) and xs == list(
                range(xs[0], xs[0] + len(xs))
            ) and ys == list(range(ys[0], ys[0] + len(ys))):
                return f"grid {len(xs)} {len(ys)} {xs[0]} {ys[0]}"
        lines = [f"poset {self.n}"]
        lines += [f"cover {a} {b}" for a, b in self.covers]
        return "\n".join(lines)

    @classmethod
    def from_text(cls, text: str) -> "FinitePoset":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        return cls._from_lines(lines, 0)[0]

    @classmethod
    def _from_lines(cls, lines: list[str], start: int) -> tuple["FinitePoset", int]:
        head = lines[start].split()
        if head[0] == "grid":
            w, h, ox, oy = (int(t) for t in head[1:5])
            return grid_poset(w, h, (ox, oy)), start + 1
        if head[0] != "poset":
            raise ValueError(f"expected 'poset <n>' or 'grid w h ox oy', got {lines[start]!r}")
        n = int(head[1])
        i = start + 1
        pairs = []
        while i < len(lines) and lines[i].startswith("cover "):
            _, a, b = lines[i].split()
            pairs.append((int(a), int(b)))
            i += 1
        return cls.from_covers(n, pairs), i


def grid_poset(width: int, height: int, origin: tuple[int, int] = (0, 0)) -> FinitePoset:
    """Product-order poset on a width x height window of the plane.

    Element ids run in lexicographic (x, y) order, which is a linear
    extension of the product order; covers are the unit steps.
    """
    if width < 1 or height < 1:
        raise ValueError("grid dimensions must be >= 1")
    ox, oy = origin
    coords = tuple((ox + i, oy + j) for i in range(width) for j in range(height))
    xs = np.array([c[0] for c in coords])
    ys = np.array([c[1] for c in coords])
    leq = (xs[:, None] <= xs[None, :]) & (ys[:, None] <= ys[None, :])
    return FinitePoset(leq, grid_coords=coords, validate=False)


# -- subposet identifiers ---------------------------------------------------


@dataclass(frozen=True)
class SubposetId:
    """A named subset of a FinitePoset: kind + sorted member ids."""

    kind: str  # "interval" | "connected" | "segment" | "path"
    members: tuple[int, ...]

    def __post_init__(self):
        if not self.members:
            raise ValueError("empty subposet")
        object.__setattr__(self, "members", tuple(sorted(self.members)))

    @property
    def member_set(self) -> frozenset:
        return frozenset(self.members)

    @property
    def sort_key(self):
        return (len(self.members), self.members)

    def __len__(self):
        return len(self.members)


def subposet(poset: FinitePoset, members, kind: str | None = None) -> SubposetId:
    """Build a SubposetId, inferring and validating the kind."""
    ms = tuple(sorted(set(members)))
    if not ms:
        raise ValueError("empty subposet")
    connected = poset.is_connected_subset(ms)
    if kind is None:
        if connected and poset.is_convex_subset(ms):
            mins = poset.minimal_of(ms)
            maxs = poset.maximal_of(ms)
            kind = "segment" if len(mins) == 1 and len(maxs) == 1 else "interval"
        elif connected:
            kind = "connected"
        else:
            raise ValueError("subset is not connected; pass kind explicitly to allow")
    else:
        if kind in ("interval", "segment") and not poset.is_interval_subset(ms):
            raise ValueError(f"subset is not an interval: {ms}")
        if kind == "connected" and not connected:
            raise ValueError("subset is not connected")
    return SubposetId(kind, ms)


def is_interval(poset: FinitePoset, members) -> bool:
    return poset.is_interval_subset(members)


def is_connected(poset: FinitePoset, members) -> bool:
    return poset.is_connected_subset(members)


def minimal_points(poset: FinitePoset, sub: SubposetId) -> tuple[int, ...]:
    return poset.minimal_of(sub.members)


def maximal_points(poset: FinitePoset, sub: SubposetId) -> tuple[int, ...]:
    return poset.maximal_of(sub.members)


# -- ambient grid intervals --------------------------------------------------


@dataclass(frozen=True)
class GridInterval:
    """A finite interval of the integer plane as a staircase of rows.

    ``rows[i]`` is the inclusive x-range (a, b) of row y0 + i.  Validity
    (checked on construction): every row nonempty, and for consecutive
    rows (a, b) below (a', b'): a' <= a, b' <= b and a <= b'.  These are
    exactly convexity + connectivity for subsets of the plane with
    contiguous rows.
    """

    y0: int
    rows: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not self.rows:
            raise ValueError("empty interval")
        for a, b in self.rows:
            if a > b:
                raise ValueError("empty row in interval")
        for (a, b), (a2, b2) in zip(self.rows, self.rows[1:]):
            if not (a2 <= a and b2 <= b and a <= b2):
                raise ValueError(f"rows {(a, b)} -> {(a2, b2)} do not form an interval")

    # -- queries ------------------------------------------------------------

    @property
    def y1(self) -> int:
        return self.y0 + len(self.rows) - 1

    def __len__(self) -> int:
        return sum(b - a + 1 for a, b in self.rows)

    def points(self) -> list[tuple[int, int]]:
        return [
            (x, self.y0 + i)
            for i, (a, b) in enumerate(self.rows)
            for x in range(a, b + 1)
        ]

    def __contains__(self, xy: tuple[int, int]) -> bool:
        x, y = xy
        if not self.y0 <= y <= self.y1:
            return False
        a, b = self.rows[y - self.y0]
        return a <= x <= b

    @cached_property
    def member_set(self) -> frozenset:
        return frozenset(self.points())

    @cached_property
    def sort_key(self):
        return (len(self), tuple(sorted(self.points())))

    def issuperset(self, other: "GridInterval") -> bool:
        if other.y0 < self.y0 or other.y1 > self.y1:
            return False
        for i, (a, b) in enumerate(other.rows):
            sa, sb = self.rows[other.y0 + i - self.y0]
            if a < sa or b > sb:
                return False
        return True

    def bbox(self) -> tuple[int, int, int, int]:
        xs_lo = min(a for a, _ in self.rows)
        xs_hi = max(b for _, b in self.rows)
        return (xs_lo, self.y0, xs_hi, self.y1)

    def minimal_points(self) -> tuple[tuple[int, int], ...]:
        """The minimal antichain, listed in ascending x (descending y)."""
        pts = []
        for i, (a, _) in enumerate(self.rows):
            if i == 0 or a < self.rows[i - 1][0]:
                pts.append((a, self.y0 + i))
        return tuple(sorted(pts))

    def maximal_points(self) -> tuple[tuple[int, int], ...]:
        """The maximal antichain, listed in ascending x (descending y)."""
        pts = []
        for i, (_, b) in enumerate(self.rows):
            if i == len(self.rows) - 1 or self.rows[i + 1][1] < b:
                pts.append((b, self.y0 + i))
        return tuple(sorted(pts))

    # -- constructions --------------------------------------------------------

    def thicken(self, eps: int) -> "GridInterval":
        """Dilation by the sup-norm ball of radius eps (ambient, never clipped)."""
        if eps < 0:
            raise ValueError("eps must be >= 0")
        if eps == 0:
            return self
        last = len(self.rows) - 1
        rows = []
        for y in range(self.y0 - eps, self.y1 + eps + 1):
            hi = min(y + eps - self.y0, last)
            lo = max(y - eps - self.y0, 0)
            rows.append((self.rows[hi][0] - eps, self.rows[lo][1] + eps))
        return GridInterval(self.y0 - eps, tuple(rows))

    @classmethod
    def from_points(cls, pts) -> "GridInterval":
        pts = set(pts)
        if not pts:
            raise ValueError("empty interval")
        ys = sorted({y for _, y in pts})
        if ys != list(range(ys[0], ys[0] + len(ys))):
            raise ValueError("rows are not contiguous")
        rows = []
        for y in ys:
            xs = sorted(x for x, yy in pts if yy == y)
            if xs != list(range(xs[0], xs[0] + len(xs))):
                raise ValueError(f"row {y} is not contiguous")
            rows.append((xs[0], xs[-1]))
        return cls(ys[0], tuple(rows))

    @classmethod
    def rectangle(cls, lo: tuple[int, int], hi: tuple[int, int]) -> "GridInterval":
        if not (lo[0] <= hi[0] and lo[1] <= hi[1]):
            raise ValueError("rectangle corners must be ordered")
        return cls(lo[1], tuple((lo[0], hi[0]) for _ in range(lo[1], hi[1] + 1)))


def epsilon_thicken(interval: GridInterval, eps: int) -> GridInterval:
    return interval.thicken(eps)


def interval_points_ok(pts) -> bool:
    try:
        GridInterval.from_points(pts)
        return True
    except ValueError:
        return False


def interval_to_subposet(poset: FinitePoset, gi: GridInterval) -> SubposetId:
    """Ids of a grid interval inside a window poset (the interval must fit)."""
    idx = poset.id_of_coord()
    try:
        ids = tuple(sorted(idx[pt] for pt in gi.points()))
    except KeyError as e:
        raise ValueError(f"interval point {e.args[0]} outside the window") from None
    return SubposetId("interval", ids)


def subposet_to_interval(poset: FinitePoset, sub: SubposetId) -> GridInterval:
    return GridInterval.from_points(poset.coord_of(i) for i in sub.members)


# -- enumeration --------------------------------------------------------------


def _iter_row_ranges(x0: int, x1: int):
    for a in range(x0, x1 + 1):
        for b in range(a, x1 + 1):
            yield (a, b)


def iter_grid_intervals(bbox, max_min_pts=None, max_max_pts=None):
    """All GridIntervals inside bbox = (x0, y0, x1, y1), unsorted.

    Min/max-point budgets prune during generation: going up, each strict
    drop of the row start adds a minimal point, each strict drop of the
    row end adds a maximal point to the row below.
    """
    x0, y0, x1, y1 = bbox
    mmin = max_min_pts if max_min_pts is not None else (x1 - x0 + y1 - y0 + 2)
    mmax = max_max_pts if max_max_pts is not None else (x1 - x0 + y1 - y0 + 2)
    if mmin < 1 or mmax < 1:
        raise ValueError("min/max point budgets must be >= 1")

    def extend(ybase, rows, mins_used, maxs_used):
        yield GridInterval(ybase, tuple(rows))
        if ybase + len(rows) > y1:
            return
        a, b = rows[-1]
        for a2 in range(x0, a + 1):
            new_mins = mins_used + (1 if a2 < a else 0)
            if new_mins > mmin:
                continue
            for b2 in range(max(a2, a), b + 1):
                new_maxs = maxs_used + (1 if b2 < b else 0)
                if new_maxs > mmax:
                    continue
                rows.append((a2, b2))
                yield from extend(ybase, rows, new_mins, new_maxs)
                rows.pop()

    for ybase in range(y0, y1 + 1):
        for rng in _iter_row_ranges(x0, x1):
            # maxs_used counts drops below the current top row; the top row
            # itself always contributes one maximal point, budgeted here.
            yield from extend(ybase, [rng], 1, 1)


def count_grid_intervals(width: int, height: int, max_min_pts=None, max_max_pts=None) -> int:
    """Interval count of a width x height window without enumeration (row DP)."""
    mmin = max_min_pts if max_min_pts is not None else width + height
    mmax = max_max_pts if max_max_pts is not None else width + height
    ranges = list(_iter_row_ranges(0, width - 1))
    total = 0
    for band in range(1, height + 1):
        n_bands = height - band + 1
        if band == 1:
            total += n_bands * len(ranges)
            continue
        # state: (range, mins_used, maxs_used) after the bottom row
        state = {(r, 1, 1): 1 for r in ranges}
        for _ in range(band - 1):
            nxt: dict = {}
            for ((a, b), mu, xu), cnt in state.items():
                for a2 in range(0, a + 1):
                    mu2 = mu + (1 if a2 < a else 0)
                    if mu2 > mmin:
                        continue
                    for b2 in range(max(a2, a), b + 1):
                        xu2 = xu + (1 if b2 < b else 0)
                        if xu2 > mmax:
                            continue
                        key = ((a2, b2), mu2, xu2)
                        nxt[key] = nxt.get(key, 0) + cnt
            state = nxt
        total += n_bands * sum(state.values())
    return total


def enumerate_grid_intervals(
    poset: FinitePoset,
    max_min_pts=None,
    max_max_pts=None,
    cap: int = DEFAULT_INTERVAL_CAP,
) -> list[GridInterval]:
    """Intervals of a grid window, canonical order, guarded by a count DP."""
    if poset.grid_coords is None:
        raise ValueError("not a grid poset")
    xs = [x for x, _ in poset.grid_coords]
    ys = [y for _, y in poset.grid_coords]
    w = max(xs) - min(xs) + 1
    h = max(ys) - min(ys) + 1
    n = count_grid_intervals(w, h, max_min_pts, max_max_pts)
    if n > cap:
        raise EnumerationCapError(
            f"{n} intervals exceed the cap of {cap}; raise the cap explicitly to proceed"
        )
    out = list(iter_grid_intervals((min(xs), min(ys), max(xs), max(ys)), max_min_pts, max_max_pts))
    out.sort(key=lambda gi: gi.sort_key)
    return out


def enumerate_intervals(
    poset: FinitePoset,
    max_min_pts=None,
    max_max_pts=None,
    cap: int = DEFAULT_INTERVAL_CAP,
) -> list[SubposetId]:
    """All intervals with at most the given numbers of minimal/maximal points.

    Grid windows use staircase generation; other posets fall back to the
    brute-force subset filter (exponential, so capped by element count).
    With budgets (1, 1) this is exactly the set of segments [p, q].
    """
    if poset.grid_coords is not None:
        return [
            SubposetId("interval", tuple(sorted(poset.id_of_coord()[pt] for pt in gi.points())))
            for gi in enumerate_grid_intervals(poset, max_min_pts, max_max_pts, cap)
        ]
    if poset.n > 20:
        raise EnumerationCapError(
            f"brute-force interval enumeration over {poset.n} elements refused"
        )
    if 2**poset.n - 1 > cap:
        raise EnumerationCapError(f"2^{poset.n} subsets exceed the cap of {cap}")
    out = []
    for size in range(1, poset.n + 1):
        for ms in combinations(range(poset.n), size):
            if not poset.is_interval_subset(ms):
                continue
            if max_min_pts is not None and len(poset.minimal_of(ms)) > max_min_pts:
                continue
            if max_max_pts is not None and len(poset.maximal_of(ms)) > max_max_pts:
                continue
            out.append(SubposetId("interval", ms))
    return out


def enumerate_connected(poset: FinitePoset, cap: int = DEFAULT_CONNECTED_CAP) -> list[SubposetId]:
    """All connected nonempty subsets, canonical order. Exponential: capped."""
    if poset.n > cap:
        raise EnumerationCapError(
            f"connected-subset enumeration over {poset.n} > {cap} elements refused"
        )
    out = []
    for size in range(1, poset.n + 1):
        for ms in combinations(range(poset.n), size):
            if poset.is_connected_subset(ms):
                out.append(SubposetId("connected", ms))
    return out


def enumerate_segments(poset: FinitePoset) -> list[SubposetId]:
    """Segments [p, q] for p <= q, canonical order."""
    out = []
    for a in range(poset.n):
        for b in poset.up_ids(a):
            out.append(SubposetId("segment", tuple(int(i) for i in poset.segment(a, int(b)))))
    out.sort(key=lambda s: s.sort_key)
    # distinct segments can coincide as sets only if [p,q] == [p',q'] forces
    # (p,q) == (p',q'), which holds; keep a dedupe anyway for safety.
    dedup = []
    seen = set()
    for s in out:
        if s.members not in seen:
            seen.add(s.members)
            dedup.append(s)
    return dedup


# -- boundary fences -------------------------------------------------------------


def lower_fence(gi: GridInterval) -> tuple[tuple[int, int], ...]:
    """The shortest faithful path threading the minimal points via their joins.

    With minimal points p0, p1, ... in ascending x, the join of consecutive
    points shares its y with the earlier and its x with the later, so each
    leg is a straight unit-step segment and the path is unique:
    p0 -> (x1, y0) -> p1 -> (x2, y1) -> ...  A unique minimal point gives
    the one-point path.  The fence stays inside the interval.
    """
    mins = gi.minimal_points()
    pts: list[tuple[int, int]] = [mins[0]]
    for (x0, y0), (x1, y1) in zip(mins, mins[1:]):
        # horizontal leg to the join (x1, y0), then vertical leg down to (x1, y1)
        for x in range(x0 + 1, x1 + 1):
            pts.append((x, y0))
        for y in range(y0 - 1, y1 - 1, -1):
            pts.append((x1, y))
    for pt in pts:
        if pt not in gi:
            raise AssertionError(f"fence point {pt} escaped the interval")
    return tuple(pts)


def upper_fence(gi: GridInterval) -> tuple[tuple[int, int], ...]:
    """The shortest faithful path threading the maximal points via their meets.

    Mirror image of :func:`lower_fence`: q0 -> (x0, y1) -> q1 -> ... with
    vertical legs down to each meet followed by horizontal legs.
    """
    maxs = gi.maximal_points()
    pts: list[tuple[int, int]] = [maxs[0]]
    for (x0, y0), (x1, y1) in zip(maxs, maxs[1:]):
        # vertical leg down to the meet (x0, y1), then horizontal leg to (x1, y1)
        for y in range(y0 - 1, y1 - 1, -1):
            pts.append((x0, y))
        for x in range(x0 + 1, x1 + 1):
            pts.append((x, y1))
    for pt in pts:
        if pt not in gi:
            raise AssertionError(f"fence point {pt} escaped the interval")
    return tuple(pts)


# -- the containment poset -----------------------------------------------------


@dataclass(frozen=True)
class ContainmentPoset:
    """A collection of subsets ordered by reverse inclusion: I <= J iff I >= J.

    ``poset`` is the abstract FinitePoset on indices into ``items``; the
    zeta/mobius machinery applies to it directly.
    """

    items: tuple
    poset: FinitePoset

    @cached_property
    def _index(self) -> dict:
        return {it.member_set: i for i, it in enumerate(self.items)}

    def index_of(self, item) -> int:
        try:
            return self._index[item.member_set]
        except KeyError:
            raise KeyError("item not in collection") from None


def containment_poset(items) -> ContainmentPoset:
    items = list(items)
    sets = [it.member_set for it in items]
    if len(set(sets)) != len(sets):
        raise ValueError("duplicate items in collection")
    order = sorted(range(len(items)), key=lambda i: items[i].sort_key)
    items = [items[i] for i in order]
    sets = [sets[i] for i in order]
    n = len(items)
    leq = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(n):
            leq[i, j] = sets[j] <= sets[i]
    return ContainmentPoset(tuple(items), FinitePoset(leq))
