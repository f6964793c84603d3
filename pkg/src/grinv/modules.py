"""Persistence modules over finite posets.

A module assigns a GF(p) vector space dimension to every element and a
matrix to every Hasse edge.  Functoriality (path independence of the
composed matrices) is validated at construction.  Limits and colimits
are computed from cover-edge constraints only, which suffices once
functoriality holds; the test suite checks this against an
all-comparable-pairs oracle rather than assuming it.

Modules on grid windows can opt into the extension-by-zero convention:
the module is regarded as a plane module that vanishes outside its
window, so ranks over subsets that leave the window are zero without
materialising anything infinite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf import DEFAULT_P, FFMatrix
from .posets import FinitePoset, GridInterval, SubposetId, lower_fence, upper_fence

FUNCTOR_CHECK_CAP = 512


@dataclass(frozen=True)
class SectionSpace:
    """Basis of the space of sections (the limit) of a module.

    ``basis`` columns are sections; coordinates are stacked over the
    poset's elements in id order, ``offsets[i]`` giving the first
    coordinate of element i.
    """

    basis: FFMatrix
    offsets: tuple[int, ...]

    @property
    def dim(self) -> int:
        return self.basis.cols


class PModule:
    """A functor from a finite poset to GF(p) vector spaces."""

    __slots__ = ("poset", "dims", "maps", "p", "ambient", "_trans", "_window_idx",
                 "_dim_grid")

    def __init__(self, poset: FinitePoset, dims, maps, p: int = DEFAULT_P,
                 ambient: bool = False, validate: bool = True):
        self.poset = poset
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != poset.n or any(d < 0 for d in self.dims):
            raise ValueError("dims must list one nonnegative dimension per element")
        norm = {}
        for (a, b), m in maps.items():
            arr = m.a if isinstance(m, FFMatrix) else np.asarray(m, dtype=np.int64)
            norm[(int(a), int(b))] = arr % p
        self.maps = norm
        self.p = p
        self.ambient = bool(ambient)
        if self.ambient and poset.grid_coords is None:
            raise ValueError("extension-by-zero needs a grid window")
        self._trans = {}
        self._window_idx = poset.id_of_coord() if poset.grid_coords is not None else None
        self._dim_grid = None
        if validate:
            self._validate()

    # -- construction-time checks -----------------------------------------

    def _validate(self):
        cover_set = set(self.poset.covers)
        for (a, b) in self.maps:
            if (a, b) not in cover_set:
                raise ValueError(f"map on non-cover pair ({a}, {b})")
        for (a, b) in cover_set:
            m = self._edge(a, b)
            if m.shape != (self.dims[b], self.dims[a]):
                raise ValueError(
                    f"map {a}->{b} has shape {m.shape}, expected {(self.dims[b], self.dims[a])}"
                )
        if self.poset.n <= FUNCTOR_CHECK_CAP:
            self._check_functorial()

    def _edge(self, a: int, b: int) -> np.ndarray:
        m = self.maps.get((a, b))
        if m is None:
            return np.zeros((self.dims[b], self.dims[a]), dtype=np.int64)
        return m

    def _check_functorial(self):
        """Path independence: T(a, d) must match map(c, d) @ T(a, c) for every
        cover c -> d above a.  Inductively this pins every path composite."""
        in_covers: dict[int, list[int]] = {i: [] for i in range(self.poset.n)}
        for a, b in self.poset.covers:
            in_covers[b].append(a)
        for d in range(self.poset.n):
            below = [int(a) for a in self.poset.down_ids(d) if a != d]
            for a in below:
                t_ad = self.transition(a, d)
                for c in in_covers[d]:
                    if a == c or self.poset.leq[a, c]:
                        t_ac = self.transition(a, c) if a != c else np.eye(self.dims[a], dtype=np.int64)
                        got = (self._edge(c, d) @ t_ac) % self.p
                        if not np.array_equal(got, t_ad):
                            raise ValueError(
                                f"functoriality violated between {a} and {d} (via cover {c}->{d})"
                            )

    # -- basic queries -------------------------------------------------------

    def dim(self, a: int) -> int:
        return self.dims[a]

    def transition(self, a: int, b: int) -> np.ndarray:
        """Composite matrix along any cover path a -> b (a <= b)."""
        if a == b:
            return np.eye(self.dims[a], dtype=np.int64)
        key = (a, b)
        cached = self._trans.get(key)
        if cached is not None:
            return cached
        if not self.poset.leq[a, b]:
            raise ValueError(f"{a} <= {b} does not hold")
        # first cover step below b on some path from a
        for c, d in self.poset.covers:
            if d == b and (c == a or self.poset.leq[a, c]):
                prev = self.transition(a, c) if c != a else np.eye(self.dims[a], dtype=np.int64)
                out = (self._edge(c, d) @ prev) % self.p
                self._trans[key] = out
                return out
        raise AssertionError(f"no cover path from {a} to {b}")

    def window_origin_size(self) -> tuple[tuple[int, int], tuple[int, int]]:
        coords = self.poset.grid_coords
        if coords is None:
            raise ValueError("module is not on a grid window")
        xs = [x for x, _ in coords]
        ys = [y for _, y in coords]
        return (min(xs), min(ys)), (max(xs) - min(xs) + 1, max(ys) - min(ys) + 1)

    def contains_interval(self, gi: GridInterval) -> bool:
        idx = self._window_idx
        if idx is None:
            raise ValueError("module is not on a grid window")
        x0, y0, x1, y1 = gi.bbox()
        (ox, oy), (w, h) = self.window_origin_size()
        return ox <= x0 and oy <= y0 and x1 < ox + w and y1 < oy + h

    def _dims_by_coord(self):
        if self._dim_grid is None:
            (ox, oy), (w, h) = self.window_origin_size()
            grid = np.zeros((h, w), dtype=np.int64)
            for i, (x, y) in enumerate(self.poset.grid_coords):
                grid[y - oy, x - ox] = self.dims[i]
            self._dim_grid = ((ox, oy), grid)
        return self._dim_grid

    def _interval_rank_trivial(self, gi: GridInterval) -> bool:
        """True when the rank over gi is forced to 0: the interval leaves an
        extension-by-zero window or touches a zero-dimensional point."""
        if not self.contains_interval(gi):
            if self.ambient:
                return True
            raise ValueError("interval leaves the window")
        (ox, oy), grid = self._dims_by_coord()
        for i, (a, b) in enumerate(gi.rows):
            row = grid[gi.y0 + i - oy, a - ox : b - ox + 1]
            if not row.all():
                return True
        return False

    # -- derived modules -------------------------------------------------------

    def restrict(self, members) -> "PModule":
        """Induced submodule on a subset of elements (a new, smaller poset)."""
        ms = sorted(set(int(m) for m in members))
        sub_leq = self.poset.leq[np.ix_(ms, ms)]
        coords = None
        if self.poset.grid_coords is not None:
            coords = tuple(self.poset.grid_coords[m] for m in ms)
        sub = FinitePoset(sub_leq, grid_coords=coords, validate=False)
        dims = [self.dims[m] for m in ms]
        maps = {}
        for a, b in sub.covers:
            maps[(a, b)] = self.transition(ms[a], ms[b])
        return PModule(sub, dims, maps, self.p, validate=False)

    def direct_sum(self, other: "PModule") -> "PModule":
        if other.poset.n != self.poset.n or not np.array_equal(other.poset.leq, self.poset.leq):
            raise ValueError("direct sum needs the same poset")
        if other.p != self.p:
            raise ValueError("field mismatch")
        dims = [d1 + d2 for d1, d2 in zip(self.dims, other.dims)]
        maps = {}
        for a, b in self.poset.covers:
            m1, m2 = self._edge(a, b), other._edge(a, b)
            blk = np.zeros((dims[b], dims[a]), dtype=np.int64)
            blk[: self.dims[b], : self.dims[a]] = m1
            blk[self.dims[b]:, self.dims[a]:] = m2
            maps[(a, b)] = blk
        return PModule(self.poset, dims, maps, self.p, ambient=self.ambient or other.ambient,
                       validate=False)

    def __add__(self, other: "PModule") -> "PModule":
        return self.direct_sum(other)

    def scramble(self, rng: np.random.Generator) -> "PModule":
        """An isomorphic copy via a random basis change at every element."""
        from .gf import random_invertible

        bas = [random_invertible(rng, d, self.p) for d in self.dims]
        maps = {}
        for a, b in self.poset.covers:
            maps[(a, b)] = (bas[b].a @ self._edge(a, b) @ bas[a].inverse().a) % self.p
        return PModule(self.poset, self.dims, maps, self.p, ambient=self.ambient, validate=False)

    # -- serialisation -----------------------------------------------------------

    def to_text(self) -> str:
        lines = [self.poset.to_text(), f"field {self.p}"]
        for i, d in enumerate(self.dims):
            if d:
                lines.append(f"dims {i} {d}")
        for a, b in self.poset.covers:
            if self.dims[a] and self.dims[b]:
                lines.append(f"map {a} {b}")
                lines.append(FFMatrix(self._edge(a, b), self.p).to_text())
        return "\n".join(lines)

    @classmethod
    def from_text(cls, text: str, ambient: bool | None = None) -> "PModule":
        lines = [ln.rstrip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln.strip() and not ln.lstrip().startswith("#")]
        poset, i = FinitePoset._from_lines(lines, 0)
        p = DEFAULT_P
        dims = [0] * poset.n
        maps = {}
        while i < len(lines):
            toks = lines[i].split()
            if toks[0] == "field":
                p = int(toks[1])
                i += 1
            elif toks[0] == "dims":
                dims[int(toks[1])] = int(toks[2])
                i += 1
            elif toks[0] == "map":
                a, b = int(toks[1]), int(toks[2])
                mat, i2 = FFMatrix.from_lines(lines, i + 1, p)
                maps[(a, b)] = mat
                i = i2
            else:
                raise ValueError(f"unrecognised module line: {lines[i]!r}")
        if ambient is None:
            ambient = poset.grid_coords is not None
        return cls(poset, dims, maps, p, ambient=ambient)


# -- module constructors ------------------------------------------------------


def interval_module(poset: FinitePoset, members, p: int = DEFAULT_P,
                    ambient: bool | None = None) -> PModule:
    """The module with dimension 1 on the interval, identities inside it."""
    ms = set(int(m) for m in members)
    if not poset.is_interval_subset(ms):
        raise ValueError("support is not an interval")
    dims = [1 if i in ms else 0 for i in range(poset.n)]
    maps = {}
    one = np.ones((1, 1), dtype=np.int64)
    for a, b in poset.covers:
        if a in ms and b in ms:
            maps[(a, b)] = one
    if ambient is None:
        ambient = poset.grid_coords is not None
    return PModule(poset, dims, maps, p, ambient=ambient, validate=False)


def zero_module(poset: FinitePoset, p: int = DEFAULT_P) -> PModule:
    return PModule(poset, [0] * poset.n, {}, p, ambient=poset.grid_coords is not None,
                   validate=False)


def grid_interval_module(window: FinitePoset, gi: GridInterval, p: int = DEFAULT_P) -> PModule:
    idx = window.id_of_coord()
    return interval_module(window, [idx[pt] for pt in gi.points()], p, ambient=True)


def direct_sum(*mods: PModule) -> PModule:
    out = mods[0]
    for m in mods[1:]:
        out = out.direct_sum(m)
    return out


def pullback(n_module: PModule, pi, target_poset: FinitePoset, ambient: bool | None = None) -> PModule:
    """The pullback along an order-preserving map pi: target -> source poset.

    ``pi`` maps each target id to a source id; monotonicity is validated.
    """
    pi = [int(pi[i]) for i in range(target_poset.n)]
    src = n_module.poset
    for a in range(target_poset.n):
        for b in range(target_poset.n):
            if target_poset.leq[a, b] and not src.leq[pi[a], pi[b]]:
                raise ValueError(f"map is not order-preserving at ({a}, {b})")
    dims = [n_module.dims[pi[a]] for a in range(target_poset.n)]
    maps = {}
    for a, b in target_poset.covers:
        maps[(a, b)] = n_module.transition(pi[a], pi[b])
    if ambient is None:
        ambient = target_poset.grid_coords is not None
    return PModule(target_poset, dims, maps, n_module.p, ambient=ambient, validate=False)


# -- limits, colimits, ranks -----------------------------------------------------


def _offsets(dims) -> tuple[int, ...]:
    out = [0]
    for d in dims:
        out.append(out[-1] + d)
    return tuple(out)


def limit(module: PModule) -> SectionSpace:
    """The space of sections, as the kernel of the stacked cover constraints."""
    if not module.poset.is_connected_subset(range(module.poset.n)):
        raise ValueError("limit requires a connected poset")
    offs = _offsets(module.dims)
    total = offs[-1]
    covers = module.poset.covers
    rows = sum(module.dims[b] for _, b in covers)
    c = np.zeros((rows, total), dtype=np.int64)
    r = 0
    for a, b in covers:
        db = module.dims[b]
        c[r : r + db, offs[b] : offs[b + 1]] = np.eye(db, dtype=np.int64)
        c[r : r + db, offs[a] : offs[a + 1]] = (-module._edge(a, b)) % module.p
        r += db
    basis = FFMatrix(c, module.p, copy=False).kernel_basis()
    return SectionSpace(basis, offs)


def colimit(module: PModule) -> tuple[int, FFMatrix]:
    """Quotient of the direct sum by the cover-edge relations.

    Returns (dim, projection) where the projection maps stacked
    coordinates onto the colimit.
    """
    if not module.poset.is_connected_subset(range(module.poset.n)):
        raise ValueError("colimit requires a connected poset")
    offs = _offsets(module.dims)
    total = offs[-1]
    covers = module.poset.covers
    cols = sum(module.dims[a] for a, _ in covers)
    rel = np.zeros((total, cols), dtype=np.int64)
    c = 0
    for a, b in covers:
        da = module.dims[a]
        rel[offs[a] : offs[a + 1], c : c + da] = np.eye(da, dtype=np.int64)
        rel[offs[b] : offs[b + 1], c : c + da] = (-module._edge(a, b)) % module.p
        c += da
    qdim, proj = FFMatrix(rel, module.p, copy=False).cokernel_projector()
    return qdim, proj


def _rank_of_restriction(module: PModule, ms: list[int]) -> int:
    sub = module.restrict(ms)
    if any(d == 0 for d in sub.dims):
        return 0
    sections = limit(sub)
    if sections.dim == 0:
        return 0
    qdim, proj = colimit(sub)
    if qdim == 0:
        return 0
    offs = sections.offsets
    p0 = 0
    block = slice(offs[p0], offs[p0 + 1])
    psi = (proj.a[:, block] @ sections.basis.a[block, :]) % module.p
    return FFMatrix(psi, module.p, copy=False).rank()


def _members_of(module: PModule, region) -> list[int] | None:
    """Resolve a region (SubposetId | GridInterval | id-iterable) to ids.

    Returns None when the region leaves an extension-by-zero window, in
    which case every rank over it vanishes.
    """
    if isinstance(region, GridInterval):
        idx = module._window_idx
        if idx is None:
            raise ValueError("grid interval given for a module without coordinates")
        ids = []
        for pt in region.points():
            i = idx.get(pt)
            if i is None:
                if module.ambient:
                    return None
                raise ValueError(f"point {pt} outside the window")
            ids.append(i)
        return ids
    if isinstance(region, SubposetId):
        return list(region.members)
    return [int(i) for i in region]


def generalized_rank(module: PModule, region) -> int:
    """Rank of the canonical limit-to-colimit map of the restriction.

    Zero whenever some point of the region carries the zero space (in
    particular whenever the region leaves an extension-by-zero window).
    """
    ms = _members_of(module, region)
    if ms is None:
        return 0
    if not ms:
        raise ValueError("empty region")
    if not module.poset.is_connected_subset(ms):
        raise ValueError("region must be connected")
    if any(module.dims[m] == 0 for m in ms):
        return 0
    return _rank_of_restriction(module, ms)


def generalized_rank_fast(module: PModule, gi: GridInterval) -> int:
    """Generalized rank over a grid interval via its boundary fences.

    Sections over the interval restrict isomorphically to the lower
    fence, and the colimit restricts isomorphically to the upper fence,
    so the limit-to-colimit rank is computed on the two fences plus one
    transition into the colimit.
    """
    if module._window_idx is None:
        raise ValueError("fast path needs a grid module")
    idx = module._window_idx
    if module._interval_rank_trivial(gi):
        return 0

    low = [idx[pt] for pt in lower_fence(gi)]
    up = [idx[pt] for pt in upper_fence(gi)]

    sub_l = module.restrict(low)
    sections = limit(sub_l)
    if sections.dim == 0:
        return 0
    sub_u = module.restrict(up)
    qdim, proj = colimit(sub_u)
    if qdim == 0:
        return 0

    low_sorted = sorted(set(low))
    up_sorted = sorted(set(up))
    q0 = up_sorted[0]
    src = next(m for m in low_sorted if module.poset.leq[m, q0])
    t = module.transition(src, q0)

    offs_l = sections.offsets
    li = low_sorted.index(src)
    sec_block = sections.basis.a[offs_l[li] : offs_l[li + 1], :]

    offs_u = _offsets([module.dims[m] for m in up_sorted])
    ui = up_sorted.index(q0)
    proj_block = proj.a[:, offs_u[ui] : offs_u[ui + 1]]

    psi = (proj_block @ t @ sec_block) % module.p
    return FFMatrix(psi, module.p, copy=False).rank()
