"""Rank tables over collections, their Mobius inversions, and rank decompositions.

A ``GriTable`` stores the generalized rank of one module over a chosen
collection of subsets (segments, intervals, connected sets, or an
explicit list).  Its Mobius inversion over the containment order is a
``SignedDiagram``: a finitely supported integer function whose positive
and negative parts form the minimal rank decomposition whenever one
exists.  Everything here is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .gf import rational_solve_in_span
from .mobius import PosetFunction, convolve, mobius_function
from .modules import PModule, direct_sum, generalized_rank, generalized_rank_fast, grid_interval_module, interval_module, zero_module
from .posets import ContainmentPoset, GridInterval, SubposetId, containment_poset


def _key(item) -> frozenset:
    return item.member_set


def _cache_key(region):
    """GridInterval/SubposetId are canonical frozen values: hash them directly."""
    if isinstance(region, (GridInterval, SubposetId)):
        return region
    return frozenset(region)


class RankCache:
    """Memoised generalized ranks of one module, keyed by member set.

    Grid intervals use the fence fast path.  ``queries`` counts cache
    misses — the deterministic work measure used by the erosion
    trade-off instrumentation.
    """

    def __init__(self, module: PModule, fast: bool = True):
        self.module = module
        self.fast = fast
        self.queries = 0
        self._memo: dict[frozenset, int] = {}

    def rank(self, region) -> int:
        key = _cache_key(region)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        self.queries += 1
        if self.fast and isinstance(region, GridInterval):
            val = generalized_rank_fast(self.module, region)
        else:
            val = generalized_rank(self.module, region)
        self._memo[key] = val
        return val


@dataclass(frozen=True)
class GriTable:
    """Generalized rank invariant of a module over a fixed collection."""

    collection: tuple
    ranks: tuple[int, ...]
    module_ref: str = ""

    def __post_init__(self):
        if len(self.collection) != len(self.ranks):
            raise ValueError("one rank per collection member")

    def rank_of(self, item) -> int:
        key = _key(item)
        for it, r in zip(self.collection, self.ranks):
            if _key(it) == key:
                return r
        raise KeyError("item not in collection")

    def as_dict(self) -> dict:
        return {it: r for it, r in zip(self.collection, self.ranks)}

    def restrict(self, subcollection) -> "GriTable":
        keys = {_key(it) for it in subcollection}
        pairs = [(it, r) for it, r in zip(self.collection, self.ranks) if _key(it) in keys]
        if len(pairs) != len(keys):
            raise KeyError("subcollection is not contained in the table")
        return GriTable(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs), self.module_ref)

    def check_monotone(self) -> tuple | None:
        """First violating pair (I, J) with I contained in J but rank(I) < rank(J)."""
        n = len(self.collection)
        for i in range(n):
            for j in range(n):
                if i != j and _key(self.collection[i]) <= _key(self.collection[j]):
                    if self.ranks[i] < self.ranks[j]:
                        return (self.collection[i], self.collection[j])
        return None

    def to_tsv(self) -> str:
        return "\n".join(
            f"{format_members(it)}\t{r}" for it, r in zip(self.collection, self.ranks)
        )


@dataclass(frozen=True)
class SignedDiagram:
    """Finitely supported integer multiplicities on a collection of subsets."""

    support: tuple  # ((item, value), ...) with nonzero values, canonical order

    def items(self):
        return self.support

    def value_of(self, item) -> int:
        key = _key(item)
        for it, v in self.support:
            if _key(it) == key:
                return v
        return 0

    def positive_part(self) -> tuple:
        return tuple((it, v) for it, v in self.support if v > 0)

    def negative_part(self) -> tuple:
        return tuple((it, -v) for it, v in self.support if v < 0)

    def __add__(self, other: "SignedDiagram") -> "SignedDiagram":
        acc: dict = {}
        items: dict = {}
        for it, v in list(self.support) + list(other.support):
            k = _key(it)
            acc[k] = acc.get(k, 0) + v
            items[k] = it
        sup = [(items[k], v) for k, v in acc.items() if v != 0]
        sup.sort(key=lambda iv: iv[0].sort_key)
        return SignedDiagram(tuple(sup))

    def __eq__(self, other):
        if not isinstance(other, SignedDiagram):
            return NotImplemented
        a = {(_key(it)): v for it, v in self.support}
        b = {(_key(it)): v for it, v in other.support}
        return a == b

    def to_tsv(self) -> str:
        return "\n".join(f"{format_members(it)}\t{v}" for it, v in self.support)


def format_members(item) -> str:
    """Stable member-list serialisation: coordinate pairs for grid subsets, ids otherwise."""
    if isinstance(item, GridInterval):
        return " ".join(f"{x},{y}" for x, y in sorted(item.points()))
    members = sorted(item.member_set)
    if members and isinstance(members[0], tuple):
        return " ".join(f"{x},{y}" for x, y in members)
    return " ".join(str(m) for m in members)


def parse_members(token_line: str):
    """Inverse of :func:`format_members`: a frozenset of coords or ids."""
    tokens = token_line.split()
    if all("," in t for t in tokens):
        out = []
        for t in tokens:
            x, y = t.split(",")
            out.append((int(x), int(y)))
        return frozenset(out)
    return frozenset(int(t) for t in tokens)


def parse_table_tsv(text: str) -> tuple[tuple[frozenset, int], ...]:
    """Parse the `members<TAB>value` emission back into (member set, value) pairs."""
    out = []
    for ln in text.splitlines():
        if not ln.strip() or ln.startswith("#"):
            continue
        members, value = ln.rsplit("\t", 1)
        out.append((parse_members(members), int(value)))
    return tuple(out)


# -- building tables -----------------------------------------------------------


def gri(module: PModule, collection, module_ref: str = "", cache: RankCache | None = None,
        threads: int = 1) -> GriTable:
    """Rank table of a module over a collection, in canonical order."""
    items = sorted(collection, key=lambda it: it.sort_key)
    cache = cache or RankCache(module)
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            ranks = tuple(pool.map(cache.rank, items))
    else:
        ranks = tuple(cache.rank(it) for it in items)
    return GriTable(tuple(items), ranks, module_ref)


def gpd(table: GriTable, cont: ContainmentPoset | None = None) -> SignedDiagram:
    """Mobius inversion of a rank table over the containment order.

    The support is always contained in the support of the table (the
    table is non-increasing under containment, so inversion cannot
    create mass where the rank vanishes).
    """
    cont = cont or containment_poset(table.collection)
    values = {cont.index_of(it): r for it, r in zip(table.collection, table.ranks)}
    g = PosetFunction.from_dict(cont.poset, values)
    f = convolve(g, mobius_function(cont.poset))
    sup = [(cont.items[i], v) for i, v in enumerate(f.values) if v != 0]
    sup.sort(key=lambda iv: iv[0].sort_key)
    return SignedDiagram(tuple(sup))


def reconstruct_table(diagram: SignedDiagram, collection) -> GriTable:
    """Evaluate sum of diagram values over supersets: the zeta convolution."""
    items = sorted(collection, key=lambda it: it.sort_key)
    ranks = []
    for it in items:
        k = _key(it)
        ranks.append(sum(v for jt, v in diagram.support if k <= _key(jt)))
    return GriTable(tuple(items), tuple(ranks))


@dataclass(frozen=True)
class InvertibilityReport:
    ok: bool
    diagram: SignedDiagram | None
    witness: object | None = None


def verify_invertibility(table: GriTable, candidate_support) -> InvertibilityReport:
    """Can the table be written as a superset-sum over the candidate subcollection?

    Inverts the table restricted to the candidates and re-evaluates the
    zeta sum at every member of the full collection; on failure returns
    the first failing member in canonical order as a witness.
    """
    sub = table.restrict(candidate_support)
    diagram = gpd(sub)
    recon = reconstruct_table(diagram, table.collection)
    for it, want, got in zip(table.collection, table.ranks, recon.ranks):
        if want != got:
            return InvertibilityReport(False, None, it)
    return InvertibilityReport(True, diagram)


# -- decompositions and realisations -----------------------------------------------


def minimal_rank_decomposition(diagram: SignedDiagram) -> tuple[tuple, tuple]:
    """Disjoint positive/negative multiset pair reproducing the table."""
    return diagram.positive_part(), diagram.negative_part()


def realize(part, host, p: int = 2) -> PModule:
    """Direct sum of interval modules with the given multiplicities.

    ``part`` is a ((item, multiplicity), ...) tuple; ``host`` the window
    poset the summands live on.
    """
    mods = []
    for it, mult in part:
        if mult < 0:
            raise ValueError("realize needs nonnegative multiplicities")
        for _ in range(mult):
            if isinstance(it, GridInterval):
                mods.append(grid_interval_module(host, it, p))
            else:
                mods.append(interval_module(host, it.members, p))
    if not mods:
        return zero_module(host, p)
    return direct_sum(*mods)


def indicator_inversion(collection, item) -> SignedDiagram:
    """Mobius inversion over the collection of the indicator of one member."""
    cont = containment_poset(collection)
    i0 = cont.index_of(item)
    g = PosetFunction.from_dict(cont.poset, {i0: 1})
    f = convolve(g, mobius_function(cont.poset))
    sup = [(cont.items[i], v) for i, v in enumerate(f.values) if v != 0]
    sup.sort(key=lambda iv: iv[0].sort_key)
    return SignedDiagram(tuple(sup))


def minimal_nonisomorphic_pair(collection, item, host, p: int = 2) -> tuple[PModule, PModule, SignedDiagram]:
    """The canonical pair realising the inverted indicator of one member.

    The two interval-decomposable modules have equal rank tables on the
    collection minus the chosen member and differ exactly there.
    """
    d = indicator_inversion(collection, item)
    plus = realize(d.positive_part(), host, p)
    minus = realize(d.negative_part(), host, p)
    return plus, minus, d


class IntervalDecomposableError(ValueError):
    pass


def tightness_pair(module: PModule, collection, host=None, full_collection=None, p: int | None = None
                   ) -> tuple[PModule, PModule]:
    """A pair (interval-decomposable, contains-the-module) with equal tables.

    From the signed diagram of the module over the collection: the
    positive part realised as interval modules versus the module plus
    the realised negative part.  Raises if the module behaves
    interval-decomposably over the reference collection (the realised
    diagram reproduces its full table), since then no tightness gap
    exists.
    """
    p = p or module.p
    host = host or module.poset
    table = gri(module, collection)
    diagram = gpd(table)
    if full_collection is not None:
        full_table = gri(module, full_collection)
        full_diag = gpd(full_table)
        realized = realize(full_diag.positive_part(), host, p)
        if gri(realized, full_collection).ranks == full_table.ranks:
            raise IntervalDecomposableError(
                "module is interval-decomposable over the reference collection"
            )
    n_plus = realize(diagram.positive_part(), host, p)
    n_prime = module.direct_sum(realize(diagram.negative_part(), host, p))
    return n_plus, n_prime


def gri_difference_kernel_check(m1: PModule, m2: PModule, small_collection, big_collection) -> bool:
    """True iff the two modules' tables agree on the small collection.

    When they do agree, the difference of the two signed diagrams over
    the big collection must lie in the span of the inverted indicators
    of the members outside the small collection; this is certified by an
    exact rational solve and any failure raises (it would be an internal
    inconsistency, not a property of the inputs).
    """
    t1 = gri(m1, big_collection)
    t2 = gri(m2, big_collection)
    small_keys = {_key(it) for it in small_collection}
    agree = all(
        r1 == r2
        for it, r1, r2 in zip(t1.collection, t1.ranks, t2.ranks)
        if _key(it) in small_keys
    )
    if not agree:
        return False
    cont = containment_poset(t1.collection)
    mu = mobius_function(cont.poset)
    d1 = gpd(t1, cont)
    d2 = gpd(t2, cont)
    diff = {}
    for it, v in d1.support:
        diff[_key(it)] = diff.get(_key(it), 0) + v
    for it, v in d2.support:
        diff[_key(it)] = diff.get(_key(it), 0) - v
    order = cont.items
    target = [diff.get(_key(it), 0) for it in order]
    # the inverted indicator of a member is the corresponding row of mu
    columns = [
        [mu.values.get((i, j), 0) for j in range(len(order))]
        for i, it in enumerate(order)
        if _key(it) not in small_keys
    ]
    coeffs = rational_solve_in_span(columns, target) if columns else ([] if not any(target) else None)
    if coeffs is None:
        raise AssertionError("diagram difference escaped the indicator span")
    return True


# -- emission -------------------------------------------------------------------


def containment_dot(cont: ContainmentPoset, diagram: SignedDiagram | None = None) -> str:
    """DOT rendering of the containment poset, optionally annotated with values."""
    lines = ["digraph containment {"]
    for i, it in enumerate(cont.items):
        label = format_members(it)
        if diagram is not None:
            v = diagram.value_of(it)
            label += f"\\n{v:+d}" if v else ""
        lines.append(f'  n{i} [label="{label}"];')
    for a, b in cont.poset.covers:
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines)
