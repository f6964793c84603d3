"""Incidence algebra of a finite poset: delta, zeta, Mobius, convolution.

Values are exact Python integers (never reduced mod p): the signed
multiplicities produced by inversion live in Z.  On a finite poset every
function is convolvable, so the support-finiteness predicate is provided
for interface completeness and always holds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .posets import FinitePoset


@dataclass(frozen=True)
class IncidenceElement:
    """A function on the comparable pairs (p <= q) of a finite poset."""

    poset: FinitePoset
    values: dict = field(default_factory=dict)

    def __call__(self, p: int, q: int) -> int:
        if not self.poset.leq[p, q]:
            raise KeyError(f"({p}, {q}) is not a comparable pair")
        return self.values.get((p, q), 0)

    def matrix(self, order=None):
        """Dense integer matrix under a linear extension (upper-triangular)."""
        import numpy as np

        order = list(order) if order is not None else list(self.poset.topological_order())
        pos = {v: i for i, v in enumerate(order)}
        n = self.poset.n
        out = np.zeros((n, n), dtype=np.int64)
        for (p, q), v in self.values.items():
            out[pos[p], pos[q]] = v
        return out

    def to_text(self) -> str:
        """One `p q value` line per nonzero comparable pair."""
        return "\n".join(
            f"{p} {q} {v}" for (p, q), v in sorted(self.values.items()) if v != 0
        )

    @classmethod
    def from_text(cls, poset: FinitePoset, text: str) -> "IncidenceElement":
        vals = {}
        for ln in text.splitlines():
            if not ln.strip():
                continue
            p, q, v = ln.split()
            vals[(int(p), int(q))] = int(v)
        return cls(poset, vals)


def delta(poset: FinitePoset) -> IncidenceElement:
    return IncidenceElement(poset, {(i, i): 1 for i in range(poset.n)})


def zeta(poset: FinitePoset) -> IncidenceElement:
    vals = {}
    for p in range(poset.n):
        for q in poset.up_ids(p):
            vals[(p, int(q))] = 1
    return IncidenceElement(poset, vals)


def mobius_function(poset: FinitePoset) -> IncidenceElement:
    """The inverse of zeta, by the segment recursion.

    mu(p, p) = 1 and mu(p, q) = -sum of mu(p, r) over p <= r < q; computed
    per source p by sweeping the up-set of p in a linear extension, which
    makes every segment sum available when needed.
    """
    vals: dict[tuple[int, int], int] = {}
    topo_pos = {v: i for i, v in enumerate(poset.topological_order())}
    for p in range(poset.n):
        ups = sorted((int(q) for q in poset.up_ids(p)), key=lambda q: topo_pos[q])
        for q in ups:
            if q == p:
                vals[(p, p)] = 1
                continue
            s = 0
            for r in ups:
                if r != q and poset.leq[r, q]:
                    s += vals[(p, r)]
            vals[(p, q)] = -s
    return IncidenceElement(poset, {k: v for k, v in vals.items() if v != 0})


def multiply(alpha: IncidenceElement, beta: IncidenceElement) -> IncidenceElement:
    """Convolution product (alpha beta)(p, r) = sum over q in [p, r]."""
    if alpha.poset is not beta.poset and alpha.poset.n != beta.poset.n:
        raise ValueError("poset mismatch")
    poset = alpha.poset
    vals: dict[tuple[int, int], int] = {}
    for p in range(poset.n):
        for r in poset.up_ids(p):
            r = int(r)
            s = 0
            for q in poset.segment(p, r):
                q = int(q)
                s += alpha.values.get((p, q), 0) * beta.values.get((q, r), 0)
            if s:
                vals[(p, r)] = s
    return IncidenceElement(poset, vals)


@dataclass(frozen=True)
class PosetFunction:
    """An integer-valued function on the elements of a finite poset."""

    poset: FinitePoset
    values: tuple

    def __call__(self, q: int) -> int:
        return self.values[q]

    @classmethod
    def from_dict(cls, poset: FinitePoset, d: dict) -> "PosetFunction":
        return cls(poset, tuple(d.get(i, 0) for i in range(poset.n)))

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.values) if v != 0)

    def to_text(self) -> str:
        """One `element value` line per nonzero element."""
        return "\n".join(f"{i} {v}" for i, v in enumerate(self.values) if v != 0)

    @classmethod
    def from_text(cls, poset: FinitePoset, text: str) -> "PosetFunction":
        d = {}
        for ln in text.splitlines():
            if not ln.strip():
                continue
            i, v = ln.split()
            d[int(i)] = int(v)
        return cls.from_dict(poset, d)


def is_convolvable(f: PosetFunction) -> bool:
    """Support finiteness below every element; vacuously true on finite posets."""
    return f.poset.n < float("inf")


def convolve(f: PosetFunction, alpha: IncidenceElement) -> PosetFunction:
    """Right action (f * alpha)(q) = sum over p <= q of f(p) alpha(p, q)."""
    if f.poset is not alpha.poset and f.poset.n != alpha.poset.n:
        raise ValueError("poset mismatch")
    poset = f.poset
    out = []
    for q in range(poset.n):
        s = 0
        for p in poset.down_ids(q):
            p = int(p)
            fp = f.values[p]
            if fp:
                s += fp * alpha.values.get((p, q), 0)
        out.append(s)
    return PosetFunction(poset, tuple(out))


def mobius_invert(g: PosetFunction) -> PosetFunction:
    """g * mu: the unique f with g(q) = sum over r <= q of f(r)."""
    return convolve(g, mobius_function(g.poset))
