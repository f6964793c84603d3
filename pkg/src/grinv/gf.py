"""Exact dense linear algebra over a prime field GF(p).

Everything downstream (limits, colimits, generalized ranks) reduces to
rank / kernel / cokernel computations of small dense matrices.  Entries
are stored as int64 residues in [0, p); elimination uses modular pivot
inverses, so results are exact for any prime modulus.  Default p = 2.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

DEFAULT_P = 2


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class FieldSpec:
    """A prime modulus. Kept as a tiny value object so callers can pass it around."""

    __slots__ = ("p",)

    def __init__(self, p: int = DEFAULT_P):
        if not is_prime(p):
            raise ValueError(f"modulus must be prime, got {p}")
        self.p = p

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and other.p == self.p

    def __repr__(self):
        return f"FieldSpec(p={self.p})"


class FFMatrix:
    """A dense matrix over GF(p), wrapping a numpy int64 array."""

    __slots__ = ("a", "p")

    def __init__(self, data, p: int = DEFAULT_P, copy: bool = True):
        if not is_prime(p):
            raise ValueError(f"modulus must be prime, got {p}")
        a = np.array(data, dtype=np.int64, copy=copy)
        if a.ndim != 2:
            raise ValueError("FFMatrix needs a 2-d array")
        self.a = a % p
        self.p = p

    # -- constructors -------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int = DEFAULT_P) -> "FFMatrix":
        return cls(np.zeros((rows, cols), dtype=np.int64), p, copy=False)

    @classmethod
    def identity(cls, n: int, p: int = DEFAULT_P) -> "FFMatrix":
        return cls(np.eye(n, dtype=np.int64), p, copy=False)

    # -- basic shape / access -----------------------------------------

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    def __eq__(self, other):
        return (
            isinstance(other, FFMatrix)
            and other.p == self.p
            and other.a.shape == self.a.shape
            and bool(np.array_equal(other.a, self.a))
        )

    def __repr__(self):
        return f"FFMatrix(p={self.p}, {self.a.tolist()})"

    def copy(self) -> "FFMatrix":
        return FFMatrix(self.a, self.p)

    def transpose(self) -> "FFMatrix":
        return FFMatrix(self.a.T, self.p)

    def is_zero(self) -> bool:
        return not self.a.any()

    # -- arithmetic ----------------------------------------------------

    def __matmul__(self, other: "FFMatrix") -> "FFMatrix":
        if self.p != other.p:
            raise ValueError("field mismatch")
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.a.shape} @ {other.a.shape}")
        return FFMatrix((self.a @ other.a) % self.p, self.p, copy=False)

    def __add__(self, other: "FFMatrix") -> "FFMatrix":
        if self.p != other.p or self.a.shape != other.a.shape:
            raise ValueError("shape/field mismatch")
        return FFMatrix((self.a + other.a) % self.p, self.p, copy=False)

    def __neg__(self) -> "FFMatrix":
        return FFMatrix((-self.a) % self.p, self.p, copy=False)

    # -- elimination ----------------------------------------------------

    def rref(self) -> tuple["FFMatrix", list[int]]:
        """Reduced row-echelon form.

        Returns (R, pivot_cols).  Pivoting takes the first nonzero entry in
        each column, so the result is deterministic.
        """
        r = self.a.copy()
        p = self.p
        m, n = r.shape
        pivots: list[int] = []
        row = 0
        for col in range(n):
            if row >= m:
                break
            sub = np.nonzero(r[row:, col])[0]
            if sub.size == 0:
                continue
            piv = row + int(sub[0])
            if piv != row:
                r[[row, piv]] = r[[piv, row]]
            inv = pow(int(r[row, col]), p - 2, p)
            r[row] = (r[row] * inv) % p
            mask = np.nonzero(r[:, col])[0]
            for i in mask:
                if i != row:
                    r[i] = (r[i] - r[i, col] * r[row]) % p
            pivots.append(col)
            row += 1
        return FFMatrix(r, p, copy=False), pivots

    def rank(self) -> int:
        if self.rows == 0 or self.cols == 0:
            return 0
        return len(self.rref()[1])

    def kernel_basis(self) -> "FFMatrix":
        """Columns form a basis of ker(A); A @ K == 0."""
        m, n = self.a.shape
        if n == 0:
            return FFMatrix.zeros(0, 0, self.p)
        r, pivots = self.rref()
        free = [j for j in range(n) if j not in pivots]
        k = np.zeros((n, len(free)), dtype=np.int64)
        for idx, j in enumerate(free):
            k[j, idx] = 1
            for i, pc in enumerate(pivots):
                k[pc, idx] = (-r.a[i, j]) % self.p
        return FFMatrix(k, self.p, copy=False)

    def left_null_basis(self) -> "FFMatrix":
        """Rows form a basis of the left null space; L @ A == 0."""
        return self.transpose().kernel_basis().transpose()

    def cokernel_projector(self) -> tuple[int, "FFMatrix"]:
        """Quotient by the column space.

        Returns (q, P) with q = rows - rank, P of shape (q, rows), P @ A == 0,
        and P surjective, so P presents coker(A) = k^rows / col(A).
        """
        proj = self.left_null_basis()
        return proj.rows, proj

    def inverse(self) -> "FFMatrix":
        n = self.rows
        if n != self.cols:
            raise ValueError("inverse of a non-square matrix")
        aug = FFMatrix(np.hstack([self.a, np.eye(n, dtype=np.int64)]), self.p)
        r, pivots = aug.rref()
        if pivots != list(range(n)):
            raise ValueError("matrix is singular")
        return FFMatrix(r.a[:, n:], self.p, copy=False)

    def solve(self, b: "FFMatrix") -> "FFMatrix | None":
        """One solution x of A x = b (column-wise), or None if inconsistent."""
        if b.rows != self.rows:
            raise ValueError("shape mismatch")
        n = self.cols
        aug = FFMatrix(np.hstack([self.a, b.a]), self.p)
        r, pivots = aug.rref()
        if any(c >= n for c in pivots):
            return None
        x = np.zeros((n, b.cols), dtype=np.int64)
        for i, pc in enumerate(pivots):
            x[pc] = r.a[i, n:]
        return FFMatrix(x, self.p, copy=False)

    # -- serialisation ---------------------------------------------------

    def to_text(self) -> str:
        lines = [f"{self.rows} {self.cols}"]
        for row in self.a:
            lines.append(" ".join(str(int(v)) for v in row))
        return "\n".join(lines)

    @classmethod
    def from_lines(cls, lines: list[str], start: int, p: int) -> tuple["FFMatrix", int]:
        """Parse the `rows cols` + row-major block format starting at lines[start]."""
        rows, cols = (int(t) for t in lines[start].split())
        data = np.zeros((rows, cols), dtype=np.int64)
        for i in range(rows):
            toks = lines[start + 1 + i].split()
            if len(toks) != cols:
                raise ValueError(f"matrix row {i}: expected {cols} entries")
            data[i] = [int(t) for t in toks]
        return cls(data, p), start + 1 + rows


# -- module-level conveniences matching the operation surface -------------


def rank(m: FFMatrix) -> int:
    return m.rank()


def kernel_basis(m: FFMatrix) -> FFMatrix:
    return m.kernel_basis()


def cokernel_projector(m: FFMatrix) -> tuple[int, FFMatrix]:
    return m.cokernel_projector()


def compose(a: FFMatrix, b: FFMatrix) -> FFMatrix:
    return a @ b


def hstack(mats: list[FFMatrix]) -> FFMatrix:
    p = mats[0].p
    if any(m.p != p for m in mats):
        raise ValueError("field mismatch")
    return FFMatrix(np.hstack([m.a for m in mats]), p)


def vstack(mats: list[FFMatrix]) -> FFMatrix:
    p = mats[0].p
    if any(m.p != p for m in mats):
        raise ValueError("field mismatch")
    return FFMatrix(np.vstack([m.a for m in mats]), p)


def block_diag(mats: list[FFMatrix], p: int = DEFAULT_P) -> FFMatrix:
    if not mats:
        return FFMatrix.zeros(0, 0, p)
    p = mats[0].p
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for m in mats:
        out[r : r + m.rows, c : c + m.cols] = m.a
        r += m.rows
        c += m.cols
    return FFMatrix(out, p, copy=False)


def random_invertible(rng: np.random.Generator, n: int, p: int) -> FFMatrix:
    """Random invertible matrix: unit lower-triangular @ unit upper-triangular @ permutation."""
    lo = np.tril(rng.integers(0, p, (n, n)), -1) + np.eye(n, dtype=np.int64)
    up = np.triu(rng.integers(0, p, (n, n)), 1) + np.eye(n, dtype=np.int64)
    perm = np.eye(n, dtype=np.int64)[rng.permutation(n)]
    return FFMatrix((lo @ up @ perm) % p, p, copy=False)


def rational_solve_in_span(columns: list[list[int]], target: list[int]) -> list[Fraction] | None:
    """Exact solve over Q: coefficients x with sum(x_j * columns[j]) == target, else None.

    Used for the span-membership certificate of signed-diagram differences;
    no floating point anywhere.
    """
    m = len(target)
    n = len(columns)
    aug = [[Fraction(columns[j][i]) for j in range(n)] + [Fraction(target[i])] for i in range(m)]
    pivots: list[tuple[int, int]] = []
    row = 0
    for col in range(n):
        piv = next((i for i in range(row, m) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = 1 / aug[row][col]
        aug[row] = [v * inv for v in aug[row]]
        for i in range(m):
            if i != row and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[row])]
        pivots.append((row, col))
        row += 1
    for i in range(row, m):
        if aug[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for r, c in pivots:
        x[c] = aug[r][n]
    return x
