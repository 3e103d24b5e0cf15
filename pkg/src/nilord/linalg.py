"""Exact linear algebra over the rationals.

Vectors are tuples of :class:`fractions.Fraction`; matrices are tuples of
row tuples.  Everything here is small-dimensional (Hirsch rank <= ~6), so the
straightforward Gauss-Jordan routines are fast enough and keep every sign
decision exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple  # tuple[Fraction, ...]
Matrix = tuple  # tuple[Vector, ...]


def Q(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return parse_rational(x)
    return Fraction(x)


def parse_rational(text: str) -> Fraction:
    """Parse ``"p"``, ``"-p/q"`` or ``"p/q"``; raises ValueError on ``q == 0``."""
    s = text.strip()
    if "/" in s:
        num, den = s.split("/", 1)
        num, den = int(num), int(den)
        if den == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(num, den)
    return Fraction(int(s))


def vec(xs: Iterable) -> Vector:
    return tuple(Q(x) for x in xs)


def zeros(n: int) -> Vector:
    return (Fraction(0),) * n


def unit(n: int, i: int) -> Vector:
    return tuple(Fraction(1 if k == i else 0) for k in range(n))


def add(u: Sequence, v: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, u: Sequence) -> Vector:
    return tuple(c * a for a in u)


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def is_zero(u: Sequence) -> bool:
    return all(a == 0 for a in u)


def identity(n: int) -> Matrix:
    return tuple(unit(n, i) for i in range(n))


def matrix(rows: Iterable[Iterable]) -> Matrix:
    return tuple(vec(r) for r in rows)


def transpose(m: Sequence[Sequence]) -> Matrix:
    return tuple(zip(*m)) if m else ()


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def matvec(a: Sequence[Sequence], v: Sequence) -> Vector:
    """``a @ v`` for a column vector ``v``."""
    return tuple(dot(row, v) for row in a)


def vecmat(v: Sequence, a: Sequence[Sequence]) -> Vector:
    """``v @ a`` for a row vector ``v`` (pull-back of a covector)."""
    n = len(a[0]) if a else 0
    out = [Fraction(0)] * n
    for c, row in zip(v, a):
        if c:
            for j, x in enumerate(row):
                out[j] += c * x
    return tuple(out)


def rref(rows: Iterable[Sequence]) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form; zero rows are dropped.

    Returns ``(rows, pivot_columns)``.  The result is canonical for the row
    space, which is what makes :class:`Subspace` equality syntactic.
    """
    m = [list(map(Q, r)) for r in rows]
    if not m:
        return (), ()
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        if piv != 1:
            m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return tuple(tuple(row) for row in m[:r]), tuple(pivots)


def rank(rows: Iterable[Sequence]) -> int:
    return len(rref(rows)[0])


def nullspace(a: Sequence[Sequence], ncols: int | None = None) -> Matrix:
    """Basis of ``{x : a @ x = 0}`` (right kernel)."""
    if ncols is None:
        ncols = len(a[0])
    red, pivots = rref(a)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(red, pivots):
            x[p] = -row[f]
        basis.append(tuple(x))
    return tuple(basis)


def solve(a: Sequence[Sequence], b: Sequence) -> Vector | None:
    """One solution of ``a @ x = b`` (free variables zero), or None."""
    ncols = len(a[0])
    aug = [tuple(row) + (Q(bi),) for row, bi in zip(a, b)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[-1]
    return tuple(x)


def inverse(a: Sequence[Sequence]) -> Matrix:
    n = len(a)
    aug = [tuple(map(Q, row)) + unit(n, i) for i, row in enumerate(a)]
    red, pivots = rref(aug)
    if tuple(pivots[:n]) != tuple(range(n)) or len(red) < n:
        raise ZeroDivisionError("matrix is singular")
    return tuple(row[n:] for row in red)


def det(a: Sequence[Sequence]) -> Fraction:
    m = [list(map(Q, r)) for r in a]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d


def integral_direction(v: Sequence) -> tuple[int, ...]:
    """Primitive integer vector on the positive ray through ``v``."""
    from math import gcd, lcm

    den = lcm(*(Q(x).denominator for x in v)) if v else 1
    ints = [int(Q(x) * den) for x in v]
    g = gcd(*ints) if ints else 0
    return tuple(x // g for x in ints) if g else tuple(ints)


@dataclass(frozen=True)
class Subspace:
    """A rational subspace of ``Q^ambient`` stored as its RREF basis.

    Two subspaces are equal exactly when their bases are equal.
    """

    basis: Matrix
    ambient: int

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient: int) -> Subspace:
        red, _ = rref(vectors)
        return cls(red, ambient)

    @classmethod
    def zero(cls, ambient: int) -> Subspace:
        return cls((), ambient)

    @classmethod
    def full(cls, ambient: int) -> Subspace:
        return cls(identity(ambient), ambient)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence) -> bool:
        if is_zero(v):
            return True
        return rank(self.basis + (tuple(map(Q, v)),)) == self.dim

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def __le__(self, other: Subspace) -> bool:
        return all(other.contains(b) for b in self.basis)

    def __lt__(self, other: Subspace) -> bool:
        return self <= other and self.dim < other.dim

    def join(self, other: Subspace) -> Subspace:
        return Subspace.span(self.basis + other.basis, self.ambient)

    def annihilator(self) -> Matrix:
        """Rows spanning the covectors vanishing on this subspace."""
        if not self.basis:
            return identity(self.ambient)
        return nullspace(self.basis, self.ambient)

    def intersect(self, other: Subspace) -> Subspace:
        eqs = self.annihilator() + other.annihilator()
        if not eqs:
            return Subspace.full(self.ambient)
        return Subspace.span(nullspace(eqs, self.ambient), self.ambient)

    def image(self, a: Sequence[Sequence]) -> Subspace:
        """Image under the linear map ``v -> a @ v``."""
        return Subspace.span((matvec(a, b) for b in self.basis), self.ambient)

    def __repr__(self) -> str:
        rows = ", ".join("(" + ",".join(str(x) for x in r) + ")" for r in self.basis)
        return f"Subspace[{self.dim}/{self.ambient}]({rows})"
