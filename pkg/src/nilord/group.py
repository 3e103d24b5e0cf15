"""Finitely generated torsion-free nilpotent groups in Mal'cev coordinates.

A group is described by a strong Mal'cev basis ``g_1, ..., g_n``: every
element is uniquely ``g_1^a_1 ... g_n^a_n`` with integer exponents, and the
logs ``e_i = log g_i`` span a rational nilpotent Lie algebra with
``[e_i, e_j]`` supported on ``e_k, k > max(i, j)``.  Exponent vectors are
*coordinates of the second kind*; ``to_log`` gives coordinates of the first
kind.  The two are related by the Baker-Campbell-Hausdorff product, which is
exact here because only nilpotency class <= 3 is supported.

Commutators follow ``[g, h] = g^-1 h^-1 g h`` throughout.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Sequence

from . import linalg as la
from .linalg import Subspace

MAX_CLASS = 3

Word = tuple  # tuple[tuple[int, int], ...]  (generator index, exponent)


class RationalPoint(tuple):
    """A point of the rational Mal'cev completion.

    ``kind`` is ``"exp"`` for exponent coordinates (second kind) or ``"log"``
    for log coordinates (first kind).  It is a plain tuple otherwise, so it
    compares equal to the tuple of its coordinates.
    """

    kind: str

    def __new__(cls, coords: Iterable, kind: str = "exp"):
        if kind not in ("exp", "log"):
            raise ValueError(f"unknown coordinate kind {kind!r}")
        self = super().__new__(cls, (la.Q(c) for c in coords))
        self.kind = kind
        return self

    def is_integral(self) -> bool:
        return self.kind == "exp" and all(c.denominator == 1 for c in self)

    def to_element(self) -> tuple[int, ...]:
        if not self.is_integral():
            raise ValueError(f"{self!r} is not a lattice point")
        return tuple(int(c) for c in self)

    def __repr__(self) -> str:
        return f"RationalPoint({', '.join(str(c) for c in self)}; {self.kind})"


def _is_int_vector(p) -> bool:
    return all(isinstance(c, int) or (isinstance(c, Fraction) and c.denominator == 1) for c in p)


def _as_ints(p) -> tuple[int, ...]:
    return tuple(int(c) for c in p)


@dataclass(frozen=True, eq=False)
class GroupSpec:
    """Exact model of a f.g. torsion-free nilpotent group of class <= 3.

    ``brackets`` maps ``(i, j)`` with ``i < j`` to the vector ``[e_i, e_j]``
    in log coordinates (zero pairs omitted).  ``mult`` is an optional
    hand-coded collection formula on exponent vectors; when absent the
    product is computed through the Lie model.  ``relations`` keeps the
    presentation (``[g_i, g_j] = word``) for the class-2 collector.
    """

    name: str
    generators: tuple[str, ...]
    brackets: dict = field(default_factory=dict)
    mult: Callable | None = None
    relations: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.generators)
        if n < 1:
            raise ValueError("a group needs at least one generator")
        if len(set(self.generators)) != n:
            raise ValueError("generator names must be distinct")
        clean = {}
        for (i, j), v in self.brackets.items():
            v = la.vec(v)
            if len(v) != n:
                raise ValueError(f"bracket [{i},{j}] has wrong length")
            if i == j:
                if not la.is_zero(v):
                    raise ValueError("[e_i, e_i] must vanish")
                continue
            if i > j:
                i, j, v = j, i, la.scale(-1, v)
            if (i, j) in clean and clean[(i, j)] != v:
                raise ValueError(f"conflicting values for [e_{i}, e_{j}]")
            if not la.is_zero(v):
                clean[(i, j)] = v
        object.__setattr__(self, "brackets", clean)
        if self.nilpotency_class > MAX_CLASS:
            raise ValueError(f"nilpotency class {self.nilpotency_class} > {MAX_CLASS} unsupported")

    def __repr__(self) -> str:
        return f"GroupSpec({self.name!r}, rank={self.rank}, class={self.nilpotency_class})"

    # -- basic data ---------------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.generators)

    def hirsch_rank(self) -> int:
        return self.rank

    @property
    def identity(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def generator(self, i: int) -> tuple[int, ...]:
        return tuple(1 if k == i else 0 for k in range(self.rank))

    def index_of(self, name: str) -> int:
        try:
            return self.generators.index(name)
        except ValueError:
            raise KeyError(f"unknown generator {name!r} in {self.name}") from None

    @property
    def is_abelian(self) -> bool:
        return not self.brackets

    # -- Lie algebra ----------------------------------------------------------

    def bracket(self, u: Sequence, v: Sequence) -> tuple:
        n = self.rank
        out = [Fraction(0)] * n
        for (i, j), w in self.brackets.items():
            c = u[i] * v[j] - u[j] * v[i]
            if c:
                for k, x in enumerate(w):
                    if x:
                        out[k] += c * x
        return tuple(out)

    def structure_constant(self, i: int, j: int) -> tuple:
        if i == j:
            return la.zeros(self.rank)
        if i < j:
            return self.brackets.get((i, j), la.zeros(self.rank))
        return la.scale(-1, self.brackets.get((j, i), la.zeros(self.rank)))

    def ad_matrix(self, u: Sequence) -> la.Matrix:
        """Matrix of ``v -> [u, v]`` acting on column vectors."""
        n = self.rank
        cols = [self.bracket(u, la.unit(n, j)) for j in range(n)]
        return la.transpose(cols)

    def bracket_subspace(self, a: Subspace, b: Subspace) -> Subspace:
        """Span of ``[a, b]``."""
        vs = [self.bracket(u, v) for u in a.basis for v in b.basis]
        return Subspace.span(vs, self.rank)

    @cached_property
    def full(self) -> Subspace:
        return Subspace.full(self.rank)

    @cached_property
    def lower_central_series(self) -> tuple[Subspace, ...]:
        """``g = L_1 > L_2 > ... > L_{c+1} = 0`` for the Lie algebra."""
        series = [Subspace.full(self.rank)]
        while series[-1].dim:
            nxt = self.bracket_subspace(self.full, series[-1])
            if nxt == series[-1]:
                raise ValueError(f"{self.name}: bracket is not nilpotent")
            series.append(nxt)
        return tuple(series)

    @cached_property
    def nilpotency_class(self) -> int:
        return len(self.lower_central_series) - 1

    @cached_property
    def derived_subspace(self) -> Subspace:
        return self.bracket_subspace(self.full, self.full)

    def abelianization_rank(self) -> int:
        return self.rank - self.derived_subspace.dim

    def centralizer_preimage(self, w: Subspace) -> Subspace:
        """``{v : [g, v] in w}`` -- the next term of the upper central series."""
        n = self.rank
        ann = w.annihilator()
        if not ann:
            return Subspace.full(n)
        eqs = []
        for i in range(n):
            ad = self.ad_matrix(la.unit(n, i))
            eqs.extend(la.matmul(ann, ad))
        return Subspace.span(la.nullspace(eqs, n), n)

    @cached_property
    def center(self) -> Subspace:
        return self.centralizer_preimage(Subspace.zero(self.rank))

    @cached_property
    def upper_central_series_(self) -> tuple[Subspace, ...]:
        series = [Subspace.zero(self.rank)]
        while series[-1].dim < self.rank:
            nxt = self.centralizer_preimage(series[-1])
            if nxt == series[-1]:
                raise ValueError(f"{self.name}: bracket is not nilpotent")
            series.append(nxt)
        return tuple(series)

    def upper_central_series(self) -> list[Subspace]:
        return list(self.upper_central_series_)

    def is_subalgebra(self, v: Subspace) -> bool:
        return all(v.contains(self.bracket(a, b)) for a, b in itertools.combinations(v.basis, 2))

    def subalgebra_closure(self, v: Subspace) -> Subspace:
        while True:
            nxt = v.join(self.bracket_subspace(v, v))
            if nxt == v:
                return v
            v = nxt

    def isolator(self, elements: Iterable[Sequence]) -> Subspace:
        """Log-coordinate subspace of the isolator of the subgroup generated by ``elements``.

        Its lattice points are exactly the elements having a positive power
        in that subgroup.
        """
        logs = [self.to_log(g) for g in elements]
        return self.subalgebra_closure(Subspace.span(logs, self.rank))

    def jacobi_violations(self) -> list[tuple[int, int, int]]:
        n = self.rank
        bad = []
        for i, j, k in itertools.combinations(range(n), 3):
            ei, ej, ek = la.unit(n, i), la.unit(n, j), la.unit(n, k)
            s = la.add(
                la.add(self.bracket(ei, self.bracket(ej, ek)), self.bracket(ej, self.bracket(ek, ei))),
                self.bracket(ek, self.bracket(ei, ej)),
            )
            if not la.is_zero(s):
                bad.append((i, j, k))
        return bad

    def is_strong_basis(self) -> bool:
        return all(
            all(w[k] == 0 for k in range(j + 1)) for (i, j), w in self.brackets.items()
        )

    # -- BCH and coordinates --------------------------------------------------

    def bch(self, x: Sequence, y: Sequence) -> tuple:
        """``log(exp x exp y)``, exact for class <= 3."""
        xy = self.bracket(x, y)
        z = [a + b + c / 2 for a, b, c in zip(x, y, xy)]
        if self.nilpotency_class >= 3 and not la.is_zero(xy):
            t = la.sub(self.bracket(x, xy), self.bracket(y, xy))
            z = [a + b / 12 for a, b in zip(z, t)]
        return tuple(la.Q(c) for c in z)

    def to_log(self, p: Sequence) -> RationalPoint:
        if isinstance(p, RationalPoint) and p.kind == "log":
            raise ValueError("point is already in log coordinates")
        n = self.rank
        if len(p) != n:
            raise ValueError(f"expected {n} coordinates, got {len(p)}")
        y = la.zeros(n)
        for i, a in enumerate(p):
            if a:
                y = self.bch(y, la.scale(la.Q(a), la.unit(n, i)))
        return RationalPoint(y, "log")

    def from_log(self, q: Sequence) -> RationalPoint:
        if isinstance(q, RationalPoint) and q.kind == "exp":
            raise ValueError("point is already in exponent coordinates")
        n = self.rank
        if len(q) != n:
            raise ValueError(f"expected {n} coordinates, got {len(q)}")
        y = tuple(map(la.Q, q))
        out = []
        for i in range(n):
            a = y[i]
            out.append(a)
            if a:
                y = self.bch(la.scale(-a, la.unit(n, i)), y)
        return RationalPoint(out, "exp")

    # -- group operations -------------------------------------------------------

    def multiply_lie(self, g: Sequence, h: Sequence) -> RationalPoint:
        """Product through the Lie model (independent of ``mult``)."""
        return self.from_log(self.bch(self.to_log(g), self.to_log(h)))

    def multiply(self, g: Sequence, h: Sequence):
        """Normal form of ``g h``; integer inputs give an integer tuple."""
        if self.mult is not None:
            return self.mult(tuple(g), tuple(h))
        p = self.multiply_lie(g, h)
        if _is_int_vector(g) and _is_int_vector(h):
            return _as_ints(p)
        return p

    def inverse(self, g: Sequence):
        p = self.from_log(la.scale(-1, self.to_log(g)))
        if _is_int_vector(g):
            return _as_ints(p)
        return p

    def commutator(self, g: Sequence, h: Sequence):
        """``g^-1 h^-1 g h``."""
        return self.multiply(self.multiply(self.inverse(g), self.inverse(h)), self.multiply(g, h))

    def conjugate(self, h: Sequence, g: Sequence):
        """``g^-1 h g``."""
        return self.multiply(self.multiply(self.inverse(g), h), g)

    def power(self, g: Sequence, t):
        """``g^t`` for rational ``t``.

        Integer ``t`` on a lattice point returns an integer tuple; otherwise a
        :class:`RationalPoint` in the completion.
        """
        t = la.Q(t)
        p = self.from_log(la.scale(t, self.to_log(g)))
        if t.denominator == 1 and _is_int_vector(g):
            return _as_ints(p)
        return p

    def multiply_all(self, elements: Iterable[Sequence]):
        out = self.identity
        for g in elements:
            out = self.multiply(out, g)
        return out

    def evaluate(self, word: Word) -> tuple[int, ...]:
        """Normal form of a word given as ``((generator index, exponent), ...)``."""
        out = self.identity
        for i, e in word:
            out = self.multiply(out, tuple(e if k == i else 0 for k in range(self.rank)))
        return out

    def is_element(self, p: Sequence) -> bool:
        return _is_int_vector(p)

    def format_element(self, g: Sequence) -> str:
        parts = []
        for name, a in zip(self.generators, g):
            if a == 0:
                continue
            parts.append(name if a == 1 else f"{name}^{a}")
        return " ".join(parts) or "e"

    # -- verification -----------------------------------------------------------

    def sample_elements(self, count: int, bound: int = 3, seed: int = 0) -> list[tuple[int, ...]]:
        rng = random.Random(seed)
        return [tuple(rng.randint(-bound, bound) for _ in range(self.rank)) for _ in range(count)]

    def verify(self, samples: int = 40, seed: int = 0) -> list[str]:
        """Sampled check of every structural invariant; empty list means consistent."""
        problems = []
        if self.jacobi_violations():
            problems.append(f"Jacobi identity fails on {self.jacobi_violations()}")
        if not self.is_strong_basis():
            problems.append("basis is not a strong Mal'cev basis (bracket not triangular)")
        pts = self.sample_elements(samples, seed=seed)
        for g, h, k in zip(pts, pts[1:], pts[2:]):
            if self.multiply(self.multiply(g, h), k) != self.multiply(g, self.multiply(h, k)):
                problems.append(f"associativity fails on {g}, {h}, {k}")
                break
        for g, h in zip(pts, pts[1:]):
            gh = self.multiply(g, h)
            if not self.is_element(gh):
                problems.append(f"product {g}*{h} leaves the lattice")
                break
            if self.to_log(gh) != self.bch(self.to_log(g), self.to_log(h)):
                problems.append(f"multiplication disagrees with BCH on {g}, {h}")
                break
            if self.multiply(g, self.inverse(g)) != self.identity:
                problems.append(f"inverse fails on {g}")
                break
        rng = random.Random(seed + 1)
        for _ in range(samples // 4):
            q = tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(self.rank))
            if self.to_log(self.from_log(q)) != q or self.from_log(self.to_log(q)) != q:
                problems.append(f"log/exp round trip fails at {q}")
                break
        return problems


# -- construction from a nilpotent presentation ------------------------------


def _word_log(group: GroupSpec, word: Word) -> tuple:
    n = group.rank
    y = la.zeros(n)
    for i, e in word:
        y = group.bch(y, la.scale(Fraction(e), la.unit(n, i)))
    return y


def lie_algebra_from_presentation(generators: Sequence[str], relations: dict) -> dict:
    """Structure constants making ``exp(e_i)`` satisfy the given commutator relations.

    ``relations[(i, j)]`` (``i < j``) is the word equal to ``[g_i, g_j]``; it
    may only involve generators with index ``> j``.  Missing pairs commute.
    Pairs are solved deepest-first; for each pair the bracket is corrected
    until the group commutator computed by BCH matches the word, which takes
    at most ``n`` rounds because every correction is of strictly higher
    weight.
    """
    n = len(generators)
    for (i, j), word in relations.items():
        if not i < j:
            raise ValueError("relations must be keyed with i < j")
        if any(k <= j for k, _ in word):
            raise ValueError(
                f"relation [{generators[i]},{generators[j]}] must only involve later generators"
            )
    brackets: dict = {}
    for i in reversed(range(n)):
        for j in reversed(range(i + 1, n)):
            word = relations.get((i, j), ())
            c = la.zeros(n)
            for _ in range(n + 1):
                trial = dict(brackets)
                if not la.is_zero(c):
                    trial[(i, j)] = c
                g = GroupSpec("_partial", tuple(generators), trial)
                target = _word_log(g, word)
                ei, ej = la.unit(n, i), la.unit(n, j)
                comm = g.bch(g.bch(g.bch(la.scale(-1, ei), la.scale(-1, ej)), ei), ej)
                diff = la.sub(target, comm)
                if la.is_zero(diff):
                    break
                c = la.add(c, diff)
            else:
                raise ValueError("presentation did not converge; class > 3?")
            if not la.is_zero(c):
                brackets[(i, j)] = c
    return brackets


def from_presentation(name: str, generators: Sequence[str], relations: dict,
                      mult: Callable | None = None) -> GroupSpec:
    """Build a :class:`GroupSpec` from ``[g_i, g_j] = word`` relations.

    ``relations`` may use either key order; ``(j, i)`` with ``j > i`` is
    converted with ``[g_j, g_i] = [g_i, g_j]^-1``.
    """
    rels = {}
    for (a, b), word in relations.items():
        word = tuple((int(k), int(e)) for k, e in word)
        if a == b:
            if word:
                raise ValueError("[g, g] must be trivial")
            continue
        if a > b:
            a, b = b, a
            word = tuple((k, -e) for k, e in reversed(word))
        rels[(a, b)] = word
    brackets = lie_algebra_from_presentation(generators, rels)
    group = GroupSpec(name, tuple(generators), brackets, mult=mult, relations=rels)
    for (i, j), word in rels.items():
        if group.commutator(group.generator(i), group.generator(j)) != group.evaluate(word):
            raise ValueError(f"relation for ({i},{j}) not realised; class > {MAX_CLASS}?")
    return group


def collect(group: GroupSpec, word: Sequence[tuple[int, int]]) -> tuple[int, ...]:
    """Collect a word to normal form using only the presentation (class <= 2).

    Letters are ``(generator index, +1 or -1)``.  Used as an independent
    cross-check of the multiplication formulas.
    """
    if group.nilpotency_class > 2:
        raise ValueError("the collector only handles class <= 2")
    w = [(i, 1 if e > 0 else -1) for i, e in word for _ in range(abs(e))]
    changed = True
    while changed:
        changed = False
        for p in range(len(w) - 1):
            (j, s), (i, t) = w[p], w[p + 1]
            if j == i and s == -t:
                del w[p:p + 2]
                changed = True
                break
            if j > i:
                # g_j^s g_i^t = g_i^t g_j^s [g_i, g_j]^(-st)  (commutators central)
                rel = group.relations.get((i, j), ())
                k = -s * t
                letters = [(a, 1 if e > 0 else -1) for a, e in rel for _ in range(abs(e))]
                if k < 0:
                    letters = [(a, -e) for a, e in reversed(letters)]
                w[p:p + 2] = [(i, t), (j, s)] + letters
                changed = True
                break
    out = [0] * group.rank
    for i, e in w:
        out[i] += e
    return tuple(out)
