"""Subgroups of the lattice: induced polycyclic sequences, membership, index.

A subgroup ``H = <S>`` is put in triangular form along the polycyclic series
``G = G_1 > G_2 > ... > G_{n+1} = 1`` (``G_d = <g_d, ..., g_n>``): for each
depth ``d`` at most one generator ``t_d`` whose first nonzero exponent sits
at position ``d`` and is positive and minimal.  This is the group analogue of
Hermite normal form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from . import linalg as la
from .group import GroupSpec


def _depth(g: Sequence) -> int | None:
    for i, a in enumerate(g):
        if a != 0:
            return i
    return None


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, u, v)`` with ``u a + v b = g = gcd(a, b) > 0``."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


@dataclass(frozen=True)
class SubgroupTable:
    """Triangular generating sequence of a subgroup; ``rows[d]`` is ``t_d`` or None."""

    group: GroupSpec
    rows: tuple

    @property
    def basis(self) -> list[tuple[int, ...]]:
        return [t for t in self.rows if t is not None]

    @property
    def hirsch_rank(self) -> int:
        return len(self.basis)

    def index(self) -> int | float:
        """``[G : H]`` as the product of section indices; ``math.inf`` if some section is lost."""
        if any(t is None for t in self.rows):
            return math.inf
        return math.prod(t[d] for d, t in enumerate(self.rows))

    def contains(self, p: Sequence) -> bool:
        """Exact membership of a lattice or rational point."""
        G = self.group
        p = tuple(la.Q(c) for c in p)
        for d in range(G.rank):
            a = p[d]
            if a == 0:
                continue
            t = self.rows[d]
            if t is None:
                return False
            q = a / t[d]
            if q.denominator != 1:
                return False
            p = tuple(G.multiply(G.power(t, -int(q)), p))
        return all(c == 0 for c in p)

    def decompose(self, g: Sequence) -> list[tuple[int, int]]:
        """Exponents ``[(d, k), ...]`` with ``g = prod t_d^k`` in depth order."""
        G = self.group
        out = []
        for d in range(G.rank):
            a = g[d]
            if a == 0:
                continue
            t = self.rows[d]
            if t is None or a % t[d]:
                raise ValueError(f"{g} is not in the subgroup")
            k = a // t[d]
            out.append((d, k))
            g = G.multiply(G.power(t, -k), g)
        return out


def induced_sequence(group: GroupSpec, generators: Iterable[Sequence]) -> SubgroupTable:
    G = group
    n = G.rank
    rows: list = [None] * n
    queue = [tuple(int(c) for c in g) for g in generators]

    def install(d, t):
        if t[d] < 0:
            t = G.inverse(t)
        rows[d] = t
        for other in rows:
            if other is not None and other != t:
                queue.append(G.commutator(t, other))

    while queue:
        g = queue.pop()
        while True:
            d = _depth(g)
            if d is None:
                break
            t = rows[d]
            if t is None:
                install(d, g)
                break
            a, b = g[d], t[d]
            if a % b == 0:
                g = G.multiply(G.power(t, -(a // b)), g)
                continue
            _, u, v = _xgcd(b, a)
            install(d, G.multiply(G.power(t, u), G.power(g, v)))
            queue.append(t)
    return SubgroupTable(G, tuple(rows))


def lattice_membership(group: GroupSpec, p: Sequence, generators: Iterable[Sequence]) -> bool:
    return induced_sequence(group, generators).contains(p)


def index_in(group: GroupSpec, generators: Iterable[Sequence]) -> int | float:
    return induced_sequence(group, generators).index()


@dataclass(frozen=True, eq=False)
class Subgroup:
    """A finite-index subgroup ``H`` as a group in its own right.

    ``spec`` uses the triangular sequence ``t_1, ..., t_n`` as its Mal'cev
    basis; ``embed`` is the matrix of log coordinates ``H -> G`` (column
    ``i`` is ``log t_i``).  Both groups share one Mal'cev completion, so
    ``embed`` is invertible.
    """

    ambient: GroupSpec
    table: SubgroupTable
    spec: GroupSpec
    embed: la.Matrix

    @cached_property
    def embed_inverse(self) -> la.Matrix:
        return la.inverse(self.embed)

    @property
    def index(self) -> int:
        return self.table.index()

    def to_ambient(self, h: Sequence):
        """Image in ``G`` of an element written in ``H``'s own coordinates."""
        p = self.ambient.from_log(la.matvec(self.embed, self.spec.to_log(h)))
        return p.to_element() if p.is_integral() else p

    def from_ambient(self, g: Sequence):
        """``H``-coordinates of an element of ``G`` (rational if ``g`` is not in ``H``)."""
        p = self.spec.from_log(la.matvec(self.embed_inverse, self.ambient.to_log(g)))
        return p.to_element() if p.is_integral() else p


def subgroup(group: GroupSpec, generators: Iterable[Sequence], name: str | None = None) -> Subgroup:
    table = induced_sequence(group, generators)
    if table.index() == math.inf:
        raise ValueError("subgroup has infinite index; only finite-index subgroups are modelled")
    basis = table.basis
    logs = [group.to_log(t) for t in basis]
    embed = la.transpose(logs)
    inv = la.inverse(embed)
    n = group.rank
    brackets = {}
    for i in range(n):
        for j in range(i + 1, n):
            v = la.matvec(inv, group.bracket(logs[i], logs[j]))
            if not la.is_zero(v):
                brackets[(i, j)] = v
    label = name or f"{group.name}[index {table.index()}]"
    spec = GroupSpec(label, tuple(f"h{i + 1}" for i in range(n)), brackets)
    return Subgroup(group, table, spec, embed)


def power_into(table: SubgroupTable, g: Sequence, limit: int = 10_000) -> int:
    """Smallest ``m >= 1`` with ``g^m`` in the subgroup (exists for finite index)."""
    G = table.group
    for m in range(1, limit + 1):
        if table.contains(G.power(g, m)):
            return m
    raise ValueError(f"no power of {g} up to {limit} lies in the subgroup")


def first_lattice_point(group: GroupSpec, log_vector: Sequence, limit: int = 100_000) -> tuple[int, ...]:
    """Lattice point ``exp(m v)`` with the smallest ``m >= 1``.

    The exponent coordinates of ``exp(t v)`` are polynomials in ``t`` with
    rational coefficients vanishing at 0, so some ``m`` clears every
    denominator.
    """
    v = tuple(Fraction(c) for c in log_vector)
    for m in range(1, limit + 1):
        p = group.from_log(la.scale(m, v))
        if p.is_integral():
            return p.to_element()
    raise ValueError(f"no lattice point on the ray through {v} below multiplier {limit}")
