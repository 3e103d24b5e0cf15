"""Brute-force partial positive cones on word balls.

Independent of the flag machinery: a cone here is just a sign on each
nonidentity ball element, with ``sign(g^-1) = -sign(g)`` and
``g, h > e  =>  gh > e`` enforced on triples lying inside the ball.  Such
cones need not extend to genuine orders.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .group import GroupSpec
from .order import OrderScheme

DEFAULT_CAP = 40


class CapExceeded(ValueError):
    pass


def default_cap() -> int:
    """``NILORD_CAP`` from the environment, else 40."""
    raw = os.environ.get("NILORD_CAP")
    return int(raw) if raw else DEFAULT_CAP


@dataclass(frozen=True)
class Ball:
    """Nonidentity elements of word length at most ``radius``, in BFS order."""

    group: GroupSpec
    radius: int
    elements: tuple

    @classmethod
    def build(cls, group: GroupSpec, radius: int) -> "Ball":
        n = group.rank
        steps = []
        for i in range(n):
            g = group.generator(i)
            steps += [g, group.inverse(g)]
        e = group.identity
        seen = {e}
        order = []
        frontier = [e]
        for _ in range(radius):
            nxt = []
            for g in frontier:
                for s in steps:
                    h = group.multiply(g, s)
                    if h not in seen:
                        seen.add(h)
                        order.append(h)
                        nxt.append(h)
            frontier = nxt
        return cls(group, radius, tuple(order))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g) -> bool:
        return tuple(g) in self._index

    @property
    def _index(self) -> dict:
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = {g: i for i, g in enumerate(self.elements)}
            object.__setattr__(self, "_idx", idx)
        return idx

    def position(self, g) -> int:
        return self._index[tuple(g)]

    def is_inversion_closed(self) -> bool:
        return all(self.group.inverse(g) in self for g in self.elements)

    def triples(self) -> list[tuple[int, int, int]]:
        """Index triples ``(g, h, gh)`` with all three in the ball."""
        out = []
        for i, g in enumerate(self.elements):
            for j, h in enumerate(self.elements):
                gh = self.group.multiply(g, h)
                k = self._index.get(gh)
                if k is not None:
                    out.append((i, j, k))
        return out


@dataclass(frozen=True)
class PartialCone:
    """Signs ``+1`` / ``-1`` on the elements of a ball, in ball order."""

    ball: Ball = field(compare=False, hash=False)
    signs: tuple

    def sign(self, g) -> int:
        return self.signs[self.ball.position(g)]

    def positive(self) -> list:
        return [g for g, s in zip(self.ball.elements, self.signs) if s > 0]

    def violations(self) -> list[str]:
        """Antisymmetry and closure failures, checked directly on the group."""
        G = self.ball.group
        out = []
        for g, s in zip(self.ball.elements, self.signs):
            gi = G.inverse(g)
            if gi in self.ball and self.sign(gi) != -s:
                out.append(f"antisymmetry fails at {g}")
        pos = self.positive()
        for g in pos:
            for h in pos:
                gh = G.multiply(g, h)
                if gh in self.ball and self.sign(gh) < 0:
                    out.append(f"closure fails: {g} * {h} = {gh} is negative")
        return out

    def restrict(self, smaller: Ball) -> "PartialCone":
        return PartialCone(smaller, tuple(self.sign(g) for g in smaller.elements))

    def format(self) -> str:
        G = self.ball.group
        return " ".join(("+" if s > 0 else "-") + G.format_element(g)
                        for g, s in zip(self.ball.elements, self.signs) if s > 0)


def _variables(ball: Ball):
    """Pair each element with its inverse; the earlier one is the variable."""
    G = ball.group
    var_of, polarity, reps = [], [], []
    rep_index = {}
    for i, g in enumerate(ball.elements):
        j = ball.position(G.inverse(g))
        if j < i:
            var_of.append(rep_index[j])
            polarity.append(-1)
        else:
            rep_index[i] = len(reps)
            reps.append(i)
            var_of.append(rep_index[i])
            polarity.append(1)
    return var_of, polarity, reps


def enumerate_cones(group: GroupSpec, radius: int, cap: int | None = None) -> list[PartialCone]:
    """All partial cones on the radius-``radius`` ball, deterministically ordered.

    Depth-first over one variable per ``{g, g^-1}`` pair (``+`` before ``-``),
    with unit propagation on the clauses ``not(g > e and h > e and gh < e)``.
    """
    cap = default_cap() if cap is None else cap
    ball = Ball.build(group, radius)
    if len(ball) > cap:
        raise CapExceeded(f"ball of radius {radius} has {len(ball)} elements, cap is {cap}")
    if not ball.is_inversion_closed():
        raise ArithmeticError("word ball is not inversion-closed")
    var_of, pol, reps = _variables(ball)
    nvar = len(reps)
    # A literal is (variable, value); element i is positive iff value == pol[i].
    clauses = []
    for i, j, k in ball.triples():
        clause = ((var_of[i], -pol[i]), (var_of[j], -pol[j]), (var_of[k], pol[k]))
        if len({v for v, _ in clause}) < 3 and _tautology(clause):
            continue
        clauses.append(clause)
    watch: list[list[int]] = [[] for _ in range(nvar)]
    for c, clause in enumerate(clauses):
        for v in {v for v, _ in clause}:
            watch[v].append(c)

    results: list[PartialCone] = []
    assign: list[int] = [0] * nvar

    def propagate(start: int, trail: list[int]) -> bool:
        stack = [start]
        while stack:
            v = stack.pop()
            for c in watch[v]:
                free = None
                sat = False
                for u, val in clauses[c]:
                    a = assign[u]
                    if a == val:
                        sat = True
                        break
                    if a == 0:
                        if free is not None and free != (u, val):
                            free = False
                        elif free is None:
                            free = (u, val)
                if sat or free is False:
                    continue
                if free is None:
                    return False
                u, val = free
                assign[u] = val
                trail.append(u)
                stack.append(u)
        return True

    def search(v: int):
        while v < nvar and assign[v] != 0:
            v += 1
        if v == nvar:
            signs = tuple(assign[var_of[i]] * pol[i] for i in range(len(ball)))
            results.append(PartialCone(ball, signs))
            return
        for val in (1, -1):
            trail = [v]
            assign[v] = val
            if propagate(v, trail):
                search(v + 1)
            for u in trail:
                assign[u] = 0

    search(0)
    return results


def _tautology(clause) -> bool:
    lits = set(clause)
    return any((v, -val) in lits for v, val in lits)


def restrict_scheme(scheme: OrderScheme, radius: int, ball: Ball | None = None) -> PartialCone:
    ball = ball or Ball.build(scheme.group, radius)
    return PartialCone(ball, tuple(scheme.sign(g) for g in ball.elements))


class CrosscheckReport(NamedTuple):
    cones: int
    schemes: int
    distinct_restrictions: int
    unmatched: tuple
    unrealized: int
    invalid_cones: int

    @property
    def ok(self) -> bool:
        return not self.unmatched and self.invalid_cones == 0


def crosscheck(group: GroupSpec, radius: int, family: Iterable[OrderScheme],
               cap: int | None = None) -> CrosscheckReport:
    """Compare flag-order restrictions with the brute-force cone list."""
    cones = enumerate_cones(group, radius, cap)
    ball = cones[0].ball if cones else Ball.build(group, radius)
    known = {c.signs for c in cones}
    family = list(family)
    restricted = [restrict_scheme(s, radius, ball).signs for s in family]
    unmatched = tuple(i for i, r in enumerate(restricted) if r not in known)
    realized = set(restricted) & known
    invalid = sum(1 for c in cones if c.violations())
    return CrosscheckReport(len(cones), len(family), len(set(restricted)), unmatched,
                            len(known - realized), invalid)


def monotone(group: GroupSpec, radius: int, cap: int | None = None) -> bool:
    """Every radius ``k+1`` cone restricts to a radius ``k`` cone."""
    small = enumerate_cones(group, radius, cap)
    big = enumerate_cones(group, radius + 1, cap)
    known = {c.signs for c in small}
    ball = small[0].ball if small else Ball.build(group, radius)
    return all(c.restrict(ball).signs in known for c in big)
