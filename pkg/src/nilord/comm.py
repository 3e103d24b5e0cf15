"""Abstract commensurations acting on orders.

A commensuration of a f.g. torsion-free nilpotent group extends uniquely to
an automorphism of the rational Mal'cev completion, so it is stored as the
matrix of that automorphism in log coordinates.  Equivalence of partial
isomorphisms becomes matrix equality.

Composition uses the exponent convention ``g^(alpha beta) = (g^alpha)^beta``
(apply ``alpha`` first).  With it, ``act_on_order`` is an action:
``act(alpha beta, s) = act(alpha, act(beta, s))``.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from . import linalg as la
from .group import GroupSpec, RationalPoint
from .lattice import first_lattice_point
from .order import (OrderScheme, base_change, coordinate_schemes, group_signature,
                    random_scheme)

FIXES_ALL = "fixes-all-representable"
OUTER = "outer"


class NotACommensuration(ValueError):
    pass


class NotAnAutomorphism(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Commensuration:
    group: GroupSpec
    matrix: la.Matrix

    def __eq__(self, other) -> bool:
        if not isinstance(other, Commensuration):
            return NotImplemented
        return equivalent(self, other)

    def __hash__(self) -> int:
        return hash((group_signature(self.group), self.matrix))

    def __repr__(self) -> str:
        rows = "; ".join(",".join(str(x) for x in r) for r in self.matrix)
        return f"Commensuration({self.group.name}, [{rows}])"

    @property
    def is_identity(self) -> bool:
        return self.matrix == la.identity(self.group.rank)


def bracket_defects(matrix: Sequence[Sequence], group: GroupSpec) -> list[tuple[int, int]]:
    """Pairs ``(i, j)`` with ``A [e_i, e_j] != [A e_i, A e_j]``."""
    n = group.rank
    cols = la.transpose(matrix)
    bad = []
    for i, j in itertools.combinations(range(n), 2):
        lhs = la.matvec(matrix, group.structure_constant(i, j))
        if lhs != group.bracket(cols[i], cols[j]):
            bad.append((i, j))
    return bad


def validate_comm(matrix: Sequence[Sequence], group: GroupSpec) -> Commensuration:
    n = group.rank
    a = la.matrix(matrix)
    if len(a) != n or any(len(r) != n for r in a):
        raise NotACommensuration(f"expected a {n}x{n} matrix")
    if la.det(a) == 0:
        raise NotACommensuration("not invertible")
    bad = bracket_defects(a, group)
    if bad:
        names = ", ".join(f"[{group.generators[i]},{group.generators[j]}]" for i, j in bad)
        raise NotACommensuration(f"not a homomorphism: bracket fails on {names}")
    return Commensuration(group, a)


def identity(group: GroupSpec) -> Commensuration:
    return Commensuration(group, la.identity(group.rank))


def tau(group: GroupSpec, p: int, q: int = 1) -> Commensuration:
    """``tau^{p/q}``: ``g^q -> g^p`` on an abelian group, i.e. scalar ``p/q``."""
    if not group.is_abelian:
        raise NotACommensuration("tau^{p/q} is only defined on abelian groups")
    if p < 1 or q < 1 or math.gcd(p, q) != 1:
        raise ValueError("tau^{p/q} needs coprime positive p, q")
    n = group.rank
    return validate_comm(tuple(la.scale(Fraction(p, q), r) for r in la.identity(n)), group)


def from_images(group: GroupSpec, images: dict) -> Commensuration:
    """Commensuration from generator images, ``{generator index: point}``.

    Unlisted generators are fixed.  Column ``i`` of the matrix is
    ``log(alpha(g_i))``.
    """
    n = group.rank
    cols = []
    for i in range(n):
        img = images.get(i, group.generator(i))
        cols.append(group.to_log(img))
    return validate_comm(la.transpose(cols), group)


def compose(alpha: Commensuration, beta: Commensuration) -> Commensuration:
    """``alpha`` then ``beta``."""
    _same_group(alpha, beta)
    return Commensuration(alpha.group, la.matmul(beta.matrix, alpha.matrix))


def invert(alpha: Commensuration) -> Commensuration:
    return Commensuration(alpha.group, la.inverse(alpha.matrix))


def equivalent(alpha: Commensuration, beta: Commensuration) -> bool:
    return group_signature(alpha.group) == group_signature(beta.group) and alpha.matrix == beta.matrix


def _same_group(alpha, beta):
    if group_signature(alpha.group) != group_signature(beta.group):
        raise ValueError("commensurations of different groups")


def apply(alpha: Commensuration, g: Sequence) -> RationalPoint:
    G = alpha.group
    return G.from_log(la.matvec(alpha.matrix, G.to_log(g)))


def in_domain(alpha: Commensuration, g: Sequence) -> bool:
    """True iff ``alpha(g)`` is again a lattice point."""
    return apply(alpha, g).is_integral()


def act_on_order(alpha: Commensuration, scheme: OrderScheme) -> OrderScheme:
    """Pull ``scheme`` back along ``alpha``: ``g`` is positive in the result iff ``alpha(g)`` is positive."""
    return base_change(scheme, la.inverse(alpha.matrix), scheme.group)


def is_automorphism(alpha: Commensuration) -> bool:
    G = alpha.group
    back = invert(alpha)
    return all(in_domain(alpha, G.generator(i)) and in_domain(back, G.generator(i)) for i in range(G.rank))


# -- faithfulness ----------------------------------------------------------------


class FaithfulnessWitness(NamedTuple):
    scheme: OrderScheme
    element: tuple


def _candidate_directions(scheme: OrderScheme, moved: OrderScheme, radius: int):
    n = scheme.rank
    base = [la.integral_direction(b) for b in scheme.adapted_basis + moved.adapted_basis]
    yield from base
    for u, v in itertools.combinations(base, 2):
        yield tuple(a + b for a, b in zip(u, v))
        yield tuple(a - b for a, b in zip(u, v))
    for r in range(1, radius + 1):
        for v in itertools.product(range(-r, r + 1), repeat=n):
            if max(map(abs, v)) == r:
                yield v


def sign_witness(scheme: OrderScheme, alpha: Commensuration, radius: int = 3) -> tuple | None:
    """Lattice point ``w`` with ``sign_s(w) != sign_s(alpha(w))``, if a small one exists.

    Signs only depend on the ray of ``log w``, so the search runs over small
    integer log directions and then moves out along the ray to the lattice.
    """
    moved = act_on_order(alpha, scheme)
    for v in _candidate_directions(scheme, moved, radius):
        if la.is_zero(v):
            continue
        if scheme.sign_of_log(v) != scheme.sign_of_log(la.matvec(alpha.matrix, v)):
            return first_lattice_point(scheme.group, v)
    return None


def faithfulness_witness(alpha: Commensuration, seed: int = 0, random_trials: int = 200):
    """An order moved by ``alpha`` together with an element whose sign changes.

    Tries coordinate flags with their single-level reversals, then
    ``random_trials`` random flags from ``random.Random(seed)``; the first
    scheme that ``alpha`` moves wins.  On an abelian group a positive scalar
    matrix (``tau^{p/q}``) fixes every order, and :data:`FIXES_ALL` is
    returned.
    """
    G = alpha.group
    n = G.rank
    if alpha.is_identity:
        raise ValueError("the identity fixes every order")
    a = alpha.matrix
    if G.is_abelian and a[0][0] > 0 and a == tuple(la.scale(a[0][0], r) for r in la.identity(n)):
        return FIXES_ALL

    def schemes():
        yield from coordinate_schemes(G, reversals="single")
        rng = random.Random(seed)
        for _ in range(random_trials):
            yield random_scheme(G, rng)

    for s in schemes():
        moved = act_on_order(alpha, s)
        if moved == s:
            continue
        w = sign_witness(s, alpha)
        if w is not None and s.sign(w) != moved.sign(w):
            return FaithfulnessWitness(s, w)
    if G.is_abelian:
        return FIXES_ALL
    raise RuntimeError(f"no moved order found for {alpha!r}; search exhausted")


# -- inner automorphisms ---------------------------------------------------------------


def _log_unipotent(a: la.Matrix) -> la.Matrix | None:
    n = len(a)
    nil = tuple(la.sub(r, e) for r, e in zip(a, la.identity(n)))
    powers = [nil]
    for _ in range(n - 1):
        powers.append(la.matmul(powers[-1], nil))
    if any(not la.is_zero(r) for r in powers[-1]):
        return None
    out = tuple(la.zeros(n) for _ in range(n))
    for k, p in enumerate(powers, 1):
        c = Fraction((-1) ** (k + 1), k)
        out = tuple(la.add(r, la.scale(c, s)) for r, s in zip(out, p))
    return out


def conjugation_matrix(group: GroupSpec, g: Sequence) -> la.Matrix:
    """Log-coordinate matrix of ``h -> g^-1 h g``, namely ``exp(-ad log g)``."""
    n = group.rank
    ad = group.ad_matrix(la.scale(-1, group.to_log(g)))
    out, term = la.identity(n), la.identity(n)
    for k in range(1, n + 1):
        term = tuple(la.scale(Fraction(1, k), r) for r in la.matmul(term, ad))
        out = tuple(la.add(r, s) for r, s in zip(out, term))
    return out


def is_inner(alpha: Commensuration):
    """Conjugator ``g`` in ``G`` with ``alpha(h) = g^-1 h g``, or :data:`OUTER`.

    Solves ``-ad(X) = log A`` exactly; ``X`` is determined modulo the centre,
    and the central part is chosen to make ``exp X`` a lattice point when the
    centre is spanned by trailing basis vectors.
    """
    G = alpha.group
    n = G.rank
    if not is_automorphism(alpha):
        raise NotAnAutomorphism("not an automorphism of G")
    log_a = _log_unipotent(alpha.matrix)
    if log_a is None:
        return OUTER
    ads = [G.ad_matrix(la.unit(n, k)) for k in range(n)]
    system = [tuple(ads[k][r][c] for k in range(n)) for r in range(n) for c in range(n)]
    rhs = [-log_a[r][c] for r in range(n) for c in range(n)]
    x = la.solve(system, rhs)
    if x is None:
        return OUTER
    center = G.center
    trailing = next((k for k in range(n + 1) if la.Subspace.span(
        [la.unit(n, j) for j in range(k, n)], n) == center), None)
    if trailing is None:
        raise NotImplementedError("is_inner needs the centre spanned by trailing generators")
    g0 = G.from_log(x)
    if any(c.denominator != 1 for c in g0[:trailing]):
        return OUTER
    g = tuple(int(c) for c in g0[:trailing]) + (0,) * (n - trailing)
    if conjugation_matrix(G, g) != alpha.matrix:
        raise ArithmeticError("conjugator failed exact verification")
    return g


# -- trivial action on bi-invariant orders ------------------------------------------------


class Certificate(NamedTuple):
    ok: bool
    reasons: tuple

    def __bool__(self) -> bool:
        return self.ok


def bo_trivial_certificate(alpha: Commensuration) -> Certificate:
    """Sufficient test that ``alpha`` fixes every bi-invariant order.

    Holds when the centre is a line, ``A - I`` maps everything into it, and
    ``A`` fixes it pointwise.  Then the centre is the smallest convex
    subgroup of every bi-invariant order and ``alpha`` centralises each
    convex jump.  A false result is not a proof that some order moves.
    """
    G = alpha.group
    n = G.rank
    if not is_automorphism(alpha):
        raise NotAnAutomorphism("not an automorphism of G")
    a = alpha.matrix
    center = G.center
    reasons = []
    ok = True
    if center.dim == 1:
        reasons.append("(i) centre is 1-dimensional: ok")
    else:
        ok = False
        reasons.append(f"(i) centre has dimension {center.dim}: fails")
    diff = tuple(la.sub(r, e) for r, e in zip(a, la.identity(n)))
    image = la.Subspace.span(la.transpose(diff), n)
    if image <= center:
        reasons.append("(ii) (A - I) maps into the centre: ok")
    else:
        ok = False
        reasons.append("(ii) (A - I) does not map into the centre: fails")
    if all(la.matvec(a, b) == b for b in center.basis):
        reasons.append("(iii) A fixes the centre pointwise: ok")
    else:
        ok = False
        reasons.append("(iii) A moves the centre: fails")
    return Certificate(ok, tuple(reasons))
