"""Left-invariant orders as flags of rational subspaces with one functional per level.

An :class:`OrderScheme` on a group of Hirsch rank ``n`` is a complete flag
``0 = V_0 < V_1 < ... < V_n = Q^n`` of subalgebras in log coordinates and
covectors ``phi_1, ..., phi_n`` with ``phi_i`` vanishing on ``V_{i-1}`` and
on ``[V_i, V_i]`` but not on ``V_i``.  An element ``g != e`` is positive iff
``phi_i(log g) > 0`` where ``i`` is the least level with ``log g`` in ``V_i``.
``V_i`` meets the lattice in the convex subgroup ``C_i``; ``phi_i`` is the
Archimedean jump map on ``C_i / C_{i-1}``.

Only rank-one jumps with rational functionals are representable.  That
subfamily is dense in the space of all left orders, which is all the
witness-producing operations need.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from . import linalg as la
from .group import GroupSpec
from .lattice import first_lattice_point
from .linalg import Subspace


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def group_signature(group: GroupSpec) -> tuple:
    return (group.name, group.generators, tuple(sorted(group.brackets.items())))


class Violation(NamedTuple):
    level: int
    condition: str
    detail: str

    def __str__(self) -> str:
        return f"level {self.level}: {self.condition}: {self.detail}"


class JumpInfo(NamedTuple):
    level: int
    value: Fraction
    central: bool


class BiInvariance(NamedTuple):
    """Outcome of :meth:`OrderScheme.is_biinvariant`.

    ``failures`` lists ``(level, basis index a, flag vector b)`` with
    ``[e_a, b]`` outside ``V_{level-1}``.
    """

    ok: bool
    failures: tuple

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True, eq=False)
class OrderScheme:
    group: GroupSpec
    flag: tuple  # V_0, ..., V_n
    functionals: tuple  # phi_1, ..., phi_n

    # -- construction -------------------------------------------------------

    @classmethod
    def from_rows(cls, group: GroupSpec, rows: Sequence[Sequence], functionals: Sequence[Sequence]) -> OrderScheme:
        """``V_i = span(rows[:i])``; ``n - 1`` rows suffice (``V_n`` is everything)."""
        n = group.rank
        rows = [la.vec(r) for r in rows]
        flag = [Subspace.zero(n)]
        for i in range(1, n + 1):
            flag.append(Subspace.span(rows[:i], n) if i <= len(rows) else Subspace.full(n))
        return cls(group, tuple(flag), tuple(la.vec(f) for f in functionals))

    @classmethod
    def from_basis(cls, group: GroupSpec, basis: Sequence[Sequence], signs: Sequence[int] | None = None) -> OrderScheme:
        """Flag adapted to ``basis`` with dual-basis functionals times ``signs``."""
        n = group.rank
        b = la.matrix(basis)
        dual = la.transpose(la.inverse(b))  # row i is the dual covector of b_i
        signs = signs or [1] * n
        funcs = [la.scale(s, dual[i]) for i, s in enumerate(signs)]
        return cls.from_rows(group, b, funcs)

    @classmethod
    def standard(cls, group: GroupSpec) -> OrderScheme:
        """Flag ``V_i = span(e_{n-i+1}, ..., e_n)`` with coordinate functionals.

        On ``heisenberg:r`` this is ``V_1 = <z>``, ``V_2 = <y, z>``; on ``Z^2``
        the lexicographic order that compares ``y`` first.
        """
        n = group.rank
        return cls.from_basis(group, [la.unit(n, n - 1 - i) for i in range(n)])

    # -- derived data -----------------------------------------------------------

    @property
    def rank(self) -> int:
        return self.group.rank

    @cached_property
    def adapted_basis(self) -> tuple:
        """``b_1, ..., b_n`` with ``b_i`` in ``V_i`` but not ``V_{i-1}``."""
        out = []
        for lo, hi in zip(self.flag, self.flag[1:]):
            out.append(next(b for b in hi.basis if not lo.contains(b)))
        return tuple(out)

    @cached_property
    def _coordinate_columns(self) -> tuple:
        inv = la.inverse(self.adapted_basis)
        return la.transpose(inv)

    @cached_property
    def orientation(self) -> tuple[int, ...]:
        return tuple(_sign(la.dot(f, b)) for f, b in zip(self.functionals, self.adapted_basis))

    @cached_property
    def _jump_scale(self) -> tuple:
        return tuple(la.dot(f, b) for f, b in zip(self.functionals, self.adapted_basis))

    def key(self) -> tuple:
        return (group_signature(self.group), tuple(v.basis for v in self.flag), self.orientation)

    def __eq__(self, other) -> bool:
        if not isinstance(other, OrderScheme):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"OrderScheme({self.group.name}, basis={self.adapted_basis}, signs={self.orientation})"

    # -- validation -------------------------------------------------------------

    def validate(self) -> list[Violation]:
        G, n = self.group, self.rank
        out: list[Violation] = []
        if len(self.flag) != n + 1:
            return [Violation(0, "flag length", f"expected {n + 1} subspaces, got {len(self.flag)}")]
        if len(self.functionals) != n or any(len(f) != n for f in self.functionals):
            return [Violation(0, "functionals", f"expected {n} covectors of length {n}")]
        for i, v in enumerate(self.flag):
            if v.dim != i:
                out.append(Violation(i, "flag dimension", f"dim V_{i} = {v.dim}"))
        if out:
            return out
        for i in range(1, n + 1):
            lo, hi, f = self.flag[i - 1], self.flag[i], self.functionals[i - 1]
            if not lo <= hi:
                out.append(Violation(i, "flag nesting", f"V_{i - 1} not inside V_{i}"))
                continue
            if not G.is_subalgebra(hi):
                out.append(Violation(i, "bracket-closure", f"V_{i} is not closed under the bracket"))
            if any(la.dot(f, b) != 0 for b in lo.basis) or all(la.dot(f, b) == 0 for b in hi.basis):
                out.append(Violation(i, "kernel condition", f"ker phi_{i} meets V_{i} in something other than V_{i - 1}"))
            elif any(la.dot(f, G.bracket(a, b)) != 0 for a, b in itertools.combinations(hi.basis, 2)):
                out.append(Violation(i, "homomorphism", f"phi_{i} does not vanish on [V_{i}, V_{i}]"))
        return out

    def is_valid(self) -> bool:
        return not self.validate()

    # -- the order ----------------------------------------------------------------

    def level_of_log(self, v: Sequence) -> tuple[int, Fraction]:
        """``(i, phi_i(v))`` for a nonzero log vector; ``(0, 0)`` for zero."""
        cols = self._coordinate_columns
        for i in reversed(range(self.rank)):
            c = la.dot(v, cols[i])
            if c:
                return i + 1, c * self._jump_scale[i]
        return 0, Fraction(0)

    def sign_of_log(self, v: Sequence) -> int:
        return _sign(self.level_of_log(v)[1])

    def sign(self, g: Sequence) -> int:
        """+1, -1, or 0 (only for the identity)."""
        return self.sign_of_log(self.group.to_log(g))

    def is_positive(self, g: Sequence) -> int:
        """Same as :meth:`sign`; test ``> 0`` for positivity."""
        return self.sign(g)

    def compare(self, g: Sequence, h: Sequence) -> int:
        """-1 if ``g < h``, 0 if equal, +1 if ``g > h``; defined by the sign of ``g^-1 h``."""
        G = self.group
        return -self.sign(G.multiply(G.inverse(g), h))

    def in_basic_open(self, pairs: Iterable[tuple[Sequence, Sequence]]) -> bool:
        """True iff ``x < y`` for every ``(x, y)``."""
        return all(self.compare(x, y) < 0 for x, y in pairs)

    def convex_jump(self, g: Sequence) -> JumpInfo:
        level, value = self.level_of_log(self.group.to_log(g))
        if level == 0:
            raise ValueError("the identity has no convex jump")
        return JumpInfo(level, value, self.is_central_level(level))

    def is_central_level(self, i: int) -> bool:
        G = self.group
        return G.bracket_subspace(G.full, self.flag[i]) <= self.flag[i - 1]

    def reverse_on_jump(self, i: int) -> OrderScheme:
        if not 1 <= i <= self.rank:
            raise ValueError(f"level must be in 1..{self.rank}")
        funcs = list(self.functionals)
        funcs[i - 1] = la.scale(-1, funcs[i - 1])
        return OrderScheme(self.group, self.flag, tuple(funcs))

    def is_biinvariant(self) -> BiInvariance:
        """Every jump central, i.e. ``[Q^n, V_i] <= V_{i-1}`` for all ``i``."""
        G, n = self.group, self.rank
        failures = []
        for i in range(1, n + 1):
            for a in range(n):
                for b in self.flag[i].basis:
                    if not self.flag[i - 1].contains(G.bracket(la.unit(n, a), b)):
                        failures.append((i, a, b))
        return BiInvariance(not failures, tuple(failures))

    def describe(self) -> str:
        lines = []
        for i, (b, f) in enumerate(zip(self.adapted_basis, self.functionals), 1):
            lines.append(f"V_{i} += ({','.join(map(str, b))})  phi_{i} = ({','.join(map(str, f))})")
        return "\n".join(lines)


# -- coordinate changes ----------------------------------------------------------


def base_change(scheme: OrderScheme, m: Sequence[Sequence], target: GroupSpec) -> OrderScheme:
    """Push ``scheme`` forward along the log-coordinate isomorphism ``v -> m v``.

    Flags map to ``m V_i`` and functionals to ``phi_i o m^-1``, so a point
    ``p`` of the source is positive iff ``m p`` is positive in the result.
    """
    n = target.rank
    m_inv = la.inverse(m)
    flag = tuple(v.image(m) if v.dim else Subspace.zero(n) for v in scheme.flag)
    funcs = tuple(la.vecmat(f, m_inv) for f in scheme.functionals)
    return OrderScheme(target, flag, funcs)


def transport_scheme(scheme: OrderScheme, embed: Sequence[Sequence], target: GroupSpec) -> OrderScheme:
    """Order on ``G`` inducing ``scheme`` on a finite-index subgroup.

    ``embed`` is the log-coordinate matrix of the inclusion ``H -> G``.  A
    finite-index subgroup has the same Mal'cev completion, so the extension
    is the exact base change.
    """
    try:
        return base_change(scheme, embed, target)
    except ZeroDivisionError:
        raise ValueError("embedding is not invertible; subgroup is not of finite index") from None


def restrict_to_subgroup(scheme: OrderScheme, sub) -> OrderScheme:
    """Restriction of an order on ``G`` to a :class:`~nilord.lattice.Subgroup`, in ``H``-coordinates."""
    return base_change(scheme, sub.embed_inverse, sub.spec)


def sign_from_subgroup(scheme_h: OrderScheme, sub, g: Sequence) -> int:
    """Sign of ``g`` in ``G`` read off from an order on ``H`` via a power ``g^m`` in ``H``."""
    from .lattice import power_into

    G = sub.ambient
    if all(c == 0 for c in g):
        return 0
    m = power_into(sub.table, g)
    return scheme_h.sign(sub.from_ambient(G.power(g, m)))


# -- perturbation (no isolated bi-invariant orders) --------------------------------


def _pow2_above(x: Fraction) -> int:
    n = 1
    while n <= x:
        n *= 2
    return n


def perturb_biinvariant(scheme: OrderScheme, agree: Iterable[Sequence]) -> tuple[OrderScheme, tuple[int, ...]]:
    """A different bi-invariant order agreeing with ``scheme`` on ``agree``.

    Finds the smallest level ``l`` with ``[Q^n, V_l] <= V_{l-2}``.  The
    rank-two section ``V_l / V_{l-2}`` is then central, so the order can be
    changed there freely.  The new top functional is
    ``phi_l + phi_{l-1} / N`` with ``N`` the least power of two above every
    ratio ``|phi_{l-1}(v)| / |phi_l(v)|`` for ``v = log s`` at level ``l``;
    ``V_{l-1}`` is replaced by the kernel of that functional.  Returns the
    new scheme and an element whose sign flips.
    """
    G, n = scheme.group, scheme.rank
    if G.is_abelian and n <= 1:
        raise ValueError("an abelian group of rank <= 1 has isolated bi-invariant orders")
    if not scheme.is_biinvariant():
        raise ValueError("scheme is not bi-invariant")
    flag, funcs = scheme.flag, scheme.functionals
    ell = next(
        (l for l in range(2, n + 1) if G.bracket_subspace(G.full, flag[l]) <= flag[l - 2]),
        None,
    )
    if ell is None:
        raise ValueError("no central rank-two section; group is not of the supported kind")
    f_lo, f_hi = funcs[ell - 2], funcs[ell - 1]

    bound = Fraction(0)
    for g in agree:
        v = G.to_log(g)
        level, _ = scheme.level_of_log(v)
        if level == ell:
            bound = max(bound, abs(la.dot(f_lo, v)) / abs(la.dot(f_hi, v)))
    N = _pow2_above(bound)

    psi = la.add(f_hi, la.scale(Fraction(1, N), f_lo))
    b_lo, b_hi = scheme.adapted_basis[ell - 2], scheme.adapted_basis[ell - 1]
    b_new = la.sub(la.scale(la.dot(psi, b_hi), b_lo), la.scale(la.dot(psi, b_lo), b_hi))
    new_flag = list(flag)
    new_flag[ell - 1] = flag[ell - 2].join(Subspace.span([b_new], n))
    new_funcs = list(funcs)
    new_funcs[ell - 1] = psi
    result = OrderScheme(G, tuple(new_flag), tuple(new_funcs))

    # t at level l with phi_l(t) = 1, phi_{l-1}(t) = 0; u at level l-1 with phi_{l-1}(u) = 1
    u = la.scale(1 / la.dot(f_lo, b_lo), b_lo)
    t = la.sub(b_hi, la.scale(la.dot(f_lo, b_hi), u))
    t = la.scale(1 / la.dot(f_hi, t), t)
    direction = la.sub(t, la.scale(N + 1, u))
    witness = first_lattice_point(G, la.integral_direction(direction))
    return result, witness


# -- families of schemes --------------------------------------------------------------


def coordinate_schemes(group: GroupSpec, reversals: str = "single", central: bool = False) -> list[OrderScheme]:
    """Valid flags spanned by coordinate vectors, in permutation order.

    ``reversals="single"`` follows each base scheme by its single-level
    reversals; ``"all"`` gives every orientation pattern; ``"none"`` only
    the base schemes.
    """
    n = group.rank
    out = []
    for perm in itertools.permutations(range(n)):
        basis = [la.unit(n, p) for p in perm]
        s = OrderScheme.from_basis(group, basis)
        if not s.is_valid() or (central and not s.is_biinvariant()):
            continue
        if reversals == "all":
            out.extend(OrderScheme.from_basis(group, basis, signs)
                       for signs in itertools.product((1, -1), repeat=n))
        elif reversals == "single":
            out.append(s)
            out.extend(s.reverse_on_jump(i) for i in range(1, n + 1))
        elif reversals == "none":
            out.append(s)
        else:
            raise ValueError(f"unknown reversals mode {reversals!r}")
    return out


def random_scheme(group: GroupSpec, rng: random.Random, central: bool = False, spread: int = 2) -> OrderScheme:
    """A random valid scheme, built from the top of the flag down.

    ``V_{i-1}`` is the kernel in ``V_i`` of a random covector vanishing on
    ``[V_i, V_i]`` (or on ``[Q^n, V_i]`` when ``central``, which makes every
    jump central and the order bi-invariant).
    """
    n = group.rank
    flag = [None] * (n + 1)
    funcs = [None] * n
    v = Subspace.full(n)
    flag[n] = v
    for i in range(n, 0, -1):
        d = group.bracket_subspace(group.full if central else v, v)
        ann = d.annihilator()
        while True:
            coeffs = [rng.randint(-spread, spread) for _ in ann]
            f = tuple(sum((c * row[k] for c, row in zip(coeffs, ann)), Fraction(0)) for k in range(n))
            if any(la.dot(f, b) != 0 for b in v.basis):
                break
        lower = v.intersect(Subspace.span(la.nullspace([f], n), n))
        funcs[i - 1] = f if rng.random() < 0.5 else la.scale(-1, f)
        flag[i - 1] = lower
        v = lower
    return OrderScheme(group, tuple(flag), tuple(funcs))


def scheme_family(group: GroupSpec, count: int = 20, seed: int = 0, central: bool = False) -> list[OrderScheme]:
    """Deterministic list of ``count`` distinct valid schemes.

    Coordinate flags (with reversals) come first, then seeded random ones.
    """
    rng = random.Random(seed)
    out: list[OrderScheme] = []
    seen = set()
    for s in coordinate_schemes(group, central=central):
        if s not in seen:
            seen.add(s)
            out.append(s)
        if len(out) >= count:
            return out
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 100 * count:
            raise RuntimeError("could not generate enough distinct schemes")
        s = random_scheme(group, rng, central=central)
        if s not in seen:
            seen.add(s)
            out.append(s)
    return out
