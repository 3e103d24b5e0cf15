"""Built-in groups with hand-coded collection formulas.

Names: ``Z^n``, ``heisenberg:r`` and ``witte-example-6.2``.
"""

from __future__ import annotations

from fractions import Fraction

from .group import GroupSpec


def _binom2(t):
    if isinstance(t, int):
        return t * (t - 1) // 2
    return Fraction(t) * (t - 1) / 2


def free_abelian(n: int) -> GroupSpec:
    if n < 1:
        raise ValueError("Z^n needs n >= 1")
    names = ("x", "y", "z", "w") if n <= 4 else tuple(f"g{i + 1}" for i in range(n))

    def mult(g, h):
        return tuple(a + b for a, b in zip(g, h))

    return GroupSpec(f"Z^{n}", names[:n], {}, mult=mult)


def heisenberg(r: int = 1) -> GroupSpec:
    """``G_r = <x, y, z | [x, y] = z^r, z central>``; ``G_1`` is the discrete Heisenberg group."""
    if r < 1:
        raise ValueError("heisenberg:r needs r >= 1")

    # y^b x^a' = x^a' y^b z^(-r a' b)
    def mult(g, h):
        a, b, c = g
        a2, b2, c2 = h
        return (a + a2, b + b2, c + c2 - r * b * a2)

    return GroupSpec(
        f"heisenberg:{r}",
        ("x", "y", "z"),
        {(0, 1): (0, 0, r)},
        mult=mult,
        relations={(0, 1): ((2, r),)},
    )


def class3_example() -> GroupSpec:
    """``Z x| Z^3`` with ``[x, w] = y``, ``[y, w] = z``; basis order ``w, x, y, z``.

    Conjugation ``n -> w^-1 n w`` acts on ``<x, y, z> = Z^3`` by the unipotent
    matrix ``M(a, b, c) = (a, a + b, b + c)``, so
    ``(w^d n)(w^d' n') = w^(d+d') (M^d' n + n')``.
    """

    def mult(g, h):
        d, a, b, c = g
        d2, a2, b2, c2 = h
        return (d + d2, a + a2, b + d2 * a + b2, c + d2 * b + _binom2(d2) * a + c2)

    # log M = N - N^2/2 with N x = y, N y = z, so -ad(W) sends X to Y - Z/2.
    brackets = {
        (0, 1): (0, 0, -1, Fraction(1, 2)),  # [W, X] = -(Y - Z/2)
        (0, 2): (0, 0, 0, -1),               # [W, Y] = -Z
    }
    return GroupSpec("witte-example-6.2", ("w", "x", "y", "z"), brackets, mult=mult)


def get_group(name: str) -> GroupSpec:
    """Look up a registry group by name (``Z^3``, ``heisenberg:2``, ...)."""
    key = name.strip()
    if key.startswith("Z^"):
        return free_abelian(int(key[2:]))
    if key == "Z":
        return free_abelian(1)
    if key.startswith("heisenberg"):
        _, _, r = key.partition(":")
        return heisenberg(int(r) if r else 1)
    if key == "witte-example-6.2":
        return class3_example()
    raise KeyError(f"unknown registry group {name!r}")


REGISTRY_NAMES = ("Z^n", "heisenberg:r", "witte-example-6.2")


def acceptance_groups() -> list[GroupSpec]:
    return [free_abelian(2), free_abelian(3), heisenberg(1), heisenberg(2), heisenberg(3), class3_example()]


# generators of standard finite-index subgroups, keyed by (group name, index)
SUBLATTICES = {
    ("Z^2", 4): [[(2, 0), (0, 2)], [(1, 0), (0, 4)], [(2, 1), (0, 2)]],
    ("Z^2", 8): [[(2, 0), (0, 4)], [(2, 1), (0, 4)], [(1, 0), (0, 8)]],
    ("heisenberg:1", 4): [[(2, 0, 0), (0, 2, 0), (0, 0, 1)], [(1, 0, 0), (0, 4, 0), (0, 0, 1)]],
    ("heisenberg:1", 8): [[(2, 0, 0), (0, 2, 0), (0, 0, 2)], [(1, 0, 0), (0, 4, 0), (0, 0, 2)],
                          [(2, 0, 0), (0, 4, 0), (0, 0, 1)]],
}


def sublattices(group: GroupSpec, index: int) -> list[list[tuple[int, ...]]]:
    """Generator lists of the listed subgroups of ``group`` with the given index."""
    return [list(gens) for gens in SUBLATTICES.get((group.name, index), [])]
