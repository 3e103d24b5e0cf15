import math
import random
from fractions import Fraction

import pytest

from nilord.lattice import first_lattice_point, index_in, induced_sequence, lattice_membership, subgroup
from nilord.registry import free_abelian, heisenberg, class3_example

from oracles import heis_index_mod, lattice_index_det

Z2 = free_abelian(2)
G1 = heisenberg(1)


def test_sublattice_of_z2():
    gens = [(2, 0), (0, 2)]
    assert not lattice_membership(Z2, (1, 1), gens)
    assert lattice_membership(Z2, (4, -2), gens)
    assert index_in(Z2, gens) == 4
    assert index_in(Z2, [(1, 1)]) == math.inf


def test_basis_generates_everything():
    for G in (Z2, G1, class3_example()):
        assert index_in(G, [G.generator(i) for i in range(G.rank)]) == 1


def test_heisenberg_indices():
    assert index_in(G1, [(2, 0, 0), (0, 2, 0), (0, 0, 1)]) == 4
    assert index_in(G1, [(2, 0, 0), (0, 2, 0), (0, 0, 2)]) == 8
    assert index_in(G1, [(1, 0, 0), (0, 1, 0)]) == 1
    assert lattice_membership(G1, (0, 0, 1), [(1, 0, 0), (0, 1, 0)])


def test_rational_point_is_not_a_member():
    assert not lattice_membership(G1, (Fraction(1, 2), 0, 0), [(1, 0, 0), (0, 1, 0)])


def test_z2_index_matches_determinant():
    rng = random.Random(7)
    for _ in range(60):
        rows = [[rng.randint(-6, 6) for _ in range(2)] for _ in range(2)]
        d = lattice_index_det(rows)
        got = index_in(Z2, [tuple(r) for r in rows])
        assert got == (d if d else math.inf)


def test_z3_index_matches_determinant():
    Z3 = free_abelian(3)
    rng = random.Random(8)
    for _ in range(40):
        rows = [[rng.randint(-4, 4) for _ in range(3)] for _ in range(3)]
        d = lattice_index_det(rows)
        assert index_in(Z3, [tuple(r) for r in rows]) == (d if d else math.inf)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_heisenberg_index_matches_finite_quotient(m):
    rng = random.Random(m)
    base = [(m, 0, 0), (0, m, 0), (0, 0, m)]
    for _ in range(15):
        extra = [tuple(rng.randint(-5, 5) for _ in range(3)) for _ in range(rng.randint(0, 2))]
        gens = base + extra
        assert index_in(G1, gens) == heis_index_mod(gens, m)


def test_membership_agrees_with_decomposition():
    table = induced_sequence(G1, [(2, 1, 0), (0, 2, 3)])
    for g in [(2, 1, 0), (0, 2, 3), G1.multiply((2, 1, 0), (0, 2, 3)), G1.commutator((2, 1, 0), (0, 2, 3))]:
        assert table.contains(g)
        word = table.decompose(g)
        assert G1.multiply_all(G1.power(table.rows[d], k) for d, k in word) == g


def test_finite_index_subgroup_model():
    sub = subgroup(G1, [(2, 0, 0), (0, 2, 0), (0, 0, 1)])
    assert sub.index == 4
    assert sub.spec.brackets == {(0, 1): (0, 0, 4)}
    assert sub.to_ambient((1, 1, 0)) == (2, 2, 0)
    assert sub.from_ambient((1, 0, 0)) == (Fraction(1, 2), 0, 0)
    for h in [(1, 0, 0), (0, 1, 0), (3, -1, 2)]:
        for k in [(0, 1, 0), (2, 2, -1)]:
            assert sub.to_ambient(sub.spec.multiply(h, k)) == G1.multiply(sub.to_ambient(h), sub.to_ambient(k))
    with pytest.raises(ValueError):
        subgroup(G1, [(1, 0, 0)])


def test_first_lattice_point():
    # exp(m(X + Y)) = x^m y^m z^(-m^2/2), first integral at m = 2
    assert first_lattice_point(G1, (1, 1, 0)) == (2, 2, -2)
    assert first_lattice_point(Z2, (3, -1)) == (3, -1)
