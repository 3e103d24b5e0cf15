import random
from fractions import Fraction

import pytest

from nilord import linalg as la
from nilord.oracle import Ball
from nilord.order import (OrderScheme, coordinate_schemes, perturb_biinvariant, random_scheme,
                          scheme_family)
from nilord.registry import acceptance_groups, free_abelian, heisenberg, class3_example

Z2 = free_abelian(2)
G1 = heisenberg(1)
W = class3_example()
LEX = OrderScheme.from_rows(Z2, [(0, 1)], [(0, 1), (1, 0)])
STD = OrderScheme.standard(G1)
x, y, z = (1, 0, 0), (0, 1, 0), (0, 0, 1)


def conditions(scheme):
    return {v.condition for v in scheme.validate()}


def test_validate_examples():
    assert LEX.validate() == []
    bad = OrderScheme.from_rows(G1, [(1, 0, 0), (0, 1, 0)], [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    levels = {(v.level, v.condition) for v in bad.validate()}
    assert (2, "bracket-closure") in levels
    same = OrderScheme.from_rows(Z2, [(0, 1)], [(0, 1), (0, 1)])
    assert "kernel condition" in conditions(same)


def test_validate_rejects_nonhomomorphism():
    # V_2 = span(e1, e2) is not a subalgebra, and phi_2, phi_3 do not kill [e1, e2] = e3
    s = OrderScheme.from_rows(G1, [(1, 0, 0), (0, 1, 0)], [(1, 0, 0), (0, 1, 1), (0, 0, 1)])
    found = {(v.level, v.condition) for v in s.validate()}
    assert {(2, "homomorphism"), (3, "homomorphism"), (2, "bracket-closure")} <= found


def test_signs_on_lexicographic_z2():
    assert LEX.is_positive((0, -3)) < 0
    assert LEX.is_positive((1, -1000)) > 0
    assert LEX.is_positive((0, 0)) == 0
    assert LEX.standard(Z2) == LEX


def test_heisenberg_standard_scheme():
    assert STD.is_valid()
    assert STD.is_positive(G1.commutator(x, y)) > 0
    assert STD.convex_jump(x).level == 3
    jz = STD.convex_jump(z)
    assert jz.level == 1 and jz.central
    with pytest.raises(ValueError):
        STD.convex_jump((0, 0, 0))
    assert LEX.convex_jump((0, 5)).level == 1


def test_reverse_on_jump():
    r = LEX.reverse_on_jump(1)
    assert r.is_positive((0, 5)) < 0 and r.is_positive((1, 0)) > 0
    assert r.reverse_on_jump(1) == LEX
    rz = STD.reverse_on_jump(1)
    assert rz.is_positive(z) < 0
    assert rz.is_positive(x) > 0 and rz.is_positive(y) > 0


def test_reverse_changes_exactly_one_level():
    ball = Ball.build(G1, 2)
    for level in (1, 2, 3):
        r = STD.reverse_on_jump(level)
        for g in ball:
            flipped = r.sign(g) != STD.sign(g)
            assert flipped == (STD.convex_jump(g).level == level)


def test_biinvariance_certificate():
    assert all(s.is_biinvariant() for s in coordinate_schemes(Z2, reversals="all"))
    assert STD.is_biinvariant()
    left_only = OrderScheme.from_rows(G1, [(0, 1, 0), (0, 1, 1)], [(0, 1, 0), (0, 0, 1), (1, 0, 0)])
    assert left_only.is_valid()
    cert = left_only.is_biinvariant()
    assert not cert and cert.failures


def test_biinvariance_matches_behaviour():
    ball = list(Ball.build(G1, 2))
    left_only = OrderScheme.from_rows(G1, [(0, 1, 0), (0, 1, 1)], [(0, 1, 0), (0, 0, 1), (1, 0, 0)])
    triples = [(g, h, k) for g in ball[:10] for h in ball[:10] for k in ball[:10]]
    for g, h, k in triples:
        assert STD.compare(G1.multiply(g, k), G1.multiply(h, k)) == STD.compare(g, h)
    assert any(left_only.compare(G1.multiply(g, k), G1.multiply(h, k)) != left_only.compare(g, h)
               for g, h, k in triples)


def test_in_basic_open():
    assert LEX.in_basic_open([])
    assert LEX.in_basic_open([((0, 0), (0, 1))])
    assert not LEX.in_basic_open([((0, 1), (0, 0))])


def test_scheme_equality_up_to_positive_scalar():
    scaled = OrderScheme(LEX.group, LEX.flag, tuple(la.scale(3, f) for f in LEX.functionals))
    assert scaled == LEX
    tilted = OrderScheme(LEX.group, LEX.flag, ((0, 1), (5, 7)))
    assert not tilted.is_valid()
    assert LEX.reverse_on_jump(2) != LEX


def test_perturb_z2():
    new, w = perturb_biinvariant(LEX, [(1, 0), (0, 1)])
    # N = 1 from the ratios of S, so the witness is (1, -N - 1)
    assert w == (1, -2)
    assert new.is_valid() and new.is_biinvariant()
    assert new.sign((1, 0)) == LEX.sign((1, 0)) and new.sign((0, 1)) == LEX.sign((0, 1))
    assert new.sign(w) != LEX.sign(w)


def test_perturb_heisenberg():
    new, w = perturb_biinvariant(STD, [x, y, z])
    # smallest level with [Q^3, V_l] <= V_{l-2} is l = 3, since [e1, e2] = e3 is not in V_0
    assert w == (1, -2, 1)
    assert new.is_valid() and new.is_biinvariant()
    assert all(new.sign(g) == STD.sign(g) for g in (x, y, z))
    assert new.sign(w) != STD.sign(w)


def test_perturb_refuses_rank_one():
    Z1 = free_abelian(1)
    with pytest.raises(ValueError):
        perturb_biinvariant(OrderScheme.standard(Z1), [(1,)])


def test_repeated_perturbation_gives_distinct_schemes():
    ball = list(Ball.build(G1, 2))
    seen = [STD]
    s = STD
    for k in range(1, 5):
        s, w = perturb_biinvariant(s, ball[: 6 * k])
        assert s not in seen
        seen.append(s)


@pytest.mark.parametrize("G", acceptance_groups(), ids=lambda G: G.name)
def test_family_is_valid_and_distinct(G):
    fam = scheme_family(G, 20, seed=1)
    assert len(fam) == 20 and len(set(fam)) == 20
    assert all(s.is_valid() for s in fam)
    central = scheme_family(G, 20, seed=1, central=True)
    assert all(s.is_biinvariant() for s in central)


@pytest.mark.parametrize("G", [G1, W], ids=lambda G: G.name)
def test_order_axioms_on_ball(G):
    rng = random.Random(5)
    ball = list(Ball.build(G, 2))
    for _ in range(4):
        s = random_scheme(G, rng)
        pos = [g for g in ball if s.sign(g) > 0]
        for g in ball:
            assert s.sign(g) == -s.sign(G.inverse(g)) != 0
        for g in pos:
            for h in pos:
                assert s.sign(G.multiply(g, h)) > 0


def test_convex_levels_closed():
    ball = list(Ball.build(W, 2))
    s = scheme_family(W, 5, seed=2)[-1]
    for i in range(1, W.rank + 1):
        low = [g for g in ball if s.convex_jump(g).level <= i]
        for g in low:
            for h in low:
                gh = W.multiply(g, h)
                assert gh == W.identity or s.convex_jump(gh).level <= i
