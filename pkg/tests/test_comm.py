import itertools
from fractions import Fraction

import pytest

from nilord import linalg as la
from nilord.comm import (FIXES_ALL, OUTER, NotACommensuration, NotAnAutomorphism, act_on_order, apply,
                         bo_trivial_certificate, compose, conjugation_matrix, equivalent,
                         faithfulness_witness, from_images, identity, in_domain, invert, is_inner, tau,
                         validate_comm)
from nilord.oracle import Ball
from nilord.order import OrderScheme, coordinate_schemes, perturb_biinvariant, scheme_family
from nilord.registry import free_abelian, heisenberg, class3_example

Z2 = free_abelian(2)
Z3 = free_abelian(3)
G1 = heisenberg(1)
W = class3_example()


def heis_automorphisms(G):
    """Automorphisms of ``G_r`` from generator images, keyed by a short label."""
    r = G.brackets[(0, 1)][2]
    return {
        "x->xz": from_images(G, {0: (1, 0, 1)}),
        "swap": from_images(G, {0: (0, 1, 0), 1: (1, 0, 0), 2: (0, 0, -1)}),
        "x->xy": from_images(G, {0: (1, 1, 0)}),
        "x->x^-1": from_images(G, {0: (-1, 0, 0), 2: (0, 0, -1)}),
        "y->yx": from_images(G, {1: G.multiply((0, 1, 0), (1, 0, 0))}),
        "rotate": from_images(G, {0: (0, 1, 0), 1: (-1, 0, 0)}),
        "invert-both": from_images(G, {0: (-1, 0, 0), 1: (0, -1, 0)}),
    } if r == 1 else {}


def test_validate_examples():
    assert validate_comm(la.identity(3), G1) == identity(G1)
    assert validate_comm([[2, 0], [0, 2]], Z2) == tau(Z2, 2)
    with pytest.raises(NotACommensuration, match="not a homomorphism"):
        validate_comm([[2, 0, 0], [0, 1, 0], [0, 0, 1]], G1)
    # diag(1, 1, 5) also breaks the bracket: A[e1, e2] = 5 e3 but [A e1, A e2] = e3
    with pytest.raises(NotACommensuration, match="not a homomorphism"):
        validate_comm([[1, 0, 0], [0, 1, 0], [0, 0, 5]], G1)
    with pytest.raises(NotACommensuration, match="not invertible"):
        validate_comm([[1, 1], [1, 1]], Z2)


def test_composition_and_inverse():
    a = from_images(G1, {0: (1, 1, 0)})
    assert compose(a, invert(a)) == identity(G1)
    assert compose(tau(Z2, 2), tau(Z2, 3)) == tau(Z2, 6)
    assert equivalent(tau(Z2, 2, 3), validate_comm([[Fraction(2, 3), 0], [0, Fraction(2, 3)]], Z2))
    with pytest.raises(ValueError):
        tau(G1, 2)
    with pytest.raises(ValueError):
        tau(Z2, 2, 4)


def test_composition_order():
    # alpha then beta: x -> xy, then y -> yx
    a, b = from_images(G1, {0: (1, 1, 0)}), from_images(G1, {1: (1, 1, -1)})
    ab = compose(a, b)
    for g in [(1, 0, 0), (0, 1, 0), (2, -1, 3)]:
        assert apply(ab, g) == apply(b, apply(a, g))


def test_apply_examples():
    g = (2, -1, 3)
    assert apply(identity(G1), g) == g
    G2 = heisenberg(2)
    alpha = from_images(G2, {0: (1, 0, 1)})
    assert apply(alpha, (1, 0, 0)) == (1, 0, 1)
    half = tau(Z2, 1, 2)
    assert apply(half, (1, 0)) == (Fraction(1, 2), 0) and not in_domain(half, (1, 0))
    assert apply(half, (2, 0)) == (1, 0) and in_domain(half, (2, 0))


def test_act_examples():
    lex = OrderScheme.standard(Z2)
    assert act_on_order(identity(Z2), lex) == lex
    swap = validate_comm([[0, 1], [1, 0]], Z2)
    swapped = act_on_order(swap, lex)
    assert swapped != lex
    assert swapped == OrderScheme.from_basis(Z2, [(1, 0), (0, 1)])


@pytest.mark.parametrize("G", [Z2, Z3])
def test_tau_fixes_every_scheme(G):
    for p, q in [(1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2)]:
        t = tau(G, p, q)
        for s in scheme_family(G, 20, seed=0):
            assert act_on_order(t, s) == s


def comm_cases():
    cases = [(G1, a) for a in heis_automorphisms(G1).values()]
    cases.append((Z2, validate_comm([[1, 1], [0, 1]], Z2)))
    cases.append((Z2, tau(Z2, 3, 2)))
    cases.append((W, from_images(W, {1: (0, 1, 0, 1)})))
    cases.append((heisenberg(2), from_images(heisenberg(2), {0: (1, 0, 1)})))
    return cases


@pytest.mark.parametrize("G, alpha", comm_cases(), ids=lambda v: getattr(v, "name", ""))
def test_action_matches_element_map(G, alpha):
    ball = list(Ball.build(G, 2))
    e = G.identity
    for s in scheme_family(G, 8, seed=2):
        moved = act_on_order(alpha, s)
        assert moved.is_valid()
        for g in ball:
            img = apply(alpha, g)
            if img.is_integral():
                assert moved.compare(e, g) == s.compare(e, img.to_element())


def test_action_laws():
    autos = list(heis_automorphisms(G1).values())
    fam = scheme_family(G1, 10, seed=6)
    for a, b in itertools.product(autos[:4], repeat=2):
        for s in fam:
            assert act_on_order(compose(a, b), s) == act_on_order(a, act_on_order(b, s))
    for s in fam:
        assert act_on_order(identity(G1), s) == s


def test_faithfulness_on_abelian_groups():
    assert faithfulness_witness(tau(Z2, 2)) == FIXES_ALL
    shear = validate_comm([[1, 1], [0, 1]], Z2)
    s, w = faithfulness_witness(shear)
    assert s.is_valid()
    assert s.compare(Z2.identity, w) != act_on_order(shear, s).compare(Z2.identity, w)
    minus = validate_comm([[-1, 0], [0, -1]], Z2)
    assert faithfulness_witness(minus) != FIXES_ALL
    with pytest.raises(ValueError):
        faithfulness_witness(identity(Z2))


@pytest.mark.parametrize("label", list(heis_automorphisms(G1)))
def test_faithfulness_on_heisenberg(label):
    alpha = heis_automorphisms(G1)[label]
    res = faithfulness_witness(alpha)
    assert res != FIXES_ALL
    s, w = res
    moved = act_on_order(alpha, s)
    assert s.is_valid() and moved.is_valid()
    assert s.compare(G1.identity, w) != moved.compare(G1.identity, w)


def test_faithfulness_is_deterministic():
    alpha = heis_automorphisms(G1)["x->xy"]
    assert faithfulness_witness(alpha, seed=4) == faithfulness_witness(alpha, seed=4)


def test_inner_automorphisms():
    assert is_inner(identity(G1)) == (0, 0, 0)
    assert is_inner(from_images(G1, {0: (1, 0, 1)})) == (0, 1, 0)
    for r in (2, 3):
        G = heisenberg(r)
        assert is_inner(from_images(G, {0: (1, 0, 1)})) == OUTER
    assert is_inner(heis_automorphisms(G1)["swap"]) == OUTER


def test_inner_round_trip():
    for g in [(1, 0, 0), (0, 1, 0), (2, -3, 5)]:
        a = validate_comm(conjugation_matrix(G1, g), G1)
        h = is_inner(a)
        assert h != OUTER
        assert conjugation_matrix(G1, h) == a.matrix
        for k in [(1, 0, 0), (0, 1, 0), (1, 1, 1)]:
            assert apply(a, k) == G1.conjugate(k, h)
    for g in [(1, 0, 0, 0), (0, 1, 0, 0), (2, -1, 1, 3)]:
        a = validate_comm(conjugation_matrix(W, g), W)
        h = is_inner(a)
        assert conjugation_matrix(W, h) == a.matrix


def test_is_inner_needs_an_automorphism():
    with pytest.raises(NotAnAutomorphism):
        is_inner(tau(Z2, 2))


@pytest.mark.parametrize("r", [1, 2, 3])
def test_bo_certificate_heisenberg(r):
    G = heisenberg(r)
    alpha = from_images(G, {0: (1, 0, 1)})
    cert = bo_trivial_certificate(alpha)
    assert cert.ok and len(cert.reasons) == 3


@pytest.mark.parametrize("r", [1, 2])
def test_bo_certificate_class3(r):
    alpha = from_images(W, {1: (0, 1, 0, r)})
    assert bo_trivial_certificate(alpha).ok


def test_bo_certificate_fails_for_swap():
    cert = bo_trivial_certificate(heis_automorphisms(G1)["swap"])
    assert not cert.ok
    assert any(r.startswith("(ii)") and r.endswith("fails") for r in cert.reasons)


@pytest.mark.parametrize("G, alpha", [
    (heisenberg(1), from_images(heisenberg(1), {0: (1, 0, 1)})),
    (heisenberg(2), from_images(heisenberg(2), {0: (1, 0, 1)})),
    (W, from_images(W, {1: (0, 1, 0, 2)})),
], ids=["G1", "G2", "class3"])
def test_bo_certificate_soundness(G, alpha):
    family = scheme_family(G, 20, seed=9, central=True)
    ball = list(Ball.build(G, 1))
    perturbed = [perturb_biinvariant(s, ball)[0] for s in family[:6]]
    for s in family + perturbed:
        assert s.is_biinvariant()
        assert act_on_order(alpha, s) == s
