"""Commensurations acting on orders: kernel, faithfulness, and the central certificate."""

from nilord.comm import (act_on_order, bo_trivial_certificate, faithfulness_witness, from_images, is_inner,
                         tau, validate_comm)
from nilord.order import scheme_family
from nilord.registry import free_abelian, heisenberg, class3_example


def main():
    Z2 = free_abelian(2)
    t = tau(Z2, 2, 3)
    fixed = all(act_on_order(t, s) == s for s in scheme_family(Z2, 20))
    print("tau^(2/3) on Z^2 fixes all 20 sample orders:", fixed)
    print("faithfulness_witness(tau^(2/3)):", faithfulness_witness(t))

    shear = validate_comm([[1, 1], [0, 1]], Z2)
    s, w = faithfulness_witness(shear)
    print("the shear [[1,1],[0,1]] moves the order")
    print(s.describe())
    print(f"witness {w}: sign {s.sign(w):+d} -> {act_on_order(shear, s).sign(w):+d}")
    print()

    for r in (1, 2, 3):
        G = heisenberg(r)
        alpha = from_images(G, {0: (1, 0, 1)})  # x -> x z
        inner = is_inner(alpha)
        conj = inner if isinstance(inner, str) else G.format_element(inner)
        print(f"{G.name}: x -> x z  inner: {conj:6}  certificate: {bool(bo_trivial_certificate(alpha))}")
    W = class3_example()
    for r in (1, 2):
        alpha = from_images(W, {1: (0, 1, 0, r)})
        cert = bo_trivial_certificate(alpha)
        print(f"{W.name}: x -> x z^{r}  certificate: {bool(cert)}")
        for reason in cert.reasons:
            print("   ", reason)

    G1 = heisenberg(1)
    swap = from_images(G1, {0: (0, 1, 0), 1: (1, 0, 0), 2: (0, 0, -1)})
    print("swap x <-> y certificate:", bool(bo_trivial_certificate(swap)))
    s, w = faithfulness_witness(swap)
    print(f"swap witness {G1.format_element(w)}: {s.sign(w):+d} -> {act_on_order(swap, s).sign(w):+d}")


if __name__ == "__main__":
    main()
