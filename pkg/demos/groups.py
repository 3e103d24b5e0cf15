"""Tour of the built-in groups: coordinates, products and central series."""

from fractions import Fraction

from nilord.registry import acceptance_groups, heisenberg


def main():
    G = heisenberg(1)
    x, y = G.generator(0), G.generator(1)
    print("in", G.name, "x*y =", G.format_element(G.multiply(x, y)))
    print("y*x =", G.format_element(G.multiply(y, x)))
    print("[x,y] =", G.format_element(G.commutator(x, y)))
    g = (1, 1, 0)
    print("log of", g, "=", tuple(str(c) for c in G.to_log(g)))
    root = G.power(x, Fraction(1, 2))
    print("x^(1/2) in the rational completion:", tuple(str(c) for c in root))
    print()
    for H in acceptance_groups():
        ucs = [v.dim for v in H.upper_central_series()]
        problems = H.verify()
        print(f"{H.name:20} rank {H.rank}  class {H.nilpotency_class}  "
              f"upper central dims {ucs}  abelianization rank {H.abelianization_rank()}  "
              f"{'consistent' if not problems else problems}")


if __name__ == "__main__":
    main()
