"""Brute-force partial cones on word balls, cross-checked against flag orders."""

from nilord.oracle import CapExceeded, crosscheck, enumerate_cones
from nilord.order import coordinate_schemes, scheme_family
from nilord.registry import free_abelian, heisenberg


def main():
    for G, radius in [(free_abelian(1), 1), (free_abelian(2), 1), (free_abelian(2), 2),
                      (heisenberg(1), 1), (heisenberg(1), 2)]:
        cones = enumerate_cones(G, radius)
        print(f"{G.name:13} radius {radius}: ball of {len(cones[0].ball):2}, {len(cones):3} consistent sign patterns")

    G = heisenberg(1)
    print("\nradius-1 cones of", G.name)
    for cone in enumerate_cones(G, 1):
        print("  ", cone.format())

    Z2 = free_abelian(2)
    rep = crosscheck(Z2, 2, coordinate_schemes(Z2, reversals="all"))
    print("\nZ^2 radius 2, eight lexicographic orders:", rep)
    rep = crosscheck(G, 2, scheme_family(G, 30, seed=1))
    print("heisenberg:1 radius 2, thirty flag orders:", rep)

    try:
        enumerate_cones(G, 3)
    except CapExceeded as exc:
        print("\nradius 3 refused:", exc)


if __name__ == "__main__":
    main()
