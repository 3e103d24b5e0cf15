"""Orders on a finite-index subgroup and on the whole group determine each other."""

from nilord.lattice import subgroup
from nilord.order import restrict_to_subgroup, scheme_family, sign_from_subgroup, transport_scheme
from nilord.registry import heisenberg, sublattices


def main():
    G = heisenberg(1)
    for index in (4, 8):
        for gens in sublattices(G, index):
            H = subgroup(G, gens)
            family = scheme_family(G, 20, seed=0)
            back = sum(transport_scheme(restrict_to_subgroup(s, H), H.embed, G) == s for s in family)
            print(f"H = <{', '.join(G.format_element(g) for g in gens)}>  index {H.index}: "
                  f"{back}/{len(family)} orders recovered from their restriction")

    H = subgroup(G, [(2, 0, 0), (0, 2, 0), (0, 0, 1)])
    s = scheme_family(G, 20, seed=0)[7]
    r = restrict_to_subgroup(s, H)
    g = (1, -1, 0)
    print(f"sign of {G.format_element(g)} read off a power inside H: {sign_from_subgroup(r, H, g):+d}"
          f" (direct: {s.sign(g):+d})")


if __name__ == "__main__":
    main()
