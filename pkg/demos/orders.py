"""Orders from flags: comparison, jumps, and perturbing a bi-invariant order."""

from nilord.order import OrderScheme, perturb_biinvariant
from nilord.registry import heisenberg
from nilord.textio import emit_order


def main():
    G = heisenberg(1)
    std = OrderScheme.standard(G)
    print(std.describe())
    for g, h in [((0, 0, 1), (0, 1, 0)), ((0, 1, 0), (1, -5, 0)), ((1, 0, 0), (1, 0, 7))]:
        print(f"compare {G.format_element(g)} vs {G.format_element(h)}: {std.compare(g, h):+d}")
    jump = std.convex_jump((0, 2, 5))
    print("y^2 z^5 sits on level", jump.level, "central:", std.is_central_level(jump.level))
    print("bi-invariant:", bool(std.is_biinvariant()))

    # keep x, y and z positive but change the order somewhere else
    agree = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (3, -2, 0)]
    new, w = perturb_biinvariant(std, agree)
    print("perturbed:", emit_order(new, G.name, inline=True))
    print("agrees on", [G.format_element(g) for g in agree], ":",
          all(new.sign(g) == std.sign(g) for g in agree))
    print(f"witness {G.format_element(w)}: sign {std.sign(w):+d} before, {new.sign(w):+d} after")

    left_only = OrderScheme.from_basis(G, [(0, 1, 0), (0, 0, 1), (1, 0, 0)])
    print("flag y, z, x is valid:", left_only.is_valid(), "bi-invariant:", bool(left_only.is_biinvariant()))


if __name__ == "__main__":
    main()
