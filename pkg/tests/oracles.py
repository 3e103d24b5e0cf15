"""Reference computations that share no code with the package.

* Heisenberg groups as 3x3 unitriangular matrices over Fraction.
* Subgroup index through a finite congruence quotient.
* Partial cones by exhaustive search over all sign vectors.
"""

from fractions import Fraction
from itertools import product


# -- unitriangular matrices ---------------------------------------------------------


def mat_mul(a, b):
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))


def mat_id(n):
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def mat_pow(a, k):
    out = mat_id(len(a))
    base = a if k >= 0 else mat_inv_unipotent(a)
    for _ in range(abs(k)):
        out = mat_mul(out, base)
    return out


def mat_inv_unipotent(a):
    n = len(a)
    nil = tuple(tuple(a[i][j] - (i == j) for j in range(n)) for i in range(n))
    out, term = mat_id(n), mat_id(n)
    for _ in range(n):
        term = mat_mul(term, tuple(tuple(-x for x in row) for row in nil))
        out = tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(out, term))
    return out


def mat_log_unipotent(a):
    n = len(a)
    nil = tuple(tuple(a[i][j] - (i == j) for j in range(n)) for i in range(n))
    out = tuple(tuple(Fraction(0) for _ in range(n)) for _ in range(n))
    term = mat_id(n)
    for k in range(1, n):
        term = mat_mul(term, nil)
        c = Fraction((-1) ** (k + 1), k)
        out = tuple(tuple(x + c * y for x, y in zip(r, s)) for r, s in zip(out, term))
    return out


def heis_matrix(g, r=1):
    """``x^a y^b z^c`` in ``G_r`` as a matrix.

    ``x = I + E12``, ``y = I + E23``, ``z = I + E13 / r``, so that
    ``x^-1 y^-1 x y = I + E13 = z^r``.
    """
    a, b, c = (Fraction(t) for t in g)
    x = ((1, a, 0), (0, 1, 0), (0, 0, 1))
    y = ((1, 0, 0), (0, 1, b), (0, 0, 1))
    z = ((1, 0, c / r), (0, 1, 0), (0, 0, 1))
    to_f = lambda m: tuple(tuple(Fraction(v) for v in row) for row in m)
    return mat_mul(mat_mul(to_f(x), to_f(y)), to_f(z))


def heis_from_matrix(m, r=1):
    """Normal form ``(a, b, c)`` of a unitriangular matrix: ``m = x^a y^b z^c``."""
    a, b = m[0][1], m[1][2]
    c = (m[0][2] - a * b) * r
    return (a, b, c)


def heis_multiply(g, h, r=1):
    return heis_from_matrix(mat_mul(heis_matrix(g, r), heis_matrix(h, r)), r)


def heis_log(g, r=1):
    """Log coordinates w.r.t. ``X = E12``, ``Y = E23``, ``Z = E13 / r``."""
    lg = mat_log_unipotent(heis_matrix(g, r))
    return (lg[0][1], lg[1][2], lg[0][2] * r)


# -- finite-quotient index ------------------------------------------------------------


def heis_index_mod(gens, m):
    """``[G_1 : H]`` for ``H = <gens>``, assuming ``H`` contains ``x^m, y^m, z^m``.

    ``Gamma(m) = {(a, b, c) : all = 0 mod m}`` is generated by those powers
    and is normal, so the index equals ``m^3 / |image of H in G/Gamma(m)|``.
    The quotient is modelled by matrices ``[[1, a, c + ab], [0, 1, b], [0, 0, 1]]`` mod ``m``.
    """
    def to_q(g):
        a, b, c = g
        return (a % m, b % m, (c + a * b) % m)

    def mul(p, q):
        return ((p[0] + q[0]) % m, (p[1] + q[1]) % m, (p[2] + q[2] + p[0] * q[1]) % m)

    seen = {(0, 0, 0)}
    frontier = [(0, 0, 0)]
    steps = [to_q(g) for g in gens]
    while frontier:
        nxt = []
        for p in frontier:
            for s in steps:
                q = mul(p, s)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return m ** 3 // len(seen)


def lattice_index_det(rows):
    """``|det|`` of an integer square matrix by cofactor expansion."""
    n = len(rows)
    if n == 1:
        return abs(rows[0][0])
    total = 0
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        total += (-1) ** j * rows[0][j] * _det(minor)
    return abs(total)


def _det(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    return sum((-1) ** j * rows[0][j] * _det([r[:j] + r[j + 1:] for r in rows[1:]]) for j in range(n))


# -- exhaustive cones ---------------------------------------------------------------


def brute_force_cones(elements, multiply, inverse):
    """All sign vectors on ``elements`` that are antisymmetric and closed inside the set."""
    index = {g: i for i, g in enumerate(elements)}
    inv = [index.get(inverse(g)) for g in elements]
    reps = [i for i in range(len(elements)) if inv[i] is None or inv[i] >= i]
    triples = []
    for i, g in enumerate(elements):
        for j, h in enumerate(elements):
            k = index.get(multiply(g, h))
            if k is not None:
                triples.append((i, j, k))
    found = []
    for choice in product((1, -1), repeat=len(reps)):
        signs = [0] * len(elements)
        for i, s in zip(reps, choice):
            signs[i] = s
            if inv[i] is not None and inv[i] != i:
                signs[inv[i]] = -s
        if all(not (signs[i] > 0 and signs[j] > 0 and signs[k] < 0) for i, j, k in triples):
            found.append(tuple(signs))
    return found
