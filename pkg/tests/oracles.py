"""Independent oracles, written from the defining sums rather than from the implementation."""
import sympy


def symbolic_bound_matrix(q):
    """Expand the crossing sum and the level sum in b_i, b'_j and read off coefficients."""
    b = sympy.symbols(f"b1:{q}")
    bp = sympy.symbols(f"c1:{q}")
    B = lambda i: b[i - 1]
    Bp = lambda j: bp[j - 1]
    crossing = 0
    for i in range(1, q):
        for j in range(i + 1, q):
            crossing += (sympy.floor(sympy.Rational(j - i, 2)) + 1) * (i - 1) * B(i) * Bp(j)
    for j in range(1, q):
        for i in range(j + 1, q):
            crossing += (sympy.floor(sympy.Rational(i - j, 2)) + 1) * (q - 1 - i) * B(i) * Bp(j)
    delta = sum((i - 1) * (q - 1 - i) * B(i) for i in range(1, q))
    level = 0
    for j in range(1, q):
        if sympy.Rational(j) <= sympy.Rational(q, 2):
            level += (-delta + sum((k - 1) * B(k) for k in range(1, j + 1))) * Bp(j)
        else:
            level += (-delta + sum((q - 1 - k) * B(k) for k in range(j + 1, q))) * Bp(j)
    poly = sympy.Poly(sympy.expand(crossing + level), *b, *bp)
    return [[int(poly.coeff_monomial(B(i) * Bp(j))) for j in range(1, q)] for i in range(1, q)]
