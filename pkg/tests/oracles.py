"""Independent reference implementations used only by the tests.

None of these share code with the package: roots come from mpmath at 50
digits, exact algebra from sympy, and curve points from explicit radicals.
"""

from __future__ import annotations

import mpmath
import sympy

DPS = 50
z_sym = sympy.Symbol("z")


def to_sympy(coeffs):
    """Ascending integer coefficients -> sympy Poly in z."""
    return sympy.Poly(list(reversed([int(c) for c in coeffs])), z_sym)


def from_sympy(poly) -> tuple[int, ...]:
    c = [int(x) for x in reversed(sympy.Poly(poly, z_sym).all_coeffs())]
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return tuple(c)


def mp_roots(coeffs):
    """All roots (with multiplicity) of an ascending coefficient list, at DPS digits."""
    c = [int(x) for x in coeffs]
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    if len(c) == 1:
        return []
    # strip exact zero roots: mpmath handles them but this keeps it well conditioned
    zeros = 0
    while c[0] == 0:
        c.pop(0)
        zeros += 1
    rs = []
    if len(c) > 1:
        # repeated roots stall polyroots; split them off with sympy's squarefree factorization
        _, parts = sympy.sqf_list(to_sympy(c))
        with mpmath.workdps(DPS):
            for f, e in parts:
                fc = [int(x) for x in sympy.Poly(f, z_sym).all_coeffs()]
                if len(fc) > 1:
                    rs += list(mpmath.polyroots(fc, maxsteps=500, extraprec=400)) * e
    return [mpmath.mpc(0)] * zeros + rs


def mp_poly_eval(coeffs, z):
    acc = mpmath.mpc(0)
    for c in reversed(list(coeffs)):
        acc = acc * z + c
    return acc


def mp_mahler(P_coeffs, V_coeffs, r) -> mpmath.mpf:
    """|c_n| |a_m|^(-n/m) (prod max(r, |V(z_k)|))^(1/m), evaluated at DPS digits."""
    with mpmath.workdps(DPS):
        P = [int(x) for x in P_coeffs]
        while len(P) > 1 and P[-1] == 0:
            P.pop()
        V = [mpmath.mpf(x) if not isinstance(x, complex) else mpmath.mpc(x) for x in V_coeffs]
        m = len(V) - 1
        n = len(P) - 1
        r = mpmath.mpf(sympy.Rational(r).p) / sympy.Rational(r).q
        out = mpmath.mpf(abs(P[-1])) * abs(V[-1]) ** (mpmath.mpf(-n) / m)
        prod = mpmath.mpf(1)
        for zk in mp_roots(P):
            prod *= max(r, abs(mp_poly_eval(V, zk)))
        return out * prod ** (mpmath.mpf(1) / m)


def mp_classical_mahler(coeffs) -> mpmath.mpf:
    """|c_n| prod max(1, |z_k|)."""
    c = [int(x) for x in coeffs]
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    with mpmath.workdps(DPS):
        out = mpmath.mpf(abs(c[-1]))
        for zk in mp_roots(c):
            out *= max(1, abs(zk))
        return out


def sym_resultant(P_coeffs, V_coeffs) -> int:
    """det of sympy's classical Sylvester matrix.

    ``sympy.resultant`` itself follows a subresultant sign convention that
    differs from det(Sylvester) by (-1)^(nm) when deg P < deg V.
    """
    from sympy.polys.subresultants_qq_zz import sylvester

    return int(sylvester(to_sympy(P_coeffs).as_expr(), to_sympy(V_coeffs).as_expr(), z_sym, 1).det())


def cyclotomic_by_division(j: int) -> tuple[int, ...]:
    """(z^j - 1) divided by every Phi_d with d | j, d < j (exact sympy division)."""
    num = sympy.Poly(z_sym**j - 1, z_sym)
    for d in sympy.divisors(j):
        if d < j:
            q, rem = sympy.div(num, sympy.Poly(list(reversed(cyclotomic_by_division(d))), z_sym))
            assert rem.is_zero
            num = q
    return from_sympy(num)


def sym_factor(coeffs):
    """sympy factorization: (content, [(ascending coeffs, multiplicity)])."""
    content, facs = sympy.factor_list(to_sympy(coeffs))
    out = []
    for f, e in facs:
        fc = from_sympy(f)
        if fc[-1] < 0:
            fc = tuple(-x for x in fc)
            content = -content if e % 2 else content
        out.append((fc, e))
    return int(content), sorted(out, key=lambda t: (len(t[0]), t[0]))


def sym_is_irreducible(coeffs) -> bool:
    content, facs = sym_factor(coeffs)
    return abs(content) == 1 and len(facs) == 1 and facs[0][1] == 1


def sym_compose(Q_coeffs, V_coeffs) -> tuple[int, ...]:
    Q = to_sympy(Q_coeffs).as_expr()
    V = to_sympy(V_coeffs).as_expr()
    return from_sympy(sympy.expand(Q.subs(z_sym, V)))


def unit_circle_lp(coeffs, p) -> mpmath.mpf:
    """(1/2pi int |P(e^it)|^p dt)^(1/p) by adaptive mpmath quadrature."""
    with mpmath.workdps(30):
        f = lambda t: abs(mp_poly_eval(coeffs, mpmath.expj(t))) ** p  # noqa: E731
        val = mpmath.quad(f, mpmath.linspace(0, 2 * mpmath.pi, 9)) / (2 * mpmath.pi)
        return val ** (mpmath.mpf(1) / p)


def bernoulli_branches(r, theta):
    """The two solutions of z^2 - 1 = r e^(i theta) as explicit square roots."""
    with mpmath.workdps(30):
        s = mpmath.sqrt(1 + r * mpmath.expj(theta))
        return [s, -s]
