import math

import numpy as np
import pytest
from hypothesis import given

import oracles
from strategies import int_polys
from lemheights.errors import DegenerateError, InputError
from lemheights.exact import IntMatrix, bareiss_determinant, level_resultant, resultant, sylvester
from lemheights.polynomials import IntPolynomial, parse_polynomial
from lemheights.rootfinding import roots

P = parse_polynomial


def test_resultant_examples():
    assert resultant(P("z-2"), P("z^2-1")) == 3
    assert resultant(P("z^2-1"), P("2*z")) == -4


def test_resultant_frozen(frozen):
    for case in frozen["resultant"]:
        assert resultant(IntPolynomial(case["P"]), IntPolynomial(case["V"])) == case["res"]


@given(int_polys(max_degree=5, bound=6, min_degree=1), int_polys(max_degree=4, bound=6, min_degree=1))
def test_resultant_matches_sympy(A, B):
    assert resultant(A, B) == oracles.sym_resultant(A.coeffs, B.coeffs)


@given(
    int_polys(max_degree=3, bound=5, min_degree=1),
    int_polys(max_degree=3, bound=5, min_degree=1),
    int_polys(max_degree=3, bound=5, min_degree=1),
)
def test_resultant_multiplicative(A, B, V):
    assert resultant(A * B, V) == resultant(A, V) * resultant(B, V)


@given(int_polys(max_degree=4, bound=5, min_degree=1), int_polys(max_degree=3, bound=5, min_degree=1))
def test_resultant_root_product(A, V):
    # Res(A, V) = c_n^m prod V(z_k)
    zs = roots(A).roots
    approx = A.leading ** V.degree * np.prod(V.to_complex()(zs))
    exact = resultant(A, V)
    assert abs(approx - exact) <= 1e-6 * max(1.0, abs(exact))


def test_sylvester_shape_and_rows():
    S = sylvester(P("z^2-1"), P("2*z"))
    assert (S.rows, S.cols) == (3, 3)
    assert S.to_lists() == [[1, 0, -1], [2, 0, 0], [0, 2, 0]]


def test_sylvester_rejects_degenerate():
    with pytest.raises(InputError):
        sylvester(IntPolynomial(), P("z"))
    with pytest.raises(DegenerateError):
        sylvester(P("3"), P("5"))


def test_constant_against_polynomial():
    assert resultant(P("3"), P("z^2+1")) == 9


@given(int_polys(max_degree=4, bound=9, min_degree=1), int_polys(max_degree=4, bound=9, min_degree=1))
def test_bareiss_matches_float_determinant(A, B):
    S = sylvester(A, B)
    det_f = np.linalg.det(np.array(S.to_lists(), dtype=float))
    d = bareiss_determinant(S)
    assert abs(det_f - d) <= 1e-6 * max(1.0, abs(d))


def test_bareiss_with_pivoting():
    M = IntMatrix(3, 3, (0, 1, 2, 3, 4, 5, 6, 7, 9))
    assert bareiss_determinant(M) == -3
    assert bareiss_determinant(IntMatrix(2, 2, (1, 2, 2, 4))) == 0
    with pytest.raises(InputError):
        bareiss_determinant(IntMatrix(2, 3, (1,) * 6))


def test_level_resultant_example():
    # z - 2 over V = z^2 - 1: the only level value is V(2) = 3
    assert level_resultant(P("z-2"), P("z^2-1")) == P("w-3")
    # Q(0) = Res(P, -V) = (-1)^(nm) Res(P, V)
    Q = level_resultant(P("z^2-3"), P("z^2-1"))
    assert Q == P("w^2-4*w+4")


@given(int_polys(max_degree=4, bound=4, min_degree=1), int_polys(max_degree=3, bound=4, min_degree=1))
def test_level_resultant_is_integral_and_matches_roots(A, V):
    Q = level_resultant(A, V)
    assert Q.degree == A.degree
    assert Q.leading == A.leading ** V.degree
    vals = np.sort_complex(V.to_complex()(roots(A).roots))
    if Q.degree >= 1:
        wq = np.sort_complex(roots(Q).roots)
        scale = max(1.0, float(np.max(np.abs(vals))))
        # repeated roots are only accurate to sqrt(eps); compare the symmetric functions instead
        poly_from_vals = np.poly(vals)[::-1] * Q.leading
        assert np.allclose(poly_from_vals, Q.coeffs, atol=1e-6 * scale ** A.degree * abs(Q.leading), rtol=1e-6)
        assert wq.shape == vals.shape


def test_level_resultant_rejects_constants():
    with pytest.raises(InputError):
        level_resultant(P("5"), P("z"))
    with pytest.raises(InputError):
        level_resultant(P("z"), P("5"))


def test_resultant_sign_convention():
    # det Syl(P, V) = c_n^m prod V(z_k); swapping arguments costs (-1)^(nm)
    A, V = P("2*z^3-z+4"), P("z^2+3*z-1")
    assert resultant(V, A) == (-1) ** (A.degree * V.degree) * resultant(A, V)
    assert math.copysign(1, resultant(A, V)) == math.copysign(1, oracles.sym_resultant(A.coeffs, V.coeffs))
