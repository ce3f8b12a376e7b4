"""Exact integer linear algebra: Sylvester matrices and Bareiss determinants.

Sign convention: ``resultant(P, V) = det(sylvester(P, V)) = c_n^m * prod V(z_k)``
over the roots z_k of P, where c_n is P's leading coefficient and m = deg V.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DegenerateError, InputError
from .polynomials import IntPolynomial


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise InputError("entries length must equal rows * cols")

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_lists(self) -> list[list[int]]:
        return [list(self.entries[i * self.cols : (i + 1) * self.cols]) for i in range(self.rows)]


def sylvester(P: IntPolynomial, V: IntPolynomial) -> IntMatrix:
    """(n+m) x (n+m) Sylvester matrix: m shifted rows of P, then n shifted rows of V."""
    if P.is_zero or V.is_zero:
        raise InputError("sylvester needs nonzero polynomials")
    n, m = P.degree, V.degree
    if n + m == 0:
        raise DegenerateError("both polynomials are constants")
    size = n + m
    p_desc = P.coeffs[::-1]
    v_desc = V.coeffs[::-1]
    rows = []
    for i in range(m):
        rows.append([0] * i + list(p_desc) + [0] * (size - n - 1 - i))
    for i in range(n):
        rows.append([0] * i + list(v_desc) + [0] * (size - m - 1 - i))
    return IntMatrix(size, size, tuple(x for row in rows for x in row))


def bareiss_determinant(M: IntMatrix) -> int:
    """Fraction-free Gaussian elimination; every intermediate is an exact integer."""
    if M.rows != M.cols:
        raise InputError("determinant of a non-square matrix")
    n = M.rows
    if n == 0:
        return 1
    a = M.to_lists()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1]


def resultant(P: IntPolynomial, V: IntPolynomial) -> int:
    return bareiss_determinant(sylvester(P, V))


def level_resultant(P: IntPolynomial, V: IntPolynomial) -> IntPolynomial:
    """Q(w) = Res_z(P(z), w - V(z)) = c_n^m * prod_k (w - V(z_k)).

    Built by evaluating the integer resultant at w = 0..n and interpolating
    exactly over the rationals; the result is checked to be integral.
    """
    n = P.degree
    if n < 1 or V.degree < 1:
        raise InputError("level_resultant needs deg P >= 1 and deg V >= 1")
    xs = list(range(n + 1))
    ys = [resultant(P, IntPolynomial([x]) - V) for x in xs]
    # Newton divided differences, then expand to monomial coefficients
    dd = [Fraction(y) for y in ys]
    for level in range(1, n + 1):
        for i in range(n, level - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level])
    coeffs = [Fraction(0)] * (n + 1)
    basis = [Fraction(1)]
    for i in range(n + 1):
        for k, b in enumerate(basis):
            coeffs[k] += dd[i] * b
        nxt = [Fraction(0)] * (len(basis) + 1)
        for k, b in enumerate(basis):
            nxt[k + 1] += b
            nxt[k] -= xs[i] * b
        basis = nxt
    if any(c.denominator != 1 for c in coeffs):
        raise ArithmeticError("level resultant is not integral")
    return IntPolynomial(int(c) for c in coeffs)
