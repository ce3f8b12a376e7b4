"""Exact integer polynomials and their floating complex mirror.

Coefficients are stored in ascending order (constant term first) everywhere,
including the comma-separated text format.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError, ResourceCapError

CYCLOTOMIC_CAP = 10_000
FACTOR_DEGREE_CAP = 24


def _strip(coeffs: Iterable[int]) -> tuple[int, ...]:
    out = [int(c) for c in coeffs]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out) if out else (0,)


@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial with arbitrary-precision integer coefficients.

    The zero polynomial is ``(0,)`` with degree 0; check :attr:`is_zero`.
    """

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int] = (0,)):
        object.__setattr__(self, "coeffs", _strip(coeffs))

    @classmethod
    def parse(cls, text: str) -> "IntPolynomial":
        return parse_polynomial(text)

    @classmethod
    def monomial(cls, n: int, c: int = 1) -> "IntPolynomial":
        return cls([0] * n + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    @property
    def is_zero(self) -> bool:
        return self.coeffs == (0,)

    @property
    def is_monic(self) -> bool:
        return self.coeffs[-1] == 1

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = math.gcd(g, c)
        return g

    def primitive(self) -> "IntPolynomial":
        """Primitive part with positive leading coefficient."""
        g = self.content()
        if g == 0:
            return self
        if self.leading < 0:
            g = -g
        return IntPolynomial(c // g for c in self.coeffs)

    def sign_normalized(self) -> "IntPolynomial":
        return -self if self.leading < 0 else self

    def to_complex(self) -> "ComplexPolynomial":
        return ComplexPolynomial.from_int(self)

    def __call__(self, x):
        if isinstance(x, (int, Fraction)):
            acc = 0
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        return evaluate(self, x)

    def __neg__(self):
        return IntPolynomial(-c for c in self.coeffs)

    def __add__(self, other):
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPolynomial(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if self.is_zero or other.is_zero:
            return IntPolynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise InputError("negative power of a polynomial")
        out = IntPolynomial([1])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __floordiv__(self, other):
        q = exact_divide(self, _coerce(other))
        if q is None:
            raise InputError(f"{other} does not divide {self} over the integers")
        return q

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"IntPolynomial({format_polynomial(self)!r})"


def _coerce(x) -> IntPolynomial:
    if isinstance(x, IntPolynomial):
        return x
    if isinstance(x, int):
        return IntPolynomial([x])
    raise TypeError(f"cannot use {type(x).__name__} as an integer polynomial")


@dataclass(frozen=True, eq=False)
class ComplexPolynomial:
    """Floating complex coefficients, ascending by degree."""

    coeffs: np.ndarray
    inexact: bool = field(default=False)

    def __init__(self, coeffs, inexact: bool = False):
        arr = np.asarray(coeffs, dtype=np.complex128).ravel()
        nz = np.flatnonzero(arr)
        arr = arr[: nz[-1] + 1] if nz.size else arr[:1]
        if arr.size == 0:
            arr = np.zeros(1, dtype=np.complex128)
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)
        object.__setattr__(self, "inexact", bool(inexact))

    @classmethod
    def from_int(cls, P: IntPolynomial) -> "ComplexPolynomial":
        floats = [float(c) for c in P.coeffs]
        inexact = any(int(f) != c for f, c in zip(floats, P.coeffs))
        return cls(floats, inexact=inexact)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def leading(self) -> complex:
        return complex(self.coeffs[-1])

    def __call__(self, z):
        return evaluate(self, z)

    def __repr__(self):
        return f"ComplexPolynomial({self.coeffs.tolist()!r})"


def as_complex(P) -> ComplexPolynomial:
    if isinstance(P, ComplexPolynomial):
        return P
    if isinstance(P, IntPolynomial):
        return ComplexPolynomial.from_int(P)
    return ComplexPolynomial(P)


def evaluate(P, z):
    """Horner evaluation; ``z`` may be a scalar or an ndarray."""
    c = as_complex(P).coeffs
    if np.ndim(z) == 0:
        z = complex(z)
        acc = 0j
        for a in c[::-1]:
            acc = acc * z + complex(a)
        return acc
    z = np.asarray(z, dtype=np.complex128)
    acc = np.zeros_like(z)
    for a in c[::-1]:
        acc = acc * z + a
    return acc


def compose(Q: IntPolynomial, V: IntPolynomial) -> IntPolynomial:
    """Exact coefficients of Q(V(z))."""
    if Q.is_zero or V.is_zero:
        raise InputError("compose needs nonzero polynomials")
    acc = IntPolynomial([0])
    for c in reversed(Q.coeffs):
        acc = acc * V + c
    return acc


def derivative(P):
    if isinstance(P, IntPolynomial):
        return IntPolynomial(k * c for k, c in enumerate(P.coeffs) if k) if P.degree else IntPolynomial()
    c = as_complex(P).coeffs
    if c.size == 1:
        return ComplexPolynomial([0.0])
    return ComplexPolynomial(c[1:] * np.arange(1, c.size), inexact=as_complex(P).inexact)


def exact_divide(A: IntPolynomial, B: IntPolynomial) -> IntPolynomial | None:
    """Quotient A / B if B divides A in Z[z], else None."""
    if B.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    if A.is_zero:
        return IntPolynomial()
    if A.degree < B.degree:
        return None
    rem = list(A.coeffs)
    b = B.coeffs
    lb = b[-1]
    q = [0] * (A.degree - B.degree + 1)
    for k in range(len(q) - 1, -1, -1):
        top = rem[k + B.degree]
        if top % lb:
            return None
        t = top // lb
        q[k] = t
        if t:
            for i, bi in enumerate(b):
                rem[k + i] -= t * bi
    if any(rem[: B.degree]):
        return None
    return IntPolynomial(q)


def divides(B: IntPolynomial, A: IntPolynomial) -> bool:
    return exact_divide(A, B) is not None


# -- rational helpers (ascending lists of Fractions) -------------------------


def _qtrim(a: list) -> list:
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _qdivmod(a: list, b: list) -> tuple[list, list]:
    a = _qtrim([Fraction(x) for x in a])
    b = _qtrim([Fraction(x) for x in b])
    if len(a) < len(b):
        return [Fraction(0)], a
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    for k in range(len(q) - 1, -1, -1):
        t = a[k + len(b) - 1] / b[-1]
        q[k] = t
        if t:
            for i, bi in enumerate(b):
                a[k + i] -= t * bi
    r = _qtrim(a[: len(b) - 1] or [Fraction(0)])
    return q, r


def _primitive_from_rational(a: list) -> IntPolynomial:
    a = _qtrim(list(a))
    den = 1
    for x in a:
        den = den * Fraction(x).denominator // math.gcd(den, Fraction(x).denominator)
    return IntPolynomial(int(x * den) for x in a).primitive()


def _qgcd(a: list, b: list) -> list:
    a = _qtrim([Fraction(x) for x in a])
    b = _qtrim([Fraction(x) for x in b])
    while not (len(b) == 1 and b[0] == 0):
        a, b = b, _qdivmod(a, b)[1]
    return [x / a[-1] for x in a]


def _qderiv(a: list) -> list:
    return [k * x for k, x in enumerate(a)][1:] or [Fraction(0)]


def poly_gcd(A: IntPolynomial, B: IntPolynomial) -> IntPolynomial:
    """Primitive gcd with positive leading coefficient (computed over Q)."""
    return _primitive_from_rational(_qgcd(A.coeffs, B.coeffs))


def squarefree_decomposition(P: IntPolynomial) -> list[tuple[IntPolynomial, int]]:
    """Yun's algorithm on the primitive part: P ~ prod f_i^i, f_i squarefree."""
    f = [Fraction(c) for c in P.primitive().coeffs]
    if len(f) == 1:
        return []
    df = _qderiv(f)
    a0 = _qgcd(f, df)
    b = _qdivmod(f, a0)[0]
    c = _qdivmod(df, a0)[0]
    d = _qtrim([x - y for x, y in itertools.zip_longest(c, _qderiv(b), fillvalue=0)])
    out = []
    i = 1
    while len(b) > 1:
        a = _qgcd(b, d)
        if len(a) > 1:
            out.append((_primitive_from_rational(a), i))
        b = _qdivmod(b, a)[0]
        c = _qdivmod(d, a)[0]
        d = _qtrim([x - y for x, y in itertools.zip_longest(c, _qderiv(b), fillvalue=0)])
        i += 1
    return out


# -- cyclotomic polynomials ---------------------------------------------------


def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _mobius(n: int) -> int:
    k, p = 0, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            k += 1
        p += 1
    if n > 1:
        k += 1
    return -1 if k % 2 else 1


def _divisors(n: int) -> list[int]:
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


@lru_cache(maxsize=1024)
def _cyclotomic(j: int) -> tuple[int, ...]:
    # Phi_j = prod_{d | j} (w^d - 1)^{mu(j/d)}; numerator factors first so
    # every division by a binomial is exact.
    num, den = [], []
    for d in _divisors(j):
        mu = _mobius(j // d)
        if mu == 1:
            num.append(d)
        elif mu == -1:
            den.append(d)
    acc = [1]
    for d in num:
        nxt = [0] * (len(acc) + d)
        for i, a in enumerate(acc):
            nxt[i + d] += a
            nxt[i] -= a
        acc = nxt
    for d in den:
        # divide by (w^d - 1): q_i = q_{i-d} - a_i, read from the low end
        n = len(acc) - 1 - d
        q = [0] * (n + 1)
        for i in range(n + 1):
            q[i] = (q[i - d] if i >= d else 0) - acc[i]
        acc = q
    return tuple(acc)


def cyclotomic(j: int, cap: int = CYCLOTOMIC_CAP) -> IntPolynomial:
    """The j-th cyclotomic polynomial (monic, degree phi(j))."""
    if not isinstance(j, (int, np.integer)) or j < 1:
        raise InputError("cyclotomic index must be a positive integer", j=j)
    if j > cap:
        raise ResourceCapError(f"cyclotomic index {j} exceeds cap {cap}", j=int(j), cap=cap)
    return IntPolynomial(_cyclotomic(int(j)))


# -- factorization over Z ------------------------------------------------------


def _conjugate_orbits(roots: np.ndarray) -> list[tuple[int, ...]]:
    idx_pos = [i for i, z in enumerate(roots) if z.imag > 1e-9 * max(1.0, abs(z))]
    idx_neg = [i for i, z in enumerate(roots) if z.imag < -1e-9 * max(1.0, abs(z))]
    idx_real = [i for i in range(len(roots)) if i not in idx_pos and i not in idx_neg]
    if len(idx_pos) != len(idx_neg):
        return [(i,) for i in range(len(roots))]
    orbits = [(i,) for i in idx_real]
    free = set(idx_neg)
    for i in idx_pos:
        j = min(free, key=lambda k: abs(roots[k] - roots[i].conjugate()))
        free.discard(j)
        orbits.append((i, j))
    return orbits


def _split_squarefree(f: IntPolynomial) -> list[IntPolynomial]:
    from .rootfinding import roots as find_roots

    if f.degree <= 1:
        return [f]
    zs = np.asarray(find_roots(f.to_complex()).roots)
    found = []
    lc = f.leading
    s = 1
    while s <= f.degree // 2:
        orbits = _conjugate_orbits(zs)
        hit = None
        for k in range(1, s + 1):
            for combo in itertools.combinations(range(len(orbits)), k):
                members = [i for o in combo for i in orbits[o]]
                if len(members) != s:
                    continue
                tr = lc * zs[members].sum()
                if abs(tr - round(tr.real)) > 1e-6 * (1.0 + abs(lc) * np.abs(zs[members]).sum()):
                    continue
                cand = lc * np.poly(zs[members])[::-1]
                g = IntPolynomial(int(round(c.real)) for c in cand)
                if g.degree != s:
                    continue
                g = g.primitive()
                q = exact_divide(f, g)
                if q is not None:
                    hit = (g, q, members)
                    break
            if hit:
                break
        if hit is None:
            s += 1
            continue
        g, f, members = hit
        found.append(g)
        zs = np.delete(zs, members)
        lc = f.leading
    found.append(f)
    return found


def factor(P: IntPolynomial, cap: int = FACTOR_DEGREE_CAP) -> list[tuple[IntPolynomial, int]]:
    """Factor over the integers: content, then primitive irreducibles with multiplicity.

    Candidate factors come from subsets of numerically computed roots whose
    scaled products round to integer polynomials; every candidate is
    confirmed by exact division, so the output product equals ``P`` exactly.
    """
    if P.is_zero:
        raise InputError("cannot factor the zero polynomial")
    if P.degree > cap:
        raise ResourceCapError(f"degree {P.degree} exceeds factor cap {cap}", degree=P.degree, cap=cap)
    out: list[tuple[IntPolynomial, int]] = []
    g = P.content() * (1 if P.leading > 0 else -1)
    if g != 1:
        out.append((IntPolynomial([g]), 1))
    f = P.primitive()
    k = next(i for i, c in enumerate(f.coeffs) if c)
    if k:
        out.append((IntPolynomial([0, 1]), k))
        f = IntPolynomial(f.coeffs[k:])
    if f.degree == 0:
        return out
    irreducibles = []
    for sqf, mult in squarefree_decomposition(f):
        for h in _split_squarefree(sqf):
            irreducibles.append((h, mult))
    irreducibles.sort(key=lambda t: (t[0].degree, t[0].coeffs, t[1]))
    return out + irreducibles


def is_irreducible(P: IntPolynomial, cap: int = FACTOR_DEGREE_CAP) -> bool:
    fs = factor(P, cap)
    nonconst = [(f, e) for f, e in fs if f.degree > 0]
    units = [f for f, _ in fs if f.degree == 0]
    return len(nonconst) == 1 and nonconst[0][1] == 1 and all(abs(u.coeffs[0]) == 1 for u in units)


def product_of_factors(factors: Sequence[tuple[IntPolynomial, int]]) -> IntPolynomial:
    acc = IntPolynomial([1])
    for f, e in factors:
        acc = acc * f**e
    return acc


# -- text format -----------------------------------------------------------------

_TERM = re.compile(r"([+-])?(\d+)?(\*)?(?:([a-z])(?:\^(\d+))?)?")


def parse_polynomial(text: str) -> IntPolynomial:
    """Parse ``"c0,c1,...,cn"`` or a sparse expression such as ``"z^2-2"``."""
    s = re.sub(r"\s+", "", str(text))
    if not s:
        raise InputError("empty polynomial text")
    if "," in s or re.fullmatch(r"[+-]?\d+", s):
        try:
            return IntPolynomial(int(tok) for tok in s.split(","))
        except ValueError:
            raise InputError(f"bad coefficient list {text!r}") from None
    coeffs: dict[int, int] = {}
    var = None
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        sign, num, star, v, power = m.groups()
        if m.end() == pos or (sign is None and pos > 0) or (num is None and v is None):
            raise InputError(f"cannot parse polynomial {text!r} at position {pos}")
        if star and (v is None or num is None):
            raise InputError(f"dangling '*' in {text!r}")
        if v is not None:
            if var is None:
                var = v
            elif v != var:
                raise InputError(f"mixed variables in {text!r}")
        c = int(num) if num is not None else 1
        if sign == "-":
            c = -c
        e = (int(power) if power is not None else 1) if v is not None else 0
        coeffs[e] = coeffs.get(e, 0) + c
        pos = m.end()
    n = max(coeffs)
    return IntPolynomial(coeffs.get(k, 0) for k in range(n + 1))


def format_polynomial(P: IntPolynomial, var: str = "z") -> str:
    """Sparse, descending form, e.g. ``2*z^3-z+1``."""
    if P.is_zero:
        return "0"
    parts = []
    for k in range(P.degree, -1, -1):
        c = P.coeffs[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if k == 0:
            body = str(a)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if a == 1 else f"{a}*{mono}"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += sign + body
    return out


LEHMER = IntPolynomial([1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])
