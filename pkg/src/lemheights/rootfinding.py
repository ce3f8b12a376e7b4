"""Simultaneous complex root finding (Aberth-Ehrlich) with residual-based radii."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _backend
from ._pykernels import aberth_scalar
from .errors import ConvergenceError, InputError
from .polynomials import ComplexPolynomial, as_complex

DEFAULT_TOL = 1e-14
DEFAULT_MAXITER = 200
EPS = np.finfo(float).eps


@dataclass(frozen=True, eq=False)
class RootSet:
    """Roots listed with multiplicity, each with an error radius and residual |P(root)|."""

    roots: np.ndarray
    radii: np.ndarray
    residuals: np.ndarray
    clusters: tuple[tuple[int, ...], ...] = ()
    iterations: int = 0
    extended: bool = False
    bounds: np.ndarray = field(default=None, repr=False)

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)


def initial_guesses(coeffs: np.ndarray) -> np.ndarray:
    """Circular starts scaled to the geometric mean of the root moduli.

    Exact zero roots (leading zero coefficients) get slots fixed at 0.
    """
    c = np.atleast_2d(np.asarray(coeffs, dtype=np.complex128))
    N, n1 = c.shape
    n = n1 - 1
    nz = c != 0
    k0 = np.where(nz.any(axis=1), nz.argmax(axis=1), n)
    k0 = np.minimum(k0, n)
    deg = np.maximum(n - k0, 1)
    low = np.abs(c[np.arange(N), np.minimum(k0, n)])
    R = (low / np.abs(c[:, n])) ** (1.0 / deg)
    R = np.where(np.isfinite(R) & (R > 0), R, 1.0)
    j = np.arange(n)[None, :] - k0[:, None]
    ang = 2 * np.pi * j / deg[:, None] + 0.4
    z = R[:, None] * np.exp(1j * ang)
    z[j < 0] = 0
    return np.ascontiguousarray(z)


def _rounding_bound(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Horner evaluation error scale: eps * sum |c_k| |z|^k."""
    az = np.abs(z)
    acc = np.zeros_like(az)
    for a in np.abs(c)[::-1]:
        acc = acc * az + a
    return EPS * acc


def extended_roots(coeffs, z, maxiter: int = DEFAULT_MAXITER, digits: int = 32) -> np.ndarray | None:
    """Re-run Aberth from the starts ``z`` in ``digits``-digit arithmetic (mpmath).

    Coefficients are taken as exact; integer coefficients below 2**53 are.
    Returns None when the iteration hits ``maxiter``.
    """
    import mpmath

    with mpmath.workdps(digits):
        cc = [mpmath.mpc(complex(a)) for a in coeffs]
        zz = [mpmath.mpc(complex(v)) for v in z]
        tol = mpmath.mpf(10) ** (4 - digits)
        eps = mpmath.mpf(2) ** -int(3.3 * digits)
        if aberth_scalar(cc, zz, tol, maxiter, eps=eps) < 0:
            return None
        return np.array([complex(v) for v in zz], dtype=np.complex128)


def _certify(c: np.ndarray, z: np.ndarray, iterations: int, extended: bool) -> RootSet:
    n = len(z)
    P = ComplexPolynomial(c)
    res = np.abs(P(z))
    dp = np.abs(ComplexPolynomial(c[1:] * np.arange(1, n + 1))(z)) if n else np.zeros(0)
    radii = np.empty(n)
    for i in range(n):
        if res[i] == 0:
            radii[i] = 0.0
        elif dp[i] > 0 and np.isfinite(dp[i]):
            radii[i] = n * res[i] / dp[i]
        else:
            others = np.abs(np.delete(z, i) - z[i])
            radii[i] = others.min() if others.size else 0.0
    # clusters: roots whose inclusion discs (scaled by 10) overlap
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(n):
        for j in range(i + 1, n):
            if abs(z[i] - z[j]) <= 10 * (radii[i] + radii[j]):
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    clusters = tuple(tuple(g) for g in groups.values() if len(g) > 1)
    for g in clusters:
        centre = z[list(g)].mean()
        shared = max(abs(z[i] - centre) + radii[i] for i in g)
        radii[list(g)] = shared
    return RootSet(
        roots=z,
        radii=radii,
        residuals=res,
        clusters=clusters,
        iterations=iterations,
        extended=extended,
        bounds=_rounding_bound(c, z),
    )


def roots(P, tol: float = DEFAULT_TOL, maxiter: int = DEFAULT_MAXITER, init=None) -> RootSet:
    """All complex roots of ``P`` with certified residual radii.

    Falls back once to 32-digit arithmetic when the double-precision
    iteration hits ``maxiter``; raises :class:`ConvergenceError` if that fails too.
    """
    cp = as_complex(P)
    n = cp.degree
    if n < 1 or cp.coeffs[-1] == 0:
        raise InputError("root finding needs degree >= 1")
    if not tol > 0:
        raise InputError("tol must be positive")
    c = np.ascontiguousarray(cp.coeffs.reshape(1, -1))
    if init is None:
        z = initial_guesses(c)
    else:
        z = np.ascontiguousarray(np.asarray(init, dtype=np.complex128).reshape(1, n))
    iters, conv = _backend.aberth_batch(c, z, float(tol), int(maxiter))
    extended = False
    zz = z[0]
    if not conv[0]:
        retry = extended_roots(cp.coeffs, zz, maxiter)
        if retry is None:
            raise ConvergenceError(
                "Aberth iteration did not converge", degree=n, maxiter=maxiter
            )
        zz, extended = retry, True
    return _certify(np.array(cp.coeffs), zz.copy(), int(iters[0]), extended)


def batch_roots(coeffs: np.ndarray, tol: float = DEFAULT_TOL, maxiter: int = DEFAULT_MAXITER) -> np.ndarray:
    """Roots of many same-degree polynomials (rows, ascending coefficients).

    Rows that fail in double precision are retried individually through
    :func:`roots`. Returns an ``(N, n)`` complex array.
    """
    c = np.ascontiguousarray(np.asarray(coeffs, dtype=np.complex128))
    z = initial_guesses(c)
    _, conv = _backend.aberth_batch(c, z, float(tol), int(maxiter))
    for i in np.flatnonzero(conv == 0):
        z[i] = roots(ComplexPolynomial(c[i]), tol, maxiter).roots
    return z


def greedy_match(prev: np.ndarray, cur: np.ndarray) -> list[int]:
    """Index list ``idx`` with ``cur[idx[i]]`` the greedy nearest partner of ``prev[i]``."""
    m = len(cur)
    d = np.abs(np.asarray(prev)[:, None] - np.asarray(cur)[None, :])
    idx = [0] * m
    for _ in range(m):
        i, j = np.unravel_index(np.argmin(d), d.shape)
        idx[i] = int(j)
        d[i, :] = np.inf
        d[:, j] = np.inf
    return idx


def solve_level(V, w: complex, warm: RootSet | np.ndarray | None = None, tol: float = DEFAULT_TOL) -> RootSet:
    """The m solutions of V(z) = w; a warm start keeps branch order continuous."""
    cv = np.array(as_complex(V).coeffs)
    if len(cv) < 2:
        raise InputError("level set needs deg(V) >= 1")
    cv[0] -= complex(w)
    init = None
    if warm is not None:
        init = np.asarray(warm.roots if isinstance(warm, RootSet) else warm, dtype=np.complex128)
    rs = roots(ComplexPolynomial(cv), tol=tol, init=init)
    if init is None:
        return rs
    idx = greedy_match(init, rs.roots)
    return RootSet(
        roots=rs.roots[idx],
        radii=rs.radii[idx],
        residuals=rs.residuals[idx],
        clusters=tuple(tuple(idx.index(i) for i in g) for g in rs.clusters),
        iterations=rs.iterations,
        extended=rs.extended,
        bounds=rs.bounds[idx],
    )


def fujiwara_bound(P) -> float:
    """Upper bound on the moduli of all roots."""
    c = as_complex(P).coeffs
    n = len(c) - 1
    lead = abs(c[-1])
    terms = [abs(c[n - k] / lead) ** (1.0 / k) for k in range(1, n)]
    terms.append(abs(c[0] / (2 * lead)) ** (1.0 / n))
    return 2 * max(terms) if terms else 0.0
