"""Lemniscates {|V(z)| = r}: potential theory in closed form, tracing, quadrature.

Averages against the equilibrium measure are computed through the pushforward
under V: if z_1(t), ..., z_m(t) solve V(z) = r e^{it}, then

    integral f dmu = (1 / 2pi) int_0^{2pi} (1/m) sum_j f(z_j(t)) dt,

which the periodic trapezoidal rule evaluates with geometric convergence for
integrands analytic near the curve.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np

from . import _backend
from .errors import InputError, SingularIntegrandError, StepTooCoarseError
from .polynomials import ComplexPolynomial, IntPolynomial, as_complex, derivative, parse_polynomial
from .rootfinding import DEFAULT_MAXITER, DEFAULT_TOL, roots, solve_level

# log|P| quadrature is refused when | |V(root)| - r | < SINGULAR_MARGIN * r
SINGULAR_MARGIN = 1e-4
CRITICAL_RTOL = 1e-9
COLLISION_FRACTION = 1e-6


def parse_radius(value) -> Fraction:
    """Exact radius from an int, Fraction, float, or text such as ``"0.5"`` or ``"1/2"``."""
    if isinstance(value, Fraction):
        r = value
    elif isinstance(value, (int, float)):
        r = Fraction(value)
    else:
        try:
            r = Fraction(str(value).strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(f"cannot parse radius {value!r}") from None
    if r <= 0:
        raise InputError("radius must be positive", r=str(r))
    return r


@dataclass(frozen=True, eq=False)
class Lemniscate:
    """The curve |V(z)| = r together with its filled-in interior."""

    V: IntPolynomial | ComplexPolynomial
    r: Fraction

    def __init__(self, V, r):
        if isinstance(V, str):
            V = parse_polynomial(V)
        elif not isinstance(V, (IntPolynomial, ComplexPolynomial)):
            V = ComplexPolynomial(V)
        if V.degree < 1:
            raise InputError("lemniscate needs deg(V) >= 1")
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "r", parse_radius(r))

    @property
    def m(self) -> int:
        return self.V.degree

    @property
    def a_m(self):
        return self.V.leading

    @property
    def r_float(self) -> float:
        return float(self.r)

    @property
    def is_integer(self) -> bool:
        return isinstance(self.V, IntPolynomial)

    @property
    def coeffs(self) -> np.ndarray:
        return np.array(as_complex(self.V).coeffs)

    def key(self) -> tuple:
        return (tuple(complex(c) for c in self.coeffs), self.r_float)

    def __eq__(self, other):
        return isinstance(other, Lemniscate) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Lemniscate(V={str(self.V) if self.is_integer else self.V!r}, r={self.r})"


class Region(enum.Enum):
    INTERIOR = "interior"
    ON_CURVE = "on_curve"
    EXTERIOR = "exterior"


def _absV(Lm: Lemniscate, z):
    return np.abs(as_complex(Lm.V)(z))


def classify(Lm: Lemniscate, z: complex, tol: float = 1e-9) -> Region:
    v = float(_absV(Lm, z))
    r = Lm.r_float
    if abs(v - r) <= tol * r:
        return Region.ON_CURVE
    return Region.INTERIOR if v < r else Region.EXTERIOR


def capacity(Lm: Lemniscate) -> float:
    return (Lm.r_float / abs(Lm.a_m)) ** (1.0 / Lm.m)


def green(Lm: Lemniscate, z):
    """Green function of the exterior with pole at infinity; zero on the filled set."""
    v = _absV(Lm, z)
    with np.errstate(divide="ignore"):
        g = np.log(v / Lm.r_float) / Lm.m
    return np.where(v > Lm.r_float, g, 0.0) if np.ndim(g) else (float(g) if v > Lm.r_float else 0.0)


def equilibrium_potential(Lm: Lemniscate, z):
    """(1/m) log(max(r, |V(z)|) / |a_m|), i.e. the integral of log|z - t| dmu(t)."""
    v = np.maximum(_absV(Lm, z), Lm.r_float)
    out = np.log(v / abs(Lm.a_m)) / Lm.m
    return float(out) if np.ndim(out) == 0 else out


def critical_values(Lm: Lemniscate) -> np.ndarray:
    """|V(c)| at the critical points c of V."""
    dV = derivative(as_complex(Lm.V))
    if dV.degree < 1:
        return np.zeros(0)
    cs = roots(dV).roots
    return _absV(Lm, cs)


# -- level sets on a theta grid -------------------------------------------------


@lru_cache(maxsize=64)
def _sweep_cached(key: tuple, n: int) -> np.ndarray:
    coeffs = np.array(key[0], dtype=np.complex128)
    r = key[1]
    cv = coeffs.copy()
    cv[0] -= r
    z0 = roots(ComplexPolynomial(cv)).roots
    Z, ok = _backend.level_sweep(coeffs, r, n, np.ascontiguousarray(z0), DEFAULT_TOL, DEFAULT_MAXITER)
    Z = np.array(Z)
    for k in np.flatnonzero(ok == 0):
        w = r * np.exp(2j * np.pi * (k % n) / n)
        prev = Z[k - 1] if k else z0
        Z[k] = solve_level(ComplexPolynomial(coeffs), w, warm=prev).roots
    Z.setflags(write=False)
    return Z


def level_sweep(Lm: Lemniscate, n: int) -> np.ndarray:
    """``(n + 1, m)`` array: row k solves V(z) = r exp(2 pi i k / n); row n closes the loop."""
    if n < 1:
        raise InputError("need at least one theta node")
    return _sweep_cached(Lm.key(), int(n))


def level_points(Lm: Lemniscate, n: int) -> np.ndarray:
    return level_sweep(Lm, n)[:n]


@dataclass
class CurveTrace:
    components: list[np.ndarray]
    component_thetas: list[np.ndarray]
    theta_nodes: np.ndarray
    monodromy: tuple[int, ...]
    warnings: list[str] = field(default_factory=list)
    max_residual: float = 0.0

    def to_csv(self, dest=None) -> str:
        """CSV with header ``component_id,theta,re,im``; returns the text."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["component_id", "theta", "re", "im"])
        for cid, (pts, ths) in enumerate(zip(self.components, self.component_thetas)):
            for z, t in zip(pts, ths):
                w.writerow([cid, repr(float(t)), repr(float(z.real)), repr(float(z.imag))])
        text = buf.getvalue()
        if dest is not None:
            if hasattr(dest, "write"):
                dest.write(text)
            else:
                with open(dest, "w", newline="") as fh:
                    fh.write(text)
        return text


def _cycles(perm: tuple[int, ...]) -> list[list[int]]:
    seen, out = set(), []
    for start in range(len(perm)):
        if start in seen:
            continue
        cyc, j = [], start
        while j not in seen:
            seen.add(j)
            cyc.append(j)
            j = perm[j]
        out.append(cyc)
    return out


def trace(Lm: Lemniscate, n_theta: int = 256) -> CurveTrace:
    """Trace L as m continued branches of V(z) = r e^{it} and join them by monodromy."""
    from .rootfinding import greedy_match

    if n_theta < 16:
        raise InputError("n_theta must be at least 16", n_theta=n_theta)
    m = Lm.m
    r = Lm.r_float
    Z = level_sweep(Lm, n_theta)
    warnings = []
    crit = critical_values(Lm)
    if crit.size and np.any(np.abs(crit - r) <= CRITICAL_RTOL * r):
        warnings.append("near-critical: r is a critical value of |V|; component count not guaranteed")
    if m > 1:
        diffs = np.abs(Z[:, :, None] - Z[:, None, :])
        diffs[:, np.arange(m), np.arange(m)] = np.inf
        gaps = diffs.min(axis=(1, 2))
        if gaps.min() < COLLISION_FRACTION * capacity(Lm):
            warnings.append("branch collision: two branches approach within 1e-6 * capacity")
        disp = np.abs(np.diff(Z, axis=0)).max(axis=1)
        bad = disp >= 0.5 * np.minimum(gaps[:-1], gaps[1:])
        if bad.any():
            if not warnings:
                raise StepTooCoarseError(
                    "theta step too coarse for unambiguous branch matching; increase n_theta",
                    n_theta=n_theta,
                    first_bad_step=int(np.flatnonzero(bad)[0]),
                )
            warnings.append("step-too-coarse near a critical configuration")
    # branch j at 2pi lands on branch perm[j] at 0
    idx = greedy_match(Z[n_theta], Z[0])
    perm = tuple(idx)
    thetas = 2 * np.pi * np.arange(n_theta) / n_theta
    comps, comp_th = [], []
    for cyc in _cycles(perm):
        pts = [Z[:n_theta, j] for j in cyc] + [Z[n_theta, cyc[-1]][None]]
        ths = [thetas + 2 * np.pi * t for t in range(len(cyc))] + [np.array([2 * np.pi * len(cyc)])]
        comps.append(np.concatenate(pts))
        comp_th.append(np.concatenate(ths))
    resid = np.abs(_absV(Lm, Z) - r).max() / max(1.0, r)
    return CurveTrace(comps, comp_th, thetas, perm, warnings, float(resid))


@dataclass(frozen=True)
class Quadrature:
    value: float
    error: float
    n_nodes: int


def _check_nodes(n_nodes: int):
    if n_nodes < 16 or n_nodes & (n_nodes - 1):
        raise InputError("n_nodes must be a power of two >= 16", n_nodes=n_nodes)


def singular_margin(Lm: Lemniscate, zs) -> float:
    """Smallest | |V(z)| - r | / r over the points ``zs`` (inf when empty)."""
    zs = np.atleast_1d(np.asarray(zs, dtype=np.complex128))
    if zs.size == 0:
        return math.inf
    return float(np.min(np.abs(_absV(Lm, zs) - Lm.r_float)) / Lm.r_float)


def equilibrium_average(
    Lm: Lemniscate,
    f: Callable[[np.ndarray], np.ndarray],
    n_nodes: int = 4096,
    singular_points=None,
) -> Quadrature:
    """Trapezoidal average of ``f`` against the equilibrium measure.

    ``f`` receives an ``(n_nodes, m)`` complex array and returns reals of the
    same shape. ``singular_points`` lists the log singularities of ``f``
    (roots of P for f = log|P|); the call is refused if any lies within the
    singularity margin of the curve. The error estimate is |A(n) - A(n/2)|.
    """
    _check_nodes(n_nodes)
    if singular_points is not None:
        gap = singular_margin(Lm, singular_points)
        if gap < SINGULAR_MARGIN:
            raise SingularIntegrandError(
                "a log singularity lies within the margin of the curve; use the closed form",
                margin=gap,
                threshold=SINGULAR_MARGIN,
            )
    Z = level_points(Lm, n_nodes)
    vals = np.asarray(f(Z), dtype=float)
    if vals.shape != Z.shape:
        vals = np.broadcast_to(vals, Z.shape)
    rows = vals.sum(axis=1) / Lm.m
    full = math.fsum(rows) / n_nodes
    half = math.fsum(rows[::2]) / (n_nodes // 2)
    return Quadrature(full, abs(full - half), n_nodes)
