"""Heights of polynomials over a lemniscate with respect to its equilibrium measure.

The closed form

    M_L(P) = |c_n| |a_m|^(-n/m) (prod_k max(r, |V(z_k)|))^(1/m)

is the authoritative geometric mean; the quadrature routes exist to check it
and to supply the L_p norms, which have no closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction

import numpy as np

from .errors import InputError, SingularIntegrandError
from .exact import resultant
from .lemniscate import Lemniscate, Quadrature, equilibrium_average, level_points
from .polynomials import IntPolynomial, as_complex, derivative, format_polynomial, squarefree_decomposition
from .rootfinding import RootSet, batch_roots, extended_roots, roots

DEFAULT_NODES = 4096
DEFAULT_THETA = 4096
BOUND_SLACK = 1e-9
# roots outside E whose |V|-uncertainty exceeds this relative size are recomputed at 40 digits
EXTENDED_TRIGGER = 1e-12


def _require_nonzero(P):
    if isinstance(P, IntPolynomial) and P.is_zero:
        raise InputError("heights are undefined for the zero polynomial")
    if not isinstance(P, IntPolynomial) and not np.any(as_complex(P).coeffs):
        raise InputError("heights are undefined for the zero polynomial")


def _log_mahler_from_roots(lead, zs, Lm: Lemniscate) -> float:
    n = len(zs)
    r = Lm.r_float
    s = 0.0
    if n:
        vz = np.abs(as_complex(Lm.V)(np.asarray(zs)))
        s = math.fsum(np.log(np.maximum(vz, r)))
    return math.log(abs(lead)) - n / Lm.m * math.log(abs(Lm.a_m)) + s / Lm.m


def _measure_roots(P, Lm: Lemniscate, rs: RootSet) -> np.ndarray:
    """Roots of P accurate enough for log max(r, |V(z)|).

    Roots safely inside E contribute log r whatever their error. Any other
    root whose error radius, pushed through V, is large relative to
    max(r, |V|) gets recomputed at 40 digits.
    """
    zs = rs.roots
    cv = as_complex(Lm.V)
    r = Lm.r_float
    unc = np.abs(derivative(cv)(zs)) * rs.radii
    vz = np.abs(cv(zs))
    risky = (vz + 4 * unc > r) & (unc > EXTENDED_TRIGGER * np.maximum(vz, r))
    if risky.any():
        better = extended_roots(as_complex(P).coeffs, zs, digits=40)
        if better is not None:
            return better
    return zs


def mahler_closed(P, Lm: Lemniscate) -> float:
    """Generalized Mahler measure from the roots of P.

    Integer polynomials whose computed roots cluster are split into
    squarefree parts first, so repeated roots do not lose half the digits.
    """
    _require_nonzero(P)
    if P.degree == 0:
        return float(abs(as_complex(P).coeffs[0]))
    rs = roots(P)
    if rs.clusters and isinstance(P, IntPolynomial):
        return math.exp(_log_mahler_squarefree(P, Lm))
    return math.exp(_log_mahler_from_roots(as_complex(P).leading, _measure_roots(P, Lm, rs), Lm))


def _log_mahler_squarefree(P: IntPolynomial, Lm: Lemniscate) -> float:
    prim = P.primitive()
    out = math.log(abs(P.leading) / prim.leading)
    for f, e in squarefree_decomposition(P):
        zs = _measure_roots(f, Lm, roots(f)) if f.degree else []
        out += e * _log_mahler_from_roots(f.leading, zs, Lm)
    return out


def mahler_closed_batch(coeffs: np.ndarray, Lm: Lemniscate) -> np.ndarray:
    """Closed-form measure of many integer polynomials of one exact degree.

    ``coeffs`` is an ``(N, n + 1)`` integer array (ascending, nonzero leading
    column). Rows whose roots nearly collide are recomputed exactly-split.
    """
    c = np.asarray(coeffs)
    N, n1 = c.shape
    n = n1 - 1
    lead = np.abs(c[:, n].astype(float))
    base = np.log(lead) - n / Lm.m * math.log(abs(Lm.a_m))
    if n == 0:
        return np.exp(base)
    zs = batch_roots(c.astype(np.complex128))
    vz = np.abs(as_complex(Lm.V)(zs))
    logs = base + np.log(np.maximum(vz, Lm.r_float)).sum(axis=1) / Lm.m
    if n > 1:
        # a split repeated root z +- delta costs only O(delta^2) in the log sum
        # unless the cluster straddles L, where max(r, .) breaks the symmetry
        d = np.abs(zs[:, :, None] - zs[:, None, :])
        d[:, np.arange(n), np.arange(n)] = np.inf
        scale = 1.0 + np.abs(zs).max(axis=1)
        near_pair = d.min(axis=2) < 1e-4 * scale[:, None]
        near_curve = np.abs(vz - Lm.r_float) < 1e-3 * Lm.r_float
        close = (near_pair & near_curve).any(axis=1)
        for i in np.flatnonzero(close):
            logs[i] = _log_mahler_squarefree(IntPolynomial(int(x) for x in c[i]), Lm)
    return np.exp(logs)


def mahler_quadrature(P, Lm: Lemniscate, n_nodes: int = DEFAULT_NODES) -> Quadrature:
    """exp of the trapezoidal average of log|P|; refuses roots near the curve."""
    _require_nonzero(P)
    cp = as_complex(P)
    sing = roots(cp).roots if cp.degree else np.zeros(0)
    q = equilibrium_average(Lm, lambda Z: np.log(np.abs(cp(Z))), n_nodes, singular_points=sing)
    val = math.exp(q.value)
    return Quadrature(val, val * math.expm1(q.error), n_nodes)


def lp_norm(P, Lm: Lemniscate, p: float, n_nodes: int = DEFAULT_NODES) -> Quadrature:
    """(integral |P|^p dmu)^(1/p) for 0 < p < inf."""
    _require_nonzero(P)
    if not (0 < p < math.inf):
        raise InputError("lp_norm needs 0 < p < inf; use mahler_closed or sup_norm", p=p)
    cp = as_complex(P)
    Z = level_points(Lm, n_nodes)
    with np.errstate(divide="ignore"):
        logabs = np.log(np.abs(cp(Z)))
    shift = float(np.max(logabs))
    q = equilibrium_average(Lm, lambda _: np.exp(p * (logabs - shift)), n_nodes)
    val = q.value ** (1.0 / p) * math.exp(shift)
    err = val * q.error / (p * q.value) if q.value > 0 else 0.0
    return Quadrature(val, err, n_nodes)


def _abs_on_nodes(coeffs: np.ndarray, Z: np.ndarray, chunk: int = 2_000_000):
    """Yield ``(row_slice, |P(Z)|)`` blocks for many polynomials on shared nodes."""
    c = np.asarray(coeffs, dtype=np.complex128)
    pts = Z.reshape(-1)
    step = max(1, chunk // max(1, pts.size))
    for s in range(0, c.shape[0], step):
        blk = c[s : s + step]
        acc = np.broadcast_to(blk[:, -1:], (blk.shape[0], pts.size)).copy()
        for k in range(blk.shape[1] - 2, -1, -1):
            acc *= pts
            acc += blk[:, k : k + 1]
        yield slice(s, s + blk.shape[0]), np.abs(acc).reshape(blk.shape[0], *Z.shape)


def lp_norm_batch(coeffs: np.ndarray, Lm: Lemniscate, p: float, n_nodes: int = DEFAULT_NODES):
    """``(values, errors)`` of the L_p norm for each row of ``coeffs`` (ascending)."""
    if not (0 < p < math.inf):
        raise InputError("lp_norm_batch needs 0 < p < inf", p=p)
    Z = level_points(Lm, n_nodes)
    N = np.asarray(coeffs).shape[0]
    vals, errs = np.empty(N), np.empty(N)
    for sl, A in _abs_on_nodes(coeffs, Z):
        with np.errstate(divide="ignore"):
            la = np.log(A)
        shift = la.max(axis=(1, 2))
        rows = np.exp(p * (la - shift[:, None, None])).sum(axis=2) / Lm.m
        full = rows.mean(axis=1)
        half = rows[:, ::2].mean(axis=1)
        v = full ** (1.0 / p) * np.exp(shift)
        vals[sl] = v
        errs[sl] = v * np.abs(full - half) / (p * full)
    return vals, errs


def sup_grid_batch(coeffs: np.ndarray, Lm: Lemniscate, n_theta: int = 1024) -> np.ndarray:
    """Grid maximum of |P| on L for each row; a lower bound for the sup norm."""
    Z = level_points(Lm, n_theta)
    out = np.empty(np.asarray(coeffs).shape[0])
    for sl, A in _abs_on_nodes(coeffs, Z):
        out[sl] = A.max(axis=(1, 2))
    return out


@dataclass(frozen=True)
class SupNorm:
    value: float
    theta: float
    point: complex
    grid_value: float
    n_theta: int
    note: str


def _branch_point(Lm: Lemniscate, z0: complex, theta: float) -> complex | None:
    cv = as_complex(Lm.V)
    dv = np.polynomial.polynomial.polyder(cv.coeffs)
    w = Lm.r_float * np.exp(1j * theta)
    z = complex(z0)
    for _ in range(50):
        f = cv(z) - w
        d = np.polynomial.polynomial.polyval(z, dv)
        if d == 0:
            return None
        step = f / d
        z -= step
        if abs(step) <= 4e-16 * max(1.0, abs(z)):
            break
    return z


def sup_norm(P, Lm: Lemniscate, n_theta: int = DEFAULT_THETA) -> SupNorm:
    """Maximum of |P| on L: grid maximum per branch, then golden-section in theta."""
    _require_nonzero(P)
    cp = as_complex(P)
    Z = level_points(Lm, n_theta)
    A = np.abs(cp(Z))
    k_all, j_all = np.unravel_index(np.argmax(A), A.shape)
    grid = float(A[k_all, j_all])
    best = (grid, 2 * np.pi * k_all / n_theta, complex(Z[k_all, j_all]))
    h = 2 * np.pi / n_theta
    invphi = (math.sqrt(5) - 1) / 2
    for j in range(Z.shape[1]):
        k = int(np.argmax(A[:, j]))
        t0 = 2 * np.pi * k / n_theta
        anchor = complex(Z[k, j])

        def g(t):
            z = _branch_point(Lm, anchor, t)
            if z is None or abs(z - anchor) > 4 * h * (1 + abs(anchor)):
                return -math.inf, anchor
            return abs(cp(z)), z

        a, b = t0 - h, t0 + h
        x1, x2 = b - invphi * (b - a), a + invphi * (b - a)
        (f1, z1), (f2, z2) = g(x1), g(x2)
        for _ in range(60):
            if f1 < f2:
                a, x1, f1, z1 = x1, x2, f2, z2
                x2 = a + invphi * (b - a)
                f2, z2 = g(x2)
            else:
                b, x2, f2, z2 = x2, x1, f1, z1
                x1 = b - invphi * (b - a)
                f1, z1 = g(x1)
        for f, t, z in ((f1, x1, z1), (f2, x2, z2)):
            if f > best[0]:
                best = (f, t % (2 * np.pi), z)
    note = (
        f"max over a {n_theta}-node theta grid refined by golden-section search; "
        "value is attained on L, so it is a lower bound that is exact up to grid resolution"
    )
    return SupNorm(float(best[0]), float(best[1]), complex(best[2]), grid, n_theta, note)


@dataclass(frozen=True)
class ResultantBound:
    bound: float
    mahler: float
    resultant: int
    holds: bool
    equality_case: bool
    relative_slack: float


def resultant_bound(P: IntPolynomial, Lm: Lemniscate) -> ResultantBound:
    """Compare |a_m|^(-n/m) |Res(P, V)|^(1/m) with M_L(P).

    ``equality_case`` is set when every root of P lies outside the filled
    lemniscate, where the bound is attained.
    """
    if not Lm.is_integer:
        raise InputError("the resultant bound needs an integer V")
    _require_nonzero(P)
    V = Lm.V
    res = resultant(P, V)
    n, m = P.degree, Lm.m
    if res == 0:
        bound = 0.0
    else:
        bound = math.exp(-n / m * math.log(abs(V.leading)) + math.log(abs(res)) / m)
    M = mahler_closed(P, Lm)
    slack = (M - bound) / M
    outside = False
    if n:
        vz = np.abs(as_complex(V)(roots(P).roots))
        outside = bool(np.all(vz > Lm.r_float))
    else:
        outside = True
    return ResultantBound(bound, M, res, slack >= -BOUND_SLACK, outside, slack)


def height(P, Lm: Lemniscate, p: float, n_nodes: int = DEFAULT_NODES, n_theta: int = DEFAULT_THETA) -> float:
    """One member of the family: p = 0 is M_L, p = inf the sup norm."""
    if p == 0:
        return mahler_closed(P, Lm)
    if p == math.inf:
        return sup_norm(P, Lm, n_theta).value
    return lp_norm(P, Lm, p, n_nodes).value


@dataclass
class SubordinationReport:
    mahler: float
    lp: dict
    lp_errors: dict
    sup: float
    chain_ok: bool
    monotone_ok: bool
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.chain_ok and self.monotone_ok


def subordination_check(
    P,
    Lm: Lemniscate,
    p_grid=(0.5, 1, 2, 4, 8),
    n_nodes: int = DEFAULT_NODES,
    n_theta: int = DEFAULT_THETA,
    rtol: float = 1e-11,
) -> SubordinationReport:
    """Check M_L <= ||P||_p <= ||P||_inf and monotonicity in p.

    Each comparison is allowed the sum of the quadrature error estimates
    involved plus ``rtol`` times the larger value for rounding.
    """
    M = mahler_closed(P, Lm)
    ps = sorted(float(p) for p in p_grid if 0 < p < math.inf)
    lp, errs = {}, {}
    for p in ps:
        q = lp_norm(P, Lm, p, n_nodes)
        lp[p], errs[p] = q.value, q.error
    sup = sup_norm(P, Lm, n_theta).value
    violations = []

    def le(a, ea, b, eb, label):
        if a > b + ea + eb + rtol * max(abs(a), abs(b)):
            violations.append(f"{label}: {a!r} > {b!r}")
            return False
        return True

    chain = True
    for p in ps:
        chain &= le(M, 0.0, lp[p], errs[p], f"M <= ||P||_{p}")
        chain &= le(lp[p], errs[p], sup, 0.0, f"||P||_{p} <= sup")
    chain &= le(M, 0.0, sup, 0.0, "M <= sup")
    mono = True
    for a, b in zip(ps, ps[1:]):
        mono &= le(lp[a], errs[a], lp[b], errs[b], f"||P||_{a} <= ||P||_{b}")
    return SubordinationReport(M, lp, errs, sup, chain, mono, violations)


# -- report --------------------------------------------------------------------


def fmt_real(x) -> str:
    if x is None:
        return None
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".15g")


def fmt_radius(r: Fraction) -> str:
    den = r.denominator
    while den % 2 == 0:
        den //= 2
    while den % 5 == 0:
        den //= 5
    if den == 1:
        d = Decimal(r.numerator) / Decimal(r.denominator)
        return format(d.normalize(), "f")
    return fmt_real(float(r))


def _fmt_p(p: float) -> str:
    return "inf" if p == math.inf else format(p, "g")


@dataclass
class HeightReport:
    polynomial: IntPolynomial
    lemniscate: Lemniscate
    mahler_closed: float
    mahler_quadrature: Quadrature | None
    lp_values: dict
    lp_errors: dict
    resultant_bound: float | None
    method_notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        V = self.lemniscate.V
        lp = {_fmt_p(p): fmt_real(v) for p, v in sorted(self.lp_values.items()) if p != math.inf}
        quad = {_fmt_p(p): fmt_real(e) for p, e in sorted(self.lp_errors.items())}
        if self.mahler_quadrature is not None:
            quad["mahler"] = fmt_real(self.mahler_quadrature.error)
        return {
            "polynomial": format_polynomial(self.polynomial),
            "lemniscate": {
                "V": format_polynomial(V) if isinstance(V, IntPolynomial) else [str(c) for c in as_complex(V).coeffs],
                "r": fmt_radius(self.lemniscate.r),
            },
            "heights": {
                "mahler": fmt_real(self.mahler_closed),
                "mahler_quadrature": fmt_real(self.mahler_quadrature.value) if self.mahler_quadrature else None,
                "lp": lp,
                "sup": fmt_real(self.lp_values.get(math.inf)),
            },
            "bounds": {"resultant": fmt_real(self.resultant_bound)},
            "errors": {"quadrature": quad},
            "notes": list(self.method_notes),
        }


def height_report(
    P: IntPolynomial,
    Lm: Lemniscate,
    p_grid=(1, 2, 4),
    n_nodes: int = DEFAULT_NODES,
    n_theta: int = DEFAULT_THETA,
) -> HeightReport:
    notes = ["mahler: closed form from roots of P (authoritative)"]
    M = mahler_closed(P, Lm)
    try:
        mq = mahler_quadrature(P, Lm, n_nodes)
        notes.append(f"mahler_quadrature: trapezoidal rule, {n_nodes} nodes")
    except SingularIntegrandError:
        mq = None
        notes.append("mahler_quadrature: refused, a root of P lies on or near L")
    lp, errs = {}, {}
    for p in p_grid:
        p = float(p)
        if p == 0:
            continue
        if p == math.inf:
            continue
        q = lp_norm(P, Lm, p, n_nodes)
        lp[p], errs[p] = q.value, q.error
    sup = sup_norm(P, Lm, n_theta)
    lp[math.inf] = sup.value
    notes.append("sup: " + sup.note)
    rb = None
    if Lm.is_integer:
        rb = resultant_bound(P, Lm).bound
    return HeightReport(P, Lm, M, mq, lp, errs, rb, notes)
