"""Arithmetic of unit-height polynomials and Lehmer-type experiments on lemniscates.

Everything here assumes an integer V with |a_m| = 1 and r = 1. A V with
leading coefficient -1 is replaced by -V, which describes the same curve.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _scan
from .errors import HypothesisError, IndexExhaustedError, InputError
from .exact import level_resultant
from .heights import fmt_radius, fmt_real, mahler_closed, mahler_closed_batch
from .lemniscate import Lemniscate, Region, classify
from .polynomials import (
    FACTOR_DEGREE_CAP,
    IntPolynomial,
    compose,
    cyclotomic,
    euler_phi,
    exact_divide,
    factor,
    format_polynomial,
    is_irreducible,
)
from .rootfinding import RootSet, batch_roots, roots

UNIT_TOL = 1e-9
ENUMERATION_TOL = 1e-9
EMPTINESS_TOL = 1e-6
LIFT_TOL = 1e-8
SANDWICH_TOL = 1e-9
DEFAULT_MAX_INDEX = 300
DEFAULT_SCAN_CAP = 10**7


def monic_curve(Lm: Lemniscate, radius: str = "one") -> IntPolynomial:
    """The monic integer V of ``Lm``, negating V when its leading coefficient is -1.

    ``radius`` is ``"one"`` (require r = 1) or ``"below_one"`` (require 0 < r < 1).
    """
    if not Lm.is_integer:
        raise HypothesisError("an integer V is required", V=repr(Lm.V))
    V = Lm.V
    if V.leading == -1:
        V = -V
    if V.leading != 1:
        raise HypothesisError("V must be monic (up to sign)", leading=V.leading)
    if radius == "one" and Lm.r != 1:
        raise HypothesisError("r = 1 is required", r=str(Lm.r))
    if radius == "below_one" and not (0 < Lm.r < 1):
        raise HypothesisError("0 < r < 1 is required", r=str(Lm.r))
    return V


def _unit_index_candidates(limit_degree: int, max_index: int):
    """Indices j <= max_index with phi(j) <= limit_degree, increasing.

    phi(j) >= sqrt(j / 2) for all j, so no index past 2 * limit_degree^2 can qualify.
    """
    top = min(max_index, max(2, 2 * limit_degree * limit_degree + 2))
    return [j for j in range(1, top + 1) if euler_phi(j) <= limit_degree]


# -- classification ------------------------------------------------------------


class VerdictKind(enum.Enum):
    DIVIDES_V = "DividesV"
    CYCLOTOMIC_LIFT = "CyclotomicLift"
    NOT_UNIT_HEIGHT = "NotUnitHeight"


@dataclass(frozen=True)
class KroneckerVerdict:
    kind: VerdictKind
    cyclotomic_index: int | None
    witness: IntPolynomial | None
    mahler: float
    companion: IntPolynomial | None = None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "cyclotomic_index": self.cyclotomic_index,
            "witness": format_polynomial(self.witness) if self.witness is not None else None,
            "mahler": fmt_real(self.mahler),
            "companion": format_polynomial(self.companion, "w") if self.companion is not None else None,
        }


def kronecker_classify(
    P: IntPolynomial,
    Lm: Lemniscate,
    max_index: int = DEFAULT_MAX_INDEX,
    mahler: float | None = None,
) -> KroneckerVerdict:
    """Decide whether a monic irreducible P has unit height, and why.

    A height above 1 + 1e-9 settles the verdict as NotUnitHeight without
    touching irreducibility. Otherwise irreducibility is checked by exact
    factoring, and the companion Q(w) = prod (w - V(alpha_k)) is built from
    integer resultants: w | Q means P | V; otherwise the least j with
    Phi_j | Q gives P | Phi_j(V), confirmed by exact division. ``mahler``
    lets a caller that already has M_L(P) skip recomputing it.
    """
    V = monic_curve(Lm)
    if P.is_zero or P.degree < 1:
        raise InputError("classification needs a nonconstant polynomial")
    if P.leading != 1:
        raise HypothesisError("P must be monic", leading=P.leading)
    M = mahler_closed(P, Lm) if mahler is None else float(mahler)
    if M > 1 + UNIT_TOL:
        return KroneckerVerdict(VerdictKind.NOT_UNIT_HEIGHT, None, None, M)
    if not is_irreducible(P):
        raise HypothesisError("P must be irreducible over the integers", P=format_polynomial(P))
    Q = level_resultant(P, V)
    if Q.coeffs[0] == 0:
        w = exact_divide(V, P)
        if w is None:
            raise ArithmeticError("companion vanishes at 0 but P does not divide V")
        return KroneckerVerdict(VerdictKind.DIVIDES_V, None, w, M, Q)
    for j in _unit_index_candidates(P.degree, max_index):
        if exact_divide(Q, cyclotomic(j)) is None:
            continue
        w = exact_divide(compose(cyclotomic(j), V), P)
        if w is None:
            raise ArithmeticError(f"Phi_{j} divides the companion but P does not divide Phi_{j}(V)")
        return KroneckerVerdict(VerdictKind.CYCLOTOMIC_LIFT, j, w, M, Q)
    raise IndexExhaustedError(
        "no cyclotomic divisor of the companion polynomial up to max_index",
        max_index=max_index,
        mahler=M,
        companion=format_polynomial(Q, "w"),
    )


# -- complete conjugate sets on L --------------------------------------------


@dataclass(frozen=True)
class ConjugateSet:
    minimal_polynomial: IntPolynomial
    roots: RootSet
    cyclotomic_index: int | None
    interior: bool = False

    def to_dict(self) -> dict:
        return {
            "minimal_polynomial": format_polynomial(self.minimal_polynomial),
            "cyclotomic_index": self.cyclotomic_index,
            "interior": self.interior,
            "roots": [[fmt_real(z.real), fmt_real(z.imag)] for z in self.roots.roots],
        }


@dataclass
class ConjugateSetReport:
    sets: list[ConjugateSet]
    interior_sets: list[ConjugateSet]
    lemniscate: Lemniscate
    max_index: int
    max_degree: int
    rejected: list[IntPolynomial] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "lemniscate": {"V": format_polynomial(self.lemniscate.V), "r": fmt_radius(self.lemniscate.r)},
            "max_index": self.max_index,
            "max_degree": self.max_degree,
            "sets": [s.to_dict() for s in self.sets],
            "interior_sets": [s.to_dict() for s in self.interior_sets],
            "rejected": [format_polynomial(f) for f in self.rejected],
        }


def _all_on_curve(Lm: Lemniscate, zs, tol: float) -> bool:
    return all(classify(Lm, complex(z), tol) is Region.ON_CURVE for z in zs)


def enumerate_conjugate_sets(
    Lm: Lemniscate,
    max_index: int = 12,
    max_degree: int = FACTOR_DEGREE_CAP,
    degree_cap: int = FACTOR_DEGREE_CAP,
) -> ConjugateSetReport:
    """Irreducible factors of Phi_j(V), j <= max_index, whose roots all lie on L.

    Irreducible factors of V itself (roots at the centre, strictly inside)
    are listed separately as interior sets.
    """
    V = monic_curve(Lm)
    if max_index < 1:
        raise InputError("max_index must be positive", max_index=max_index)
    sets, inner, rejected = [], [], []
    seen = set()
    for j in range(1, max_index + 1):
        F = compose(cyclotomic(j), V)
        for f, _ in factor(F, cap=degree_cap):
            if f.degree < 1 or f.degree > max_degree or f.coeffs in seen:
                continue
            seen.add(f.coeffs)
            rs = roots(f)
            if _all_on_curve(Lm, rs.roots, ENUMERATION_TOL):
                sets.append(ConjugateSet(f, rs, j))
            else:
                rejected.append(f)
    for f, _ in factor(V, cap=degree_cap):
        if 1 <= f.degree <= max_degree and f.coeffs not in seen:
            seen.add(f.coeffs)
            inner.append(ConjugateSet(f, roots(f), None, interior=True))
    return ConjugateSetReport(sets, inner, Lm, max_index, max_degree, rejected)


@dataclass
class EmptinessReport:
    scanned: int
    hits: list[IntPolynomial]
    near_miss: float
    near_miss_polynomial: IntPolynomial | None
    max_degree: int
    coeff_bound: int

    @property
    def empty(self) -> bool:
        return not self.hits

    def to_dict(self) -> dict:
        return {
            "scanned": self.scanned,
            "hits": [format_polynomial(h) for h in self.hits],
            "near_miss": fmt_real(self.near_miss),
            "near_miss_polynomial": format_polynomial(self.near_miss_polynomial) if self.near_miss_polynomial else None,
            "max_degree": self.max_degree,
            "coeff_bound": self.coeff_bound,
        }


def no_sets_below_one(
    Lm: Lemniscate,
    coeff_bound: int,
    max_degree: int,
    cap: int = DEFAULT_SCAN_CAP,
) -> EmptinessReport:
    """Scan monic integer polynomials for root sets lying entirely on L, 0 < r < 1.

    The near miss is the minimum over candidates of the largest relative
    distance | |V(z)| - r | / r among their roots.
    """
    V = monic_curve(Lm, radius="below_one")
    if coeff_bound < 0 or max_degree < 0:
        raise InputError("coeff_bound and max_degree must be nonnegative")
    total = _scan.box_size(max_degree, coeff_bound, monic=True, min_degree=1)
    _scan.check_cap(total, cap)
    r = Lm.r_float
    vc = np.array([complex(c) for c in V.coeffs])
    hits, scanned = [], 0
    best, best_poly = math.inf, None
    for _, n, rows in _scan.shards(max_degree, coeff_bound, monic=True, min_degree=1):
        zs = batch_roots(rows.astype(np.complex128))
        vz = np.abs(np.polynomial.polynomial.polyval(zs, vc))
        dist = (np.abs(vz - r) / r).max(axis=1)
        scanned += rows.shape[0]
        i = int(np.argmin(dist))
        if dist[i] < best:
            best, best_poly = float(dist[i]), IntPolynomial(int(x) for x in rows[i])
        for i in np.flatnonzero(dist <= EMPTINESS_TOL):
            hits.append(IntPolynomial(int(x) for x in rows[i]))
    return EmptinessReport(scanned, hits, best, best_poly, max_degree, coeff_bound)


# -- Lehmer-type experiments ---------------------------------------------------


def classical_mahler(Q: IntPolynomial) -> float:
    """|c_n| prod max(1, |z_k|), with repeated roots split off exactly."""
    return mahler_closed(Q, Lemniscate(IntPolynomial([0, 1]), 1))


@dataclass(frozen=True)
class LiftReport:
    M_of_Q: float
    M_L_of_composition: float
    relative_gap: float

    @property
    def ok(self) -> bool:
        return self.relative_gap <= LIFT_TOL

    def to_dict(self) -> dict:
        return {
            "M_of_Q": fmt_real(self.M_of_Q),
            "M_L_of_composition": fmt_real(self.M_L_of_composition),
            "relative_gap": fmt_real(self.relative_gap),
        }


def lift_measure_identity(Q: IntPolynomial, Lm: Lemniscate) -> LiftReport:
    """Compare the classical measure of Q with M_L(Q(V))."""
    V = monic_curve(Lm)
    if Q.is_zero:
        raise InputError("Q must not be the zero polynomial")
    mq = classical_mahler(Q)
    ml = mahler_closed(compose(Q, V), Lemniscate(V, 1))
    return LiftReport(mq, ml, abs(ml - mq) / mq)


@dataclass
class ScanMinimum:
    value: float | None
    witness: IntPolynomial | None
    scanned: int
    below_one: int


def _better(value, poly, best_value, best_poly, rel=1e-12) -> bool:
    if best_value is None:
        return True
    if value < best_value * (1 - rel):
        return True
    if value <= best_value * (1 + rel):
        return poly.coeffs < best_poly.coeffs
    return False


def _scan_minimum(Lm, max_degree, coeff_bound, gap, cap, progress, label) -> ScanMinimum:
    total = _scan.box_size(max_degree, coeff_bound)
    _scan.check_cap(total, cap)
    best_value, best_poly = None, None
    scanned = below = 0
    for shard_id, n, rows in _scan.shards(max_degree, coeff_bound):
        vals = mahler_closed_batch(rows, Lm)
        scanned += rows.shape[0]
        below += int(np.count_nonzero(vals < 1 - SANDWICH_TOL))
        keep = np.flatnonzero(vals > 1 + gap)
        if keep.size:
            lo = vals[keep].min()
            for i in keep[vals[keep] <= lo * (1 + 1e-12)]:
                poly = IntPolynomial(int(x) for x in rows[i])
                if _better(float(vals[i]), poly, best_value, best_poly):
                    best_value, best_poly = float(vals[i]), poly
        if progress is not None:
            progress({"scan": label, "shard": list(shard_id), "scanned": scanned, "best_so_far": best_value})
    return ScanMinimum(best_value, best_poly, scanned, below)


@dataclass
class LehmerReport:
    smallest_above_one: float | None
    witness: IntPolynomial | None
    unit_circle_minimum: float | None
    unit_circle_witness: IntPolynomial | None
    sandwich: tuple[float, float] | None
    lift_value: float | None
    lower_ok: bool
    upper_ok: bool
    scanned: int
    below_one: int
    gap: float

    @property
    def ok(self) -> bool:
        return self.lower_ok and self.upper_ok and self.below_one == 0

    def to_dict(self) -> dict:
        return {
            "smallest_above_one": fmt_real(self.smallest_above_one),
            "witness": format_polynomial(self.witness) if self.witness else None,
            "unit_circle_minimum": fmt_real(self.unit_circle_minimum),
            "unit_circle_witness": format_polynomial(self.unit_circle_witness) if self.unit_circle_witness else None,
            "sandwich": [fmt_real(x) for x in self.sandwich] if self.sandwich else None,
            "lift_value": fmt_real(self.lift_value),
            "lower_ok": self.lower_ok,
            "upper_ok": self.upper_ok,
            "scanned": self.scanned,
            "below_one": self.below_one,
            "gap": fmt_real(self.gap),
        }


def lehmer_scan(
    Lm: Lemniscate,
    max_degree: int,
    coeff_bound: int,
    gap: float = 1e-6,
    cap: int = DEFAULT_SCAN_CAP,
    progress: Callable[[dict], None] | None = None,
) -> LehmerReport:
    """Smallest M_L above 1 + gap over a coefficient box, checked against the unit circle.

    The same box is scanned on the unit circle. The lemniscate minimum must
    be at least the m-th root of the circle minimum, and lifting the circle
    witness Q to Q(V) must give a value no larger than the circle minimum.
    Polynomials are taken with positive leading coefficient, since M_L(-P) = M_L(P).
    """
    V = monic_curve(Lm)
    if not gap > 0:
        raise InputError("gap must be positive", gap=gap)
    if max_degree < 0 or coeff_bound < 1:
        raise InputError("need max_degree >= 0 and coeff_bound >= 1")
    Lm = Lemniscate(V, 1)
    circle = Lemniscate(IntPolynomial([0, 1]), 1)
    ours = _scan_minimum(Lm, max_degree, coeff_bound, gap, cap, progress, "lemniscate")
    if V == IntPolynomial([0, 1]):
        base = ours
    else:
        base = _scan_minimum(circle, max_degree, coeff_bound, gap, cap, progress, "unit_circle")
    m = V.degree
    sandwich = None
    lift = None
    lower_ok = upper_ok = True
    if base.value is not None:
        sandwich = (base.value ** (1.0 / m), base.value)
        lift = mahler_closed(compose(base.witness, V), Lm)
        upper_ok = lift <= base.value + SANDWICH_TOL
        if ours.value is not None:
            lower_ok = ours.value >= sandwich[0] - SANDWICH_TOL
    return LehmerReport(
        ours.value,
        ours.witness,
        base.value,
        base.witness,
        sandwich,
        lift,
        lower_ok,
        upper_ok,
        ours.scanned,
        ours.below_one + base.below_one * (base is not ours),
        float(gap),
    )
