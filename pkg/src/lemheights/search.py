"""Exhaustive searches for integer polynomials of smallest height over a lemniscate.

A search scans every nonzero integer polynomial of degree <= k*m with
coefficients in [-B, B], one representative per sign pair (P and -P have
the same height). Candidates are discarded in order of cost: first by the
leading-coefficient lower bound, then by the exact resultant lower bound,
and only the survivors are evaluated.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _scan
from .errors import HypothesisError, InputError
from .exact import resultant
from .heights import (
    DEFAULT_NODES,
    fmt_radius,
    fmt_real,
    lp_norm_batch,
    mahler_closed,
    mahler_closed_batch,
    sup_grid_batch,
    sup_norm,
)
from .lemniscate import Lemniscate
from .numbertheory import VerdictKind, kronecker_classify, monic_curve
from .polynomials import (
    IntPolynomial,
    compose,
    cyclotomic,
    euler_phi,
    factor,
    format_polynomial,
    is_irreducible,
)

DEFAULT_CAP = 10**8
ARGMIN_RTOL = 1e-9
FLOOR_TOL = 1e-9
PRUNE_MARGIN = 1e-8
COARSE_THETA = 2**10
FINE_THETA = 2**14
REFINE_RTOL = 1e-6

THEOREMS = ("auto", "MinH", "Llarge", "none")


def _fmt_p(p: float) -> str:
    return "inf" if p == math.inf else format(p, "g")


@dataclass(frozen=True)
class SearchSpec:
    lemniscate: Lemniscate
    k: int
    p: float
    coeff_bound: int
    prune: bool = True
    cap: int = DEFAULT_CAP
    theorem: str = "auto"
    n_nodes: int = DEFAULT_NODES
    n_theta: int = COARSE_THETA
    workers: int = 1

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise InputError("k must be a positive integer", k=self.k)
        if int(self.coeff_bound) != self.coeff_bound or self.coeff_bound < 1:
            raise InputError("coeff_bound must be a positive integer", coeff_bound=self.coeff_bound)
        p = float(self.p)
        if not (p >= 0):
            raise InputError("p must be 0, positive, or inf", p=self.p)
        object.__setattr__(self, "p", p)
        if self.theorem not in THEOREMS:
            raise InputError(f"theorem must be one of {THEOREMS}", theorem=self.theorem)
        if self.workers < 1:
            raise InputError("workers must be positive", workers=self.workers)

    @property
    def max_degree(self) -> int:
        return self.k * self.lemniscate.m

    def to_dict(self) -> dict:
        Lm = self.lemniscate
        return {
            "V": format_polynomial(Lm.V) if Lm.is_integer else [str(c) for c in Lm.coeffs],
            "r": fmt_radius(Lm.r),
            "k": self.k,
            "p": _fmt_p(self.p),
            "coeff_bound": self.coeff_bound,
            "prune": self.prune,
            "max_degree": self.max_degree,
        }


@dataclass(frozen=True)
class Regime:
    """Which extremal statement applies, decided in exact arithmetic for integer V."""

    case: str  # "i", "ii", "iii", "Llarge", "exploratory"
    theorem: str  # "MinH", "Llarge", "none"
    floor: float | None
    unique_constant: bool = False


def regime(Lm: Lemniscate, k: int) -> Regime:
    r = Lm.r
    if Lm.is_integer:
        a = abs(Lm.a_m)
        ra = r * a
        big = r / a
    else:
        a = abs(complex(Lm.a_m))
        ra = float(r) * a
        big = float(r) / a
    floor = float(r) ** k
    if ra < 1:
        return Regime("i", "MinH", floor)
    if ra == 1 and r < 1:
        return Regime("ii", "MinH", floor)
    if a == 1 and r == 1:
        return Regime("iii", "MinH", floor)
    if big >= 1:
        return Regime("Llarge", "Llarge", 1.0, unique_constant=big > 1)
    return Regime("exploratory", "none", None)


def _resolve(spec: SearchSpec) -> Regime:
    reg = regime(spec.lemniscate, spec.k)
    want = spec.theorem
    if want == "auto":
        want = reg.theorem
    if want == "MinH":
        if reg.theorem != "MinH":
            raise HypothesisError(
                "the minimal-height theorem needs 0 < r <= 1/|a_m|",
                r=str(spec.lemniscate.r),
                a_m=str(spec.lemniscate.a_m),
            )
        if not spec.lemniscate.is_integer:
            raise HypothesisError("the minimal-height theorem needs an integer V")
        if not is_irreducible(spec.lemniscate.V):
            raise HypothesisError(
                "the minimal-height theorem needs an irreducible V",
                V=format_polynomial(spec.lemniscate.V),
            )
        return reg
    if want == "Llarge":
        if reg.theorem == "MinH" and reg.case == "iii":
            return Regime("Llarge", "Llarge", 1.0, unique_constant=False)
        if reg.theorem != "Llarge":
            raise HypothesisError("the large-radius statement needs r / |a_m| >= 1", r=str(spec.lemniscate.r))
        return reg
    return Regime(reg.case if reg.theorem == "none" else "exploratory", "none", None)


@dataclass
class SearchResult:
    spec: SearchSpec
    min_value: float
    argmins: list[IntPolynomial]
    scanned: int
    pruned: int
    pruned_leading: int
    pruned_resultant: int
    case: str
    theorem: str
    floor: float | None
    matches_theorem: bool | None
    floor_violations: list[tuple[IntPolynomial, float]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "min_value": fmt_real(self.min_value),
            "argmins": [format_polynomial(P) for P in self.argmins],
            "scanned": self.scanned,
            "pruned": self.pruned,
            "case": self.case,
            "theorem": self.theorem,
            "floor": fmt_real(self.floor),
            "matches_theorem": self.matches_theorem,
            "floor_violations": [[format_polynomial(P), fmt_real(v)] for P, v in self.floor_violations],
            "notes": list(self.notes),
        }


def _seed(spec: SearchSpec) -> float:
    """Height of an in-box polynomial known exactly: 1, and V^k when it fits."""
    best = 1.0
    Lm = spec.lemniscate
    if Lm.is_integer:
        Vk = Lm.V ** spec.k
        if max(abs(c) for c in Vk.coeffs) <= spec.coeff_bound:
            best = min(best, float(Lm.r) ** spec.k)
    return best


def _resultant_lower_bound(P: IntPolynomial, V: IntPolynomial) -> float | None:
    res = resultant(P, V) if P.degree + V.degree else None
    if not res:
        return None
    return math.exp(math.log(abs(res)) / V.degree - P.degree / V.degree * math.log(abs(V.leading)))


@dataclass
class _ShardResult:
    rows: list
    values: list
    scanned: int = 0
    pruned_leading: int = 0
    pruned_resultant: int = 0


def _evaluate(rows: np.ndarray, spec: SearchSpec) -> np.ndarray:
    Lm = spec.lemniscate
    if spec.p == 0:
        return mahler_closed_batch(rows, Lm)
    if spec.p == math.inf:
        return sup_grid_batch(rows, Lm, spec.n_theta)
    return lp_norm_batch(rows, Lm, spec.p, spec.n_nodes)[0]


def _run_shard(rows: np.ndarray, n: int, spec: SearchSpec, threshold: float) -> _ShardResult:
    Lm = spec.lemniscate
    out = _ShardResult([], [], scanned=rows.shape[0])
    keep = np.ones(rows.shape[0], dtype=bool)
    if spec.prune:
        ratio = Lm.r_float / abs(complex(Lm.a_m))
        cheap = np.abs(rows[:, n].astype(float)) * ratio ** (n / Lm.m)
        keep = cheap <= threshold * (1 + PRUNE_MARGIN)
        out.pruned_leading = int(np.count_nonzero(~keep))
        if Lm.is_integer:
            for i in np.flatnonzero(keep):
                lb = _resultant_lower_bound(IntPolynomial(int(x) for x in rows[i]), Lm.V)
                if lb is not None and lb > threshold * (1 + PRUNE_MARGIN):
                    keep[i] = False
                    out.pruned_resultant += 1
    live = rows[keep]
    if live.shape[0]:
        out.rows = [tuple(int(x) for x in row) for row in live]
        out.values = [float(v) for v in _evaluate(live, spec)]
    return out


def min_height_search(spec: SearchSpec) -> SearchResult:
    """Smallest height over the coefficient box, with every sign-normalized argmin."""
    reg = _resolve(spec)
    Lm = spec.lemniscate
    total = _scan.box_size(spec.max_degree, spec.coeff_bound)
    _scan.check_cap(total, spec.cap)
    threshold = _seed(spec)
    jobs = [(rows, n) for _, n, rows in _scan.shards(spec.max_degree, spec.coeff_bound)]
    if spec.workers > 1:
        with ThreadPoolExecutor(spec.workers) as pool:
            parts = list(pool.map(lambda job: _run_shard(job[0], job[1], spec, threshold), jobs))
    else:
        parts = [_run_shard(rows, n, spec, threshold) for rows, n in jobs]

    values: dict[tuple, float] = {}
    for part in parts:
        values.update(zip(part.rows, part.values))
    notes = [f"exhaustive within the box: degree <= {spec.max_degree}, |coefficients| <= {spec.coeff_bound}"]
    if spec.p == math.inf:
        # grid maxima are lower bounds; refine everything that could still be minimal
        refined: set[tuple] = set()
        while True:
            best = min(values.values())
            todo = [c for c, v in values.items() if c not in refined and v <= best * (1 + REFINE_RTOL)]
            if reg.floor is not None:
                todo += [
                    c for c, v in values.items()
                    if c not in refined and c not in todo and v <= reg.floor * (1 + REFINE_RTOL)
                ]
            if not todo:
                break
            for c in todo:
                values[c] = max(values[c], sup_norm(IntPolynomial(c), Lm, FINE_THETA).value)
                refined.add(c)
        notes.append(f"sup norm: {spec.n_theta}-node grid, candidates near the minimum re-verified at {FINE_THETA}")
    min_value = min(values.values())
    argmins = sorted(
        (IntPolynomial(c) for c, v in values.items() if v <= min_value * (1 + ARGMIN_RTOL)),
        key=lambda P: (P.degree, P.coeffs),
    )
    violations = []
    matches = None
    if reg.floor is not None:
        violations = [
            (IntPolynomial(c), v) for c, v in values.items() if v < reg.floor - FLOOR_TOL
        ]
        matches = not violations and abs(min_value - reg.floor) <= FLOOR_TOL * max(1.0, reg.floor)
    if reg.theorem == "none":
        notes.append("no extremal statement covers this lemniscate; exploratory scan")
    pl = sum(p.pruned_leading for p in parts)
    pr = sum(p.pruned_resultant for p in parts)
    return SearchResult(
        spec=spec,
        min_value=min_value,
        argmins=argmins,
        scanned=sum(p.scanned for p in parts),
        pruned=pl + pr,
        pruned_leading=pl,
        pruned_resultant=pr,
        case=reg.case,
        theorem=reg.theorem,
        floor=reg.floor,
        matches_theorem=matches,
        floor_violations=violations,
        notes=notes,
    )


# -- uniqueness ----------------------------------------------------------------


def _normalized(P: IntPolynomial) -> IntPolynomial:
    return P.sign_normalized()


def _in_box(P: IntPolynomial, bound: int) -> bool:
    return max(abs(c) for c in P.coeffs) <= bound


def unit_height_pieces(V: IntPolynomial, max_degree: int) -> list[IntPolynomial]:
    """Irreducible divisors of V and of Phi_j(V) with degree <= max_degree.

    A factor of Phi_j(V) has degree at least phi(j), so only those j are
    tried; phi(j) >= sqrt(j / 2) bounds the range.
    """
    pieces = {f.coeffs: f for f, _ in factor(V) if f.degree >= 1}
    for j in range(1, 2 * max_degree * max_degree + 3):
        if euler_phi(j) > max_degree:
            continue
        for f, _ in factor(compose(cyclotomic(j), V)):
            if 1 <= f.degree <= max_degree:
                pieces.setdefault(f.coeffs, f)
    return sorted(pieces.values(), key=lambda f: (f.degree, f.coeffs))


def _products(pieces, max_degree, bound, cap=200_000):
    """Sign-normalized products of pieces (with repetition) of degree <= max_degree inside the box."""
    out = {(1,)}
    frontier = [(IntPolynomial([1]), 0)]
    while frontier:
        nxt = []
        for P, start in frontier:
            for idx in range(start, len(pieces)):
                Q = P * pieces[idx]
                if Q.degree > max_degree:
                    continue
                nxt.append((Q, idx))
                if _in_box(Q, bound):
                    out.add(_normalized(Q).coeffs)
                if len(out) > cap:
                    raise HypothesisError("predicted minimizer set too large to enumerate", cap=cap)
        frontier = nxt
    return {IntPolynomial(c) for c in out}


@dataclass
class UniquenessReport:
    case: str
    p: float
    found: list[IntPolynomial]
    predicted: list[IntPolynomial] | None
    matches: bool
    extras: list[IntPolynomial]
    missing: list[IntPolynomial]
    corrected_predicted: list[IntPolynomial] | None = None
    matches_corrected: bool | None = None
    classifications: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    result: SearchResult | None = None

    def to_dict(self) -> dict:
        fmt = lambda ps: None if ps is None else [format_polynomial(P) for P in ps]  # noqa: E731
        return {
            "case": self.case,
            "p": _fmt_p(self.p),
            "found": fmt(self.found),
            "predicted": fmt(self.predicted),
            "matches": self.matches,
            "extras": fmt(self.extras),
            "missing": fmt(self.missing),
            "corrected_predicted": fmt(self.corrected_predicted),
            "matches_corrected": self.matches_corrected,
            "classifications": dict(self.classifications),
            "notes": list(self.notes),
        }


def _sorted(ps):
    return sorted(ps, key=lambda P: (P.degree, P.coeffs))


def verify_uniqueness(spec: SearchSpec, result: SearchResult | None = None) -> UniquenessReport:
    """Compare the argmins of a search with the minimizers the theorem predicts.

    In the case |a_m| = r = 1 every power V^d with 0 <= d <= k has height
    r^d = 1, so the stated set {+-V^k, +-1} is reported alongside the
    corrected set {+-V^d : 0 <= d <= k}.
    """
    if spec.theorem not in ("auto", "MinH"):
        raise HypothesisError("uniqueness is verified for the minimal-height theorem only")
    spec_minh = spec if spec.theorem == "MinH" else _with_theorem(spec, "MinH")
    if result is None:
        result = min_height_search(spec_minh)
    else:
        _resolve(spec_minh)
    Lm = spec.lemniscate
    V = Lm.V
    found = list(result.argmins)
    found_set = {P.coeffs for P in found}
    case, p, k, B = result.case, spec.p, spec.k, spec.coeff_bound
    notes = list(result.notes)

    def boxed(ps):
        return _sorted({_normalized(P).coeffs: _normalized(P) for P in ps if _in_box(P, B)}.values())

    Vk = V ** k
    corrected = None
    classifications = {}
    if case == "i" or (case == "ii" and p > 0):
        predicted = boxed([Vk])
        pred_set = {P.coeffs for P in predicted}
        matches = found_set == pred_set
    elif case == "ii":
        predicted = boxed([Vk])
        pred_set = {P.coeffs for P in predicted}
        matches = pred_set <= found_set
        notes.append("p = 0 on the boundary r = 1/|a_m|: extra minimizers are permitted and reported")
    elif case == "iii" and p > 0:
        predicted = boxed([Vk, IntPolynomial([1])])
        pred_set = {P.coeffs for P in predicted}
        matches = found_set == pred_set
        corrected = boxed([V**d for d in range(k + 1)])
        notes.append("every V^d with 0 <= d <= k has height 1 when |a_m| = r = 1; see corrected_predicted")
    else:
        # |a_m| = r = 1, p = 0: minimizers are the unit-height polynomials
        Vm = monic_curve(Lm)
        pieces = unit_height_pieces(Vm, spec.max_degree)
        predicted = _sorted(_products(pieces, spec.max_degree, B))
        pred_set = {P.coeffs for P in predicted}
        matches = found_set == pred_set
        for P in found:
            verdicts = []
            for f, _ in factor(P):
                if f.degree < 1:
                    verdicts.append("constant")
                    continue
                v = kronecker_classify(f, Lemniscate(Vm, 1), mahler=mahler_closed(f, Lm))
                label = v.kind.value + (f"({v.cyclotomic_index})" if v.cyclotomic_index else "")
                verdicts.append(f"{format_polynomial(f)}: {label}")
                if v.kind is VerdictKind.NOT_UNIT_HEIGHT:
                    matches = False
            classifications[format_polynomial(P)] = verdicts
        notes.append("p = 0 with |a_m| = r = 1: minimizers checked against divisors of V and of Phi_j(V)")
    extras = _sorted(P for P in found if P.coeffs not in pred_set)
    missing = _sorted(P for P in predicted if P.coeffs not in found_set)
    matches_corrected = None
    if corrected is not None:
        matches_corrected = found_set == {P.coeffs for P in corrected}
    return UniquenessReport(
        case=case,
        p=p,
        found=found,
        predicted=predicted,
        matches=bool(matches) and bool(result.matches_theorem),
        extras=extras,
        missing=missing,
        corrected_predicted=corrected,
        matches_corrected=matches_corrected,
        classifications=classifications,
        notes=notes,
        result=result,
    )


def _with_theorem(spec: SearchSpec, theorem: str) -> SearchSpec:
    from dataclasses import replace

    return replace(spec, theorem=theorem)
