"""Heights of integer polynomials over lemniscates |V(z)| = r."""

from ._backend import NAME as BACKEND
from .errors import (
    ConvergenceError,
    DegenerateError,
    HypothesisError,
    IndexExhaustedError,
    InputError,
    LemHeightsError,
    ResourceCapError,
    SingularIntegrandError,
    StepTooCoarseError,
)
from .exact import bareiss_determinant, level_resultant, resultant, sylvester
from .heights import (
    height,
    height_report,
    lp_norm,
    mahler_closed,
    mahler_quadrature,
    resultant_bound,
    subordination_check,
    sup_norm,
)
from .lemniscate import (
    Lemniscate,
    Region,
    capacity,
    classify,
    equilibrium_average,
    equilibrium_potential,
    green,
    trace,
)
from .numbertheory import (
    enumerate_conjugate_sets,
    kronecker_classify,
    lehmer_scan,
    lift_measure_identity,
    no_sets_below_one,
)
from .polynomials import (
    LEHMER,
    ComplexPolynomial,
    IntPolynomial,
    compose,
    cyclotomic,
    factor,
    format_polynomial,
    parse_polynomial,
)
from .rootfinding import RootSet, roots
from .search import SearchSpec, min_height_search, verify_uniqueness

__version__ = "0.1.0"


__all__ = [
    "BACKEND",
    "ComplexPolynomial",
    "ConvergenceError",
    "DegenerateError",
    "HypothesisError",
    "IndexExhaustedError",
    "InputError",
    "IntPolynomial",
    "LEHMER",
    "LemHeightsError",
    "Lemniscate",
    "Region",
    "ResourceCapError",
    "RootSet",
    "SearchSpec",
    "SingularIntegrandError",
    "StepTooCoarseError",
    "bareiss_determinant",
    "capacity",
    "classify",
    "compose",
    "cyclotomic",
    "enumerate_conjugate_sets",
    "equilibrium_average",
    "equilibrium_potential",
    "factor",
    "format_polynomial",
    "green",
    "height",
    "height_report",
    "kronecker_classify",
    "lehmer_scan",
    "level_resultant",
    "lift_measure_identity",
    "lp_norm",
    "mahler_closed",
    "mahler_quadrature",
    "min_height_search",
    "no_sets_below_one",
    "parse_polynomial",
    "resultant",
    "resultant_bound",
    "roots",
    "subordination_check",
    "sup_norm",
    "sylvester",
    "trace",
    "verify_uniqueness",
]
