import json
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import oracles
from strategies import int_polys, lemniscates
from lemheights.errors import InputError, SingularIntegrandError
from lemheights.heights import (
    fmt_radius,
    fmt_real,
    height,
    height_report,
    lp_norm,
    lp_norm_batch,
    mahler_closed,
    mahler_closed_batch,
    mahler_quadrature,
    resultant_bound,
    subordination_check,
    sup_grid_batch,
    sup_norm,
)
from lemheights.lemniscate import Lemniscate, critical_values
from lemheights.polynomials import LEHMER, ComplexPolynomial, IntPolynomial, parse_polynomial
from lemheights.rootfinding import roots

P = parse_polynomial


def L(V, r):
    return Lemniscate(V, r)


def _clear_of_curve(Pc, Lm, margin):
    if Pc.degree == 0:
        return True
    vz = np.abs(Lm.V.to_complex()(roots(Pc).roots))
    return bool(np.all(np.abs(vz - Lm.r_float) > margin * Lm.r_float))


# -- closed form ---------------------------------------------------------------


def test_mahler_examples():
    Lm = L("z^2-2", "1/2")
    assert mahler_closed(P("z"), Lm) == pytest.approx(math.sqrt(2), rel=1e-14)
    assert mahler_closed(LEHMER, L("z", 1)) == pytest.approx(1.176280818, abs=1e-9)
    assert mahler_closed(P("7"), Lm) == 7
    assert mahler_closed(P("-7"), Lm) == 7


@pytest.mark.parametrize("V, r", [("z^2-2", "1/2"), ("z", 1), ("2*z^2-1", "1/2"), ("z^3-z+1", 2)])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_mahler_of_curve_power(V, r, k):
    Lm = L(V, r)
    assert mahler_closed(Lm.V**k, Lm) == pytest.approx(Lm.r_float**k, rel=1e-12)


def test_mahler_frozen(frozen):
    for case in frozen["mahler"]:
        Lm = L(IntPolynomial(case["V"]), case["r"])
        got = mahler_closed(IntPolynomial(case["P"]), Lm)
        assert got == pytest.approx(float(case["value"]), rel=1e-12), case


def test_mahler_rejects_zero():
    with pytest.raises(InputError):
        mahler_closed(IntPolynomial(), L("z", 1))
    with pytest.raises(InputError):
        mahler_closed(ComplexPolynomial([0.0]), L("z", 1))


@settings(max_examples=200)
@given(int_polys(max_degree=5, bound=6), int_polys(max_degree=5, bound=6), lemniscates())
def test_multiplicativity(A, B, Lm):
    lhs = mahler_closed(A * B, Lm)
    rhs = mahler_closed(A, Lm) * mahler_closed(B, Lm)
    assert lhs == pytest.approx(rhs, rel=1e-9)


@given(int_polys(max_degree=10, bound=10, min_degree=1))
def test_classical_reduction(Pc):
    got = mahler_closed(Pc, L("z", 1))
    ref = float(oracles.mp_classical_mahler(Pc.coeffs))
    assert got == pytest.approx(ref, rel=1e-12)


@given(int_polys(max_degree=6, bound=8), lemniscates())
def test_leading_coefficient_lower_bound(Pc, Lm):
    n = Pc.degree
    lb = abs(Pc.leading) * (Lm.r_float / abs(Lm.a_m)) ** (n / Lm.m)
    assert mahler_closed(Pc, Lm) >= lb * (1 - 1e-12)


@given(int_polys(max_degree=6, bound=6, min_degree=1), lemniscates())
def test_closed_against_mpmath_oracle(Pc, Lm):
    ref = float(oracles.mp_mahler(Pc.coeffs, Lm.V.coeffs, Lm.r))
    # roots of P on L make max(r, |V|) kink; allow the root error there
    tol = 1e-12 if _clear_of_curve(Pc, Lm, 1e-6) else 1e-7
    assert mahler_closed(Pc, Lm) == pytest.approx(ref, rel=tol)


def test_repeated_roots_keep_precision():
    Lm = L("z^2-1", 1)
    Q = P("z^2-2") ** 4
    assert mahler_closed(Q, Lm) == pytest.approx(1.0, rel=1e-13)


@given(st.integers(0, 4), st.integers(1, 3), lemniscates(max_degree=2, bound=3))
def test_batch_matches_single(n, B, Lm):
    rng = np.random.default_rng(n * 31 + B)
    rows = rng.integers(-B, B + 1, size=(30, n + 1))
    rows[:, -1] = rng.integers(1, B + 1, size=30)
    batch = mahler_closed_batch(rows, Lm)
    single = [mahler_closed(IntPolynomial(row.tolist()), Lm) for row in rows]
    assert np.allclose(batch, single, rtol=1e-9)


def test_batch_handles_repeated_root_on_curve():
    # (z - 1)^2 over the unit circle: the double root sits on L
    Lm = L("z", 1)
    rows = np.array([[1, -2, 1], [2, -3, 1], [1, 0, 1]])
    assert np.allclose(mahler_closed_batch(rows, Lm), [1.0, 2.0, 1.0], rtol=1e-12)


# -- quadrature ----------------------------------------------------------------


def test_quadrature_examples():
    assert mahler_quadrature(P("1"), L("z^2-1", 2)).value == pytest.approx(1.0, abs=1e-15)
    assert mahler_quadrature(P("z-2"), L("z", 1), 2**10).value == pytest.approx(2.0, abs=1e-10)
    assert mahler_quadrature(P("z"), L("z^2-2", "1/2")).value == pytest.approx(math.sqrt(2), rel=1e-8)


def test_quadrature_refuses_root_on_curve():
    with pytest.raises(SingularIntegrandError):
        mahler_quadrature(P("z-1"), L("z", 1))


@given(int_polys(max_degree=5, bound=5, min_degree=1), lemniscates())
def test_closed_quadrature_agreement(Pc, Lm):
    assume(_clear_of_curve(Pc, Lm, 0.02))
    assume(not np.any(np.abs(critical_values(Lm) - Lm.r_float) <= 0.02 * Lm.r_float))
    q = mahler_quadrature(Pc, Lm, 2**12)
    assert q.value == pytest.approx(mahler_closed(Pc, Lm), rel=1e-8)


# -- L_p and sup norms -----------------------------------------------------------


def test_lp_examples(frozen):
    nv = frozen["norms"]
    circle = L("z", 1)
    for p in (0.5, 1, 3):
        assert lp_norm(P("z^4"), circle, p).value == pytest.approx(1.0, rel=1e-14)
    assert lp_norm(P("z+1"), circle, 2).value == pytest.approx(float(nv["circle_zp1_l2"]), rel=1e-12)
    # |1 + e^it| has a zero on the circle: the trapezoidal rule converges algebraically there
    assert lp_norm(P("z+1"), circle, 1, 2**14).value == pytest.approx(float(nv["circle_zp1_l1"]), rel=1e-8)
    assert lp_norm(P("z+1"), circle, 4).value == pytest.approx(float(nv["circle_zp1_l4"]), rel=1e-12)
    Lm = L("z^2-2", "1/2")
    assert lp_norm(Lm.V, Lm, 4).value == pytest.approx(0.5, rel=1e-13)


def test_lp_rejects_bad_p():
    for p in (0, -1, math.inf):
        with pytest.raises(InputError):
            lp_norm(P("z"), L("z", 1), p)


def test_sup_examples(frozen):
    assert sup_norm(P("z+1"), L("z", 1)).value == pytest.approx(2.0, rel=1e-12)
    Lm = L("z^2-2", "1/2")
    assert sup_norm(Lm.V**2, Lm).value == pytest.approx(0.25, rel=1e-13)
    assert sup_norm(P("z"), L("z^2-1", 1)).value == pytest.approx(float(frozen["norms"]["bernoulli_z_sup"]), rel=1e-12)


@given(int_polys(max_degree=5, bound=5, min_degree=1), lemniscates(max_degree=2))
def test_sup_at_least_grid(Pc, Lm):
    s = sup_norm(Pc, Lm, 1024)
    assert s.value >= s.grid_value
    assert abs(abs(complex(Lm.V.to_complex()(s.point))) - Lm.r_float) <= 1e-9 * max(1.0, Lm.r_float)
    assert abs(complex(Pc.to_complex()(s.point))) == pytest.approx(s.value, rel=1e-12)


def test_height_dispatch():
    Lm = L("z", 1)
    Q = P("z+1")
    assert height(Q, Lm, 0) == mahler_closed(Q, Lm)
    assert height(Q, Lm, math.inf) == sup_norm(Q, Lm).value
    assert height(Q, Lm, 2) == lp_norm(Q, Lm, 2).value


@given(st.sampled_from([0.5, 1.0, 2.0, 3.0]), lemniscates(max_degree=2, bound=3))
def test_batch_norms_match_single(p, Lm):
    rows = np.array([[1, 2, 1], [3, 0, -1], [0, 0, 2], [-1, 1, 1]])
    vals, errs = lp_norm_batch(rows, Lm, p, 256)
    for row, v in zip(rows, vals):
        assert v == pytest.approx(lp_norm(IntPolynomial(row.tolist()), Lm, p, 256).value, rel=1e-12)
    sups = sup_grid_batch(rows, Lm, 256)
    for row, s in zip(rows, sups):
        assert s == pytest.approx(sup_norm(IntPolynomial(row.tolist()), Lm, 256).grid_value, rel=1e-13)


# -- bounds and subordination ------------------------------------------------------


def test_resultant_bound_examples():
    Lm = L("z^2-2", "1/2")
    rb = resultant_bound(Lm.V, Lm)
    assert rb.bound == 0 and rb.holds and rb.mahler == pytest.approx(0.5)
    rb = resultant_bound(P("z-2"), L("z", 1))
    assert rb.bound == pytest.approx(2.0) and rb.mahler == pytest.approx(2.0) and rb.equality_case
    rb = resultant_bound(P("z-2"), L("z^2-1", 1))
    assert rb.bound == pytest.approx(math.sqrt(3), rel=1e-14)
    assert rb.mahler == pytest.approx(math.sqrt(3), rel=1e-14)


@given(int_polys(max_degree=6, bound=6), lemniscates())
def test_resultant_bound_holds(Pc, Lm):
    rb = resultant_bound(Pc, Lm)
    assert rb.holds
    if rb.equality_case and rb.resultant != 0:
        assert rb.bound == pytest.approx(rb.mahler, rel=1e-9)


def test_resultant_bound_needs_integer_curve():
    with pytest.raises(InputError):
        resultant_bound(P("z"), L(ComplexPolynomial([0.5j, 1.0]), 1))


def test_subordination_examples(frozen):
    rep = subordination_check(P("z+1"), L("z", 1), [1, 2, 4], n_nodes=2**14)
    assert rep.ok, rep.violations
    assert rep.mahler == pytest.approx(1.0, rel=1e-12)
    assert rep.lp[1.0] == pytest.approx(4 / math.pi, rel=1e-8)
    assert rep.sup == pytest.approx(2.0, rel=1e-12)
    Lm = L("z^2-2", "1/2")
    rep = subordination_check(Lm.V, Lm, [1, 2])
    assert rep.ok
    assert all(v == pytest.approx(0.5, rel=1e-12) for v in [rep.mahler, rep.sup, *rep.lp.values()])


@given(int_polys(max_degree=6, bound=6), lemniscates(max_degree=2))
def test_subordination_property(Pc, Lm):
    rep = subordination_check(Pc, Lm, [0.5, 1, 2, 4, 8], n_nodes=1024, n_theta=1024)
    assert rep.ok, rep.violations


# -- report ------------------------------------------------------------------------


def test_height_report_json():
    rep = height_report(P("z"), L("z^2-2", "1/2"), p_grid=[1, 2])
    d = rep.to_dict()
    json.dumps(d)
    assert d["polynomial"] == "z"
    assert d["lemniscate"] == {"V": "z^2-2", "r": "0.5"}
    assert d["heights"]["mahler"] == "1.41421356237309"
    assert set(d["heights"]["lp"]) == {"1", "2"}
    assert d["bounds"]["resultant"] is not None


def test_report_marks_refused_quadrature():
    rep = height_report(P("z-1"), L("z", 1))
    assert rep.mahler_quadrature is None
    assert any("refused" in n for n in rep.method_notes)


def test_formatting():
    assert fmt_real(1 / 3) == "0.333333333333333"
    assert fmt_real(math.inf) == "inf"
    from fractions import Fraction

    assert fmt_radius(Fraction(1, 2)) == "0.5"
    assert fmt_radius(Fraction(3)) == "3"
    assert fmt_radius(Fraction(1, 3)) == "0.333333333333333"
