import csv
import io
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

import oracles
from strategies import lemniscates
from lemheights.errors import InputError, SingularIntegrandError, StepTooCoarseError
from lemheights.lemniscate import (
    Lemniscate,
    Region,
    capacity,
    classify,
    critical_values,
    equilibrium_average,
    equilibrium_potential,
    green,
    level_sweep,
    parse_radius,
    trace,
)


def L(V, r):
    return Lemniscate(V, r)


# -- construction ---------------------------------------------------------------


def test_radius_parsing():
    assert parse_radius("1/2") == Fraction(1, 2)
    assert parse_radius("0.5") == Fraction(1, 2)
    assert parse_radius(2) == 2
    for bad in ("0", "-1", "abc", "1/0"):
        with pytest.raises(InputError):
            parse_radius(bad)


def test_constant_curve_rejected():
    with pytest.raises(InputError):
        L("3", 1)


def test_equality_and_hash():
    assert L("z^2-1", "1/2") == L([-1, 0, 1], 0.5)
    assert len({L("z", 1), L("z", "1")}) == 1


# -- classification and closed-form potential theory ------------------------------


def test_classify_examples():
    assert classify(L("z", 1), 0) is Region.INTERIOR
    assert classify(L("z^2-1", 1), math.sqrt(2)) is Region.ON_CURVE
    assert classify(L("z^2-1", 1), 2) is Region.EXTERIOR


def test_capacity_examples(frozen):
    pot = frozen["potential"]
    assert capacity(L("z", 1)) == 1
    assert capacity(L("z^2-2", "1/2")) == pytest.approx(float(pot["capacity_z2m2_half"]), rel=1e-15)
    assert capacity(L("2*z^2-1", "1/2")) == pytest.approx(float(pot["capacity_2z2m1_half"]), rel=1e-15)


def test_green_examples(frozen):
    assert green(L("z", 1), math.e) == pytest.approx(1.0, rel=1e-15)
    assert green(L("z", 1), 0.3j) == 0
    assert green(L("z^2-1", 1), 2) == pytest.approx(float(frozen["potential"]["green_z2m1_1_at2"]), rel=1e-14)


def test_potential_examples(frozen):
    pot = frozen["potential"]
    Lm = L("z^2-2", "1/2")
    assert equilibrium_potential(L("z", 1), 0) == 0
    assert equilibrium_potential(Lm, 0) == pytest.approx(float(pot["potential_z2m2_half_at0"]), rel=1e-14)
    inside = math.sqrt(2)  # V(sqrt 2) = 0, so this point is inside a component
    assert equilibrium_potential(Lm, inside) == pytest.approx(float(pot["potential_z2m2_half_inside"]), rel=1e-14)


@given(lemniscates(), st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False))
def test_green_potential_relation(Lm, z):
    if classify(Lm, z) is Region.EXTERIOR:
        lhs = equilibrium_potential(Lm, z) - math.log(capacity(Lm))
        assert lhs == pytest.approx(green(Lm, z), abs=1e-12)
    else:
        assert green(Lm, z) == 0


@given(lemniscates())
def test_potential_continuous_across_curve(Lm):
    pts = level_sweep(Lm, 16)[:16].ravel()
    inside_value = math.log(Lm.r_float / abs(Lm.a_m)) / Lm.m
    assert np.allclose(equilibrium_potential(Lm, pts), inside_value, atol=1e-9)


# -- tracing ---------------------------------------------------------------------


def test_trace_unit_circle():
    tr = trace(L("z", 1), 64)
    assert len(tr.components) == 1
    assert tr.monodromy == (0,)
    pts = tr.components[0][:64]
    assert np.allclose(pts, np.exp(2j * np.pi * np.arange(64) / 64), atol=1e-14)


def test_trace_cassini_two_ovals():
    tr = trace(L("z^2-1", "1/2"), 256)
    assert len(tr.components) == 2
    assert tr.monodromy == (0, 1)
    for comp in tr.components:
        assert np.max(np.abs(np.abs(comp**2 - 1) - 0.5)) <= 1e-9
    # one oval around each of +1 and -1
    centres = sorted(float(np.mean(c.real)) for c in tr.components)
    assert centres[0] < 0 < centres[1]


def test_trace_large_radius_single_curve():
    tr = trace(L("z^2-1", 2), 256)
    assert len(tr.components) == 1
    assert tr.monodromy == (1, 0)
    assert tr.max_residual <= 1e-9


def test_trace_near_critical_warns():
    # r = 1 is the critical value |V(0)| of z^2 - 1: the figure-eight lemniscate
    tr = trace(L("z^2-1", 1), 256)
    assert any("near-critical" in w for w in tr.warnings)


def test_trace_too_coarse():
    with pytest.raises(InputError):
        trace(L("z", 1), 8)
    with pytest.raises(StepTooCoarseError):
        # just above the figure-eight: the branches pass within ~0.03 of each other
        trace(L("z^2-1", "1001/1000"), 16)


@given(lemniscates(max_degree=4))
def test_trace_properties(Lm):
    crit = critical_values(Lm)
    assume(not np.any(np.abs(crit - Lm.r_float) <= 0.05 * Lm.r_float))
    try:
        tr = trace(Lm, 512)
    except StepTooCoarseError:
        assume(False)
    assert sorted(tr.monodromy) == list(range(Lm.m))
    cycles = 0
    seen = set()
    for s in range(Lm.m):
        if s not in seen:
            cycles += 1
            j = s
            while j not in seen:
                seen.add(j)
                j = tr.monodromy[j]
    assert len(tr.components) == cycles
    assert tr.max_residual <= 1e-9
    step = 2 * np.pi * Lm.r_float ** (1 / Lm.m)
    for comp in tr.components:
        # closure: the appended final point is the first point again
        assert abs(comp[-1] - comp[0]) <= 1e-8 * max(1.0, step)


def test_trace_csv_format(tmp_path):
    tr = trace(L("z^2-1", 2), 32)
    text = tr.to_csv(tmp_path / "t.csv")
    assert (tmp_path / "t.csv").read_text() == text
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["component_id", "theta", "re", "im"]
    thetas = [float(r[1]) for r in rows[1:]]
    assert thetas == sorted(thetas)
    assert len(rows) == 1 + 2 * 32 + 1


def test_bernoulli_trace_matches_explicit_branches():
    Lm = L("z^2-1", 1)
    Z = level_sweep(Lm, 64)[:64]
    for k in (1, 7, 30):
        theta = 2 * math.pi * k / 64
        key = lambda c: (c.real, c.imag)  # noqa: E731
        ref = sorted((complex(x) for x in oracles.bernoulli_branches(1, theta)), key=key)
        got = sorted((complex(x) for x in Z[k]), key=key)
        assert np.allclose(got, ref, atol=1e-13)


# -- equilibrium averages -------------------------------------------------------


@given(lemniscates())
def test_average_of_constant(Lm):
    q = equilibrium_average(Lm, lambda Z: np.ones(Z.shape), 64)
    assert q.value == pytest.approx(1.0, abs=1e-15)


def test_average_jensen():
    q = equilibrium_average(L("z", 1), lambda Z: np.log(np.abs(Z - 2)), 1024)
    assert q.value == pytest.approx(math.log(2), abs=1e-13)


def test_average_log_abs_z():
    Lm = L("z^2-2", "1/2")
    q = equilibrium_average(Lm, lambda Z: np.log(np.abs(Z)), 4096)
    assert q.value == pytest.approx(0.5 * math.log(2), abs=1e-12)
    assert q.value == pytest.approx(equilibrium_potential(Lm, 0), abs=1e-12)


def test_quadrature_convergence_on_doubling():
    Lm = L("z^2-2", "1/2")
    f = lambda Z: np.log(np.abs(Z))  # noqa: E731
    a = equilibrium_average(Lm, f, 2**10).value
    b = equilibrium_average(Lm, f, 2**11).value
    assert abs(a - b) < 1e-10


def test_average_node_count_validation():
    with pytest.raises(InputError):
        equilibrium_average(L("z", 1), lambda Z: Z.real, 100)
    with pytest.raises(InputError):
        equilibrium_average(L("z", 1), lambda Z: Z.real, 8)


def test_singular_refusal():
    with pytest.raises(SingularIntegrandError):
        equilibrium_average(L("z", 1), lambda Z: np.log(np.abs(Z - 1)), 256, singular_points=[1.0])


@given(lemniscates(), st.complex_numbers(max_magnitude=4, allow_nan=False, allow_infinity=False))
def test_potential_consistency(Lm, z):
    # keep z and the critical values clear of the curve so the trapezoidal rule converges fast
    v = abs(complex(Lm.V.to_complex()(z)))
    assume(abs(v - Lm.r_float) > 0.02 * Lm.r_float)
    assume(not np.any(np.abs(critical_values(Lm) - Lm.r_float) <= 0.02 * Lm.r_float))
    q = equilibrium_average(Lm, lambda Z: np.log(np.abs(Z - z)), 4096, singular_points=[z])
    assert q.value == pytest.approx(equilibrium_potential(Lm, z), abs=1e-8)


def test_average_is_deterministic():
    Lm = L("z^3-2*z+1", "3/2")
    f = lambda Z: np.abs(Z) ** 3  # noqa: E731
    assert equilibrium_average(Lm, f, 512).value == equilibrium_average(Lm, f, 512).value
