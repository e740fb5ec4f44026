import io
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from capgroup import (
    UNIT,
    CapFactor,
    Event,
    EvolutionCurve,
    NotInvertibleError,
    TranslatedTimeLine,
    UnsupportedTangentError,
    capital_evolution,
    centered_product,
    double_translate_unit,
    eval_factor,
    evolve,
    exp_map,
    f_product,
    force_of_interest,
    tangent,
    translated_add,
    translated_neg,
)
from capgroup.evolution import homomorphism_residual, tangent_fd, time_grid, unit_evolution, write_csv

from conftest import BUILTIN, EXP5, POLY

E0 = Event(1, 2, 100)


def close(a, b, rtol=1e-9, atol=1e-12):
    return all(math.isclose(x, y, rel_tol=rtol, abs_tol=atol) for x, y in zip(a, b))


def formula_curve(f, e0, t):
    t0, h0, c0 = e0
    return (t, h0 + t - t0, c0 * eval_factor(f, -h0) * eval_factor(f, h0 + t - t0))


def test_evolve_examples(factor):
    assert close(evolve(EvolutionCurve(UNIT, EXP5), 2.0), (2, 2, 1.1051709180756477), rtol=1e-15)
    assert close(evolve(EvolutionCurve(E0, EXP5), 3.0), (3, 4, 110.51709180756477), rtol=1e-14)
    assert close(evolve(EvolutionCurve(E0, POLY), 3.0), (3, 4, 116.8826203089869), rtol=1e-14)
    curve = EvolutionCurve(E0, factor)
    assert evolve(curve, 1.0) == E0
    for t in (-7.5, 0.0, 2.25, 13.0):
        assert close(evolve(curve, t), formula_curve(factor, E0, t), rtol=1e-13)
        assert close(evolve(EvolutionCurve(UNIT, factor), t), (t, t, eval_factor(factor, t)), rtol=1e-13)


def test_capital_evolution_examples():
    assert capital_evolution(EvolutionCurve(E0, EXP5), 1.0) == 100.0
    assert capital_evolution(EvolutionCurve(E0, EXP5), 3.0) == pytest.approx(110.51709180756477, rel=1e-14)
    assert capital_evolution(EvolutionCurve(Event(0, 0, -1), EXP5), 1.0) == pytest.approx(-1.0512710963760241, rel=1e-15)


def test_tangent_examples():
    assert close(tangent(EvolutionCurve(E0, EXP5), 1.0).direction, (1, 1, 5), rtol=1e-15)
    assert close(tangent_fd(EvolutionCurve(E0, EXP5), 1.0), (1, 1, 5), rtol=1e-8)
    assert close(tangent(EvolutionCurve(UNIT, EXP5), 0.0).direction, (1, 1, 0.05), rtol=1e-15)
    flat = EvolutionCurve(UNIT, CapFactor.exponential(0.0))
    for t in (-3.0, 0.0, 8.0):
        assert tangent(flat, t).direction == (1.0, 1.0, 0.0)


def test_tangent_reports_derivative_source():
    assert tangent(EvolutionCurve(E0, EXP5), 0.0).derivative_source == "analytic"
    assert tangent(EvolutionCurve(E0, BUILTIN["table"]), 0.0).derivative_source == "finite_difference"


def test_translated_time_line():
    line = TranslatedTimeLine(2.0)
    assert translated_add(line, 5, 7) == 10
    assert translated_add(line, 5, 2) == 5
    assert translated_neg(line, 5) == -1
    assert translated_add(line, 5, translated_neg(line, 5)) == 2
    assert line.neutral == 2


def test_double_translate_examples(factor):
    assert close(double_translate_unit(factor, E0, 1.0), E0, rtol=1e-14)
    assert close(double_translate_unit(EXP5, E0, 3.0), (3, 4, 110.51709180756477), rtol=1e-14)
    for t in (-4.0, 0.5, 9.0):
        assert close(double_translate_unit(factor, UNIT, t), unit_evolution(factor, t), rtol=1e-14)


def test_exp_map_examples():
    curve, tan = exp_map(EXP5, 0.0, UNIT)
    assert curve == EvolutionCurve(UNIT, EXP5)
    assert close(tan.direction, (1, 1, 0.05), rtol=1e-15)
    _, tan = exp_map(EXP5, 1.0, E0)
    assert close(tan.direction, (1, 1, 5), rtol=1e-15)
    assert tan.at == E0
    with pytest.raises(NotInvertibleError):
        exp_map(EXP5, 0.0, Event(0, 0, 0))


def test_exp_map_rejects_other_directions():
    exp_map(EXP5, 1.0, E0, direction=(1, 1, 5))
    with pytest.raises(UnsupportedTangentError):
        exp_map(EXP5, 1.0, E0, direction=(1, 2, 5))


def test_exp_map_with_separate_time_origin(factor):
    # the double translation t -> mu_o(t - t0) e0 for t0 != e0.t
    curve, _ = exp_map(factor, 4.0, E0)
    assert evolve(curve, 4.0) == E0
    for t in (-2.0, 4.0, 7.5):
        assert close(evolve(curve, t), double_translate_unit(factor, E0, t, t0=4.0), rtol=1e-13)
    pairs = [(-3.0, 6.0), (4.0, 11.0), (0.5, -8.0)]
    assert homomorphism_residual(curve, pairs) <= 1e-12


time = st.floats(min_value=-20, max_value=20, allow_nan=False)
coord = st.floats(min_value=-10, max_value=10, allow_nan=False)
capital = st.floats(min_value=-100, max_value=100, allow_nan=False).filter(lambda c: abs(c) >= 1e-3)
events = st.builds(Event, coord, coord, capital)
factors = st.sampled_from(sorted(BUILTIN))


@given(factors, time, time)
def test_one_parameter_group_at_unit(name, t, t2):
    f = BUILTIN[name]
    assert close(f_product(f, unit_evolution(f, t), unit_evolution(f, t2)), unit_evolution(f, t + t2))


@given(factors, events, time, time)
def test_homomorphism(name, e0, t, t2):
    curve = EvolutionCurve(e0, BUILTIN[name])
    lhs = centered_product(curve.factor, e0, evolve(curve, t), evolve(curve, t2))
    assert close(lhs, evolve(curve, curve.time_line.add(t, t2)))


@given(factors, events, time)
def test_double_translation(name, e0, t):
    f = BUILTIN[name]
    assert close(double_translate_unit(f, e0, t), evolve(EvolutionCurve(e0, f), t))


@given(factors, events)
def test_tangent_at_origin(name, e0):
    f = BUILTIN[name]
    d = tangent(EvolutionCurve(e0, f), e0.t).direction
    assert d[:2] == (1.0, 1.0)
    assert d[2] == pytest.approx(e0.c * force_of_interest(f, e0.h), rel=1e-12, abs=1e-300)


@given(st.sampled_from(["exp5", "exp20", "poly"]), events, time)
def test_tangent_matches_finite_differences(name, e0, t):
    curve = EvolutionCurve(e0, BUILTIN[name])
    an, fd = tangent(curve, t).direction, tangent_fd(curve, t)
    scale = max(1.0, max(abs(v) for v in evolve(curve, t)) / max(1.0, abs(t)))
    assert all(abs(a - b) <= 1e-6 * max(scale, abs(b)) for a, b in zip(an, fd))


@given(factors, events, time)
def test_sign_preserved(name, e0, t):
    c = capital_evolution(EvolutionCurve(e0, BUILTIN[name]), t)
    assert math.copysign(1.0, c) == math.copysign(1.0, e0.c) and c != 0


def test_perturbed_capital_breaks_homomorphism(factor):
    eps = 1e-3
    rng = np.random.default_rng(7)
    curve = EvolutionCurve(E0, factor)
    pairs = rng.uniform(-20, 20, size=(50, 2))
    assert homomorphism_residual(curve, pairs) <= 1e-12
    assert homomorphism_residual(curve, pairs, capital_scale=1 + eps) >= eps / 10


def test_zero_event_curve_has_zero_capital():
    curve = EvolutionCurve(Event(0, 1, 0), EXP5)
    assert all(row[2] == 0 for row in curve.sample([0.0, 1.0, 5.0]))


def test_sample_array_shape():
    arr = EvolutionCurve(UNIT, EXP5).sample(np.linspace(0, 2, 5))
    assert arr.shape == (5, 3)
    np.testing.assert_allclose(arr[:, 2], np.exp(0.05 * arr[:, 0]), rtol=1e-15)


def test_csv_output():
    buf = io.StringIO()
    write_csv(EvolutionCurve(UNIT, EXP5), time_grid(0, 2, 2), buf)
    lines = buf.getvalue().split("\n")
    assert lines[0] == "t,h,c"
    assert lines[1] == "0,0,1"
    assert [float(x) for x in lines[3].split(",")] == [2.0, 2.0, math.exp(0.1)]
    assert float(lines[2].split(",")[2]) == pytest.approx(1.0512710963760241, rel=1e-16)
    assert "\r" not in buf.getvalue()


def test_time_grid():
    assert time_grid(0, 1, 4) == [0, 0.25, 0.5, 0.75, 1]
    assert time_grid(1, 1, 1) == [1, 1]
    with pytest.raises(ValueError):
        time_grid(0, 1, 0)
    with pytest.raises(ValueError):
        time_grid(2, 1, 3)
