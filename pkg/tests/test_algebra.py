import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from capgroup import (
    NEG_UNIT,
    UNIT,
    CapFactor,
    Classification as C,
    Event,
    NotInvertibleError,
    ProductKind,
    State,
    centered_product,
    classify,
    eval_derivative,
    eval_factor,
    f_anti_product,
    f_inverse,
    f_product,
    fold_product,
    inverse_partials,
    n_fold_product,
    opposite,
    product_partials,
    state_product,
    translate,
    translated_inverse,
)
from capgroup.capfactor import central_difference

from conftest import BUILTIN, EXP5, POLY


def formula_product(f, e, e2):
    # direct transcription, one factor evaluation per term
    return (e.t + e2.t, e.h + e2.h, e.c * eval_factor(f, -e.h) * e2.c * eval_factor(f, -e2.h) * eval_factor(f, e.h + e2.h))


def formula_centered(f, e0, e, e2):
    return (
        e.t + e2.t - e0.t,
        e.h + e2.h - e0.h,
        (e.c / eval_factor(f, e.h)) * (e2.c / eval_factor(f, e2.h)) * ((1 / e0.c) / eval_factor(f, -e0.h))
        * eval_factor(f, e.h + e2.h - e0.h),
    )


def close(a, b, rtol=1e-9, atol=1e-12):
    return all(math.isclose(x, y, rel_tol=rtol, abs_tol=atol) for x, y in zip(a, b))


E1, E2 = Event(1, 2, 100), Event(3, 1, 50)
E0 = Event(1, 1, 10)


# -- worked examples -------------------------------------------------------


def test_product_examples():
    assert close(f_product(EXP5, E1, E2), (4, 3, 5000), rtol=1e-15)
    assert close(f_product(EXP5, E1, E2), formula_product(EXP5, E1, E2), rtol=1e-14)
    assert close(f_product(POLY, E1, E2), (4, 3, 5090.814881948969), rtol=1e-14)
    assert close(f_product(POLY, E1, E2), formula_product(POLY, E1, E2), rtol=1e-14)
    assert f_product(POLY, E1, UNIT) == E1
    assert close(f_product(POLY, E1, Event(-1, -2, 0.01)), UNIT, rtol=1e-15)


def test_anti_product_examples():
    assert close(f_anti_product(POLY, E1, NEG_UNIT), E1, rtol=1e-15)
    assert close(f_anti_product(EXP5, E1, E2), (4, 3, -5000), rtol=1e-15)
    assert close(f_anti_product(POLY, Event(1, 2, -100), Event(-1, -2, -0.01)), NEG_UNIT, rtol=1e-15)


def test_inverse_examples():
    assert f_inverse(E1) == Event(-1, -2, 0.01)
    assert f_inverse(UNIT) == UNIT
    with pytest.raises(NotInvertibleError):
        f_inverse(Event(2, 3, 0))


def test_centered_examples(factor):
    assert close(centered_product(factor, E0, E1, E0), E1, rtol=1e-14)
    assert close(centered_product(factor, UNIT, E1, E2), f_product(factor, E1, E2), rtol=1e-14)
    assert close(centered_product(factor, E0, E1, E2), formula_centered(factor, E0, E1, E2), rtol=1e-14)


def test_centered_exponential_value():
    # exponential factors cancel: capital = c c' / c0
    assert close(centered_product(EXP5, E0, E1, E2), (3, 2, 500), rtol=1e-15)
    with pytest.raises(NotInvertibleError):
        centered_product(EXP5, Event(0, 0, 0), E1, E2)


def test_translate_examples(factor):
    assert close(translate(factor, E0, E0), UNIT, rtol=1e-14)
    assert close(translate(factor, UNIT, E1), E1, rtol=1e-15)
    assert close(translate(EXP5, E0, Event(4, 3, 5000)), (3, 2, 500), rtol=1e-14)
    with pytest.raises(NotInvertibleError):
        translate(factor, Event(1, 1, 0), E1)


def test_translated_inverse_examples(factor):
    assert close(translated_inverse(factor, E0, E0), E0, rtol=1e-14)
    assert close(translated_inverse(factor, UNIT, E1), f_inverse(E1), rtol=1e-15)
    with pytest.raises(NotInvertibleError):
        translated_inverse(factor, E0, Event(1, 1, 0))


def test_translated_inverse_exponential_value():
    assert close(f_product(EXP5, E0, E0), (2, 2, 100), rtol=1e-15)
    ti = translated_inverse(EXP5, E0, E1)
    assert close(ti, (1, 0, 1), rtol=1e-14)
    assert close(centered_product(EXP5, E0, E1, Event(1, 0, 1)), E0, rtol=1e-14)


def test_n_fold_examples(factor):
    assert n_fold_product(factor, [E1]) == E1
    assert close(n_fold_product(factor, [UNIT] * 3), UNIT, rtol=1e-15)
    three = [E1, E2, Event(0, 1, 2)]
    assert close(n_fold_product(factor, three), f_product(factor, f_product(factor, E1, E2), three[2]), rtol=1e-13)
    with pytest.raises(ValueError):
        n_fold_product(factor, [])


def test_n_fold_exponential_value():
    assert close(n_fold_product(EXP5, [E1, E2, Event(0, 1, 2)]), (4, 4, 10000), rtol=1e-14)


def test_state_product_drops_time():
    s = state_product(POLY, E1.state, E2.state)
    assert s == State(*tuple(f_product(POLY, E1, E2))[1:])


def test_product_kind():
    pk = ProductKind.centered_at(E0)
    assert pk.neutral == E0
    assert close(pk(POLY, E1, pk.inverse(POLY, E1)), E0, rtol=1e-13)
    assert ProductKind("f_anti_product").neutral == NEG_UNIT
    assert ProductKind("f_product")(POLY, E1, E2) == f_product(POLY, E1, E2)
    assert not pk.is_invertible(Event(1, 1, 0))
    with pytest.raises(NotInvertibleError):
        ProductKind.centered_at(Event(0, 0, 0))
    with pytest.raises(ValueError):
        ProductKind("bracket")


# -- properties ------------------------------------------------------------

coord = st.floats(min_value=-10, max_value=10, allow_nan=False)
capital = st.floats(min_value=-100, max_value=100, allow_nan=False).filter(lambda c: abs(c) >= 1e-3)
events = st.builds(Event, coord, coord, capital)
factors = st.sampled_from(sorted(BUILTIN))


@given(factors, events, events, events)
def test_associativity(name, a, b, c):
    f = BUILTIN[name]
    assert close(f_product(f, f_product(f, a, b), c), f_product(f, a, f_product(f, b, c)))
    assert close(f_anti_product(f, f_anti_product(f, a, b), c), f_anti_product(f, a, f_anti_product(f, b, c)))


@given(factors, events, events, events, events)
def test_centered_associativity(name, e0, a, b, c):
    f = BUILTIN[name]
    cp = lambda x, y: centered_product(f, e0, x, y)  # noqa: E731
    assert close(cp(cp(a, b), c), cp(a, cp(b, c)))


@given(factors, events, events)
def test_commutativity_is_bitwise(name, a, b):
    f = BUILTIN[name]
    assert f_product(f, a, b) == f_product(f, b, a)
    assert f_anti_product(f, a, b) == f_anti_product(f, b, a)


@given(factors, events, events)
def test_neutral_and_inverse_laws(name, e, e0):
    f = BUILTIN[name]
    assert close(f_product(f, e, UNIT), e)
    assert close(f_anti_product(f, e, NEG_UNIT), e)
    assert close(centered_product(f, e0, e, e0), e)
    assert close(f_product(f, e, f_inverse(e)), UNIT)
    assert close(centered_product(f, e0, e, translated_inverse(f, e0, e)), e0)


@given(factors, events, events, events)
def test_centered_is_translated_product(name, e0, a, b):
    f = BUILTIN[name]
    assert close(centered_product(f, e0, a, b), translate(f, e0, f_product(f, a, b)))


@given(factors, events, events)
def test_component_closure(name, a, b):
    f = BUILTIN[name]
    pa, pb = Event(a.t, a.h, abs(a.c)), Event(b.t, b.h, abs(b.c))
    assert C.STRICT_CREDIT in classify(f_product(f, pa, pb))
    na, nb = opposite(pa), opposite(pb)
    assert C.STRICT_DEBT in classify(f_anti_product(f, na, nb))


@given(factors, events, events)
def test_opposite_intertwines_product_and_anti_product(name, a, b):
    f = BUILTIN[name]
    assert close(opposite(f_product(f, a, b)), f_anti_product(f, opposite(a), opposite(b)))


@given(factors, st.lists(events, min_size=1, max_size=6))
def test_n_fold_matches_iterated_product(name, chain):
    f = BUILTIN[name]
    assert close(n_fold_product(f, chain), fold_product(f, chain))


# -- partial derivatives ---------------------------------------------------


def fd_partials(f, e, e2):
    """Central differences of each output component in each of the six inputs."""
    args = tuple(e) + tuple(e2)

    def moved(i, x):
        a = list(args)
        a[i] = x
        return f_product(f, Event(*a[:3]), Event(*a[3:]))

    return [
        tuple(central_difference(lambda x: tuple(moved(i, x))[k], args[i]) for k in range(3))
        for i in range(6)
    ]


def test_partials_examples():
    pp = product_partials(EXP5, E1, E2)
    assert close(pp.c, (0, 0, 50), rtol=1e-14)
    assert pp.t == (1, 0, 0) and pp.t2 == (1, 0, 0)
    assert close(product_partials(EXP5, UNIT, UNIT).h, (0, 1, 0), atol=1e-15)
    assert close(fd_partials(EXP5, E1, E2)[2], (0, 0, 50), rtol=1e-8)


def test_partials_odd_poly_values():
    # values from arbitrary-precision differentiation of the product formula
    pp = product_partials(POLY, E1, E2)
    assert pp.h[2] == pytest.approx(76.36222322923453, rel=1e-13)
    assert pp.h2[2] == pytest.approx(122.17955716677525, rel=1e-13)


def test_c_partial_is_the_closed_form():
    _, h, c = E1
    _, h2, c2 = E2
    pp = product_partials(POLY, E1, E2)
    assert pp.c == (0.0, 0.0, eval_factor(POLY, -h) * c2 * eval_factor(POLY, -h2) * eval_factor(POLY, h + h2))


@settings(max_examples=50)
@given(st.sampled_from(["exp5", "exp20", "poly"]), events, events)
def test_partials_match_finite_differences(name, a, b):
    f = BUILTIN[name]
    value = tuple(f_product(f, a, b))
    for x, an, fd in zip((*a, *b), product_partials(f, a, b), fd_partials(f, a, b)):
        scale = max(1.0, max(abs(v) for v in value) / max(1.0, abs(x)))
        for p, q in zip(an, fd):
            assert abs(p - q) <= 1e-6 * max(scale, abs(q))


def test_single_term_h_partial_is_rejected_by_finite_differences():
    # the one-term expression -c f'(-h) c' f(-h') f'(h+h') misses the chain rule;
    # the finite-difference check must tell it apart from the implemented one
    f = POLY
    _, h, c = E1
    _, h2, c2 = E2
    one_term = -c * eval_derivative(f, -h) * c2 * eval_factor(f, -h2) * eval_derivative(f, h + h2)
    fd = fd_partials(f, E1, E2)[1][2]
    assert abs(product_partials(f, E1, E2).h[2] - fd) <= 1e-6 * abs(fd)
    assert abs(one_term - fd) > 1e-2 * abs(fd)


def test_inverse_partials():
    assert inverse_partials(E1)[2] == (0.0, 0.0, -1 / 100**2)
    assert inverse_partials(E1)[2][2] == pytest.approx(-0.0001)
    assert inverse_partials(UNIT) == ((-1, 0, 0), (0, -1, 0), (0, 0, -1))
    assert inverse_partials(Event(0, 0, -2))[2] == (0, 0, -0.25)
    fd = central_difference(lambda c: 1 / c, 100.0)
    assert inverse_partials(E1)[2][2] == pytest.approx(fd, rel=1e-8)
    with pytest.raises(NotInvertibleError):
        inverse_partials(Event(1, 1, 0))
