"""Evolution curves of events and their exponential-map description.

The evolution of ``e0 = (t0, h0, c0)`` is the curve

    mu(t) = (t, h0 + t - t0, c0 f(-h0) f(h0 + t - t0)),

i.e. the event carried forward (or back) in time while it keeps
capitalizing.  It is a homomorphism from the real line with the translated
addition ``t +_t0 t' = t + t' - t0`` into the events with the product
centered at ``e0``, and it is the one with tangent ``(1, 1, c0 delta(h0))``
at ``t0``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .algebra import NotInvertibleError, centered_product, f_product
from .capfactor import (
    CapFactor,
    central_difference,
    eval_derivative,
    eval_factor,
    factor_ratio,
    force_of_interest,
)
from .events import Event


class UnsupportedTangentError(ValueError):
    """Raised for exponential maps along directions other than the evolution tangent."""


@dataclass(frozen=True)
class TranslatedTimeLine:
    """The real line with addition translated so that ``t0`` is neutral."""

    t0: float

    def add(self, t: float, t2: float) -> float:
        return t + t2 - self.t0

    def neg(self, t: float) -> float:
        return 2.0 * self.t0 - t

    @property
    def neutral(self) -> float:
        return self.t0


def translated_add(line: TranslatedTimeLine, t: float, t2: float) -> float:
    return line.add(t, t2)


def translated_neg(line: TranslatedTimeLine, t: float) -> float:
    return line.neg(t)


@dataclass(frozen=True)
class TangentVector:
    at: Event
    direction: tuple[float, float, float]
    derivative_source: str = "analytic"


@dataclass(frozen=True)
class EvolutionCurve:
    """Evolution of ``base`` under ``factor``.

    ``t0`` defaults to the base event's reference time.  A different ``t0``
    gives the double translation ``t -> mu_o(t - t0) base``, which passes
    through ``base`` at ``t0``.
    """

    base: Event
    factor: CapFactor
    t0: float | None = None

    @property
    def origin(self) -> float:
        return self.base.t if self.t0 is None else self.t0

    def __call__(self, t: float) -> Event:
        return evolve(self, t)

    @property
    def time_line(self) -> TranslatedTimeLine:
        return TranslatedTimeLine(self.origin)

    def sample(self, ts) -> np.ndarray:
        """Rows ``(t, h, c)`` for each time in ``ts`` (reference time first)."""
        return np.array([tuple(evolve(self, float(t))) for t in ts], dtype=float).reshape(-1, 3)


def evolve(curve: EvolutionCurve, t: float) -> Event:
    te, h0, c0 = curve.base
    dt = t - curve.origin
    ref = t if curve.t0 is None else te + dt
    # c0 f(h0 + dt) / f(h0) equals c0 f(-h0) f(h0 + dt) and returns c0 exactly at dt = 0
    cap = c0 * factor_ratio(curve.factor, num=(h0 + dt,), den=(h0,))
    return Event(ref, h0 + dt, cap)


def capital_evolution(curve: EvolutionCurve, t: float) -> float:
    return evolve(curve, t).c


def tangent(curve: EvolutionCurve, t: float) -> TangentVector:
    f = curve.factor
    _, h0, c0 = curve.base
    x = h0 + (t - curve.origin)
    dc = c0 * (eval_derivative(f, x) / eval_factor(f, h0))
    return TangentVector(evolve(curve, t), (1.0, 1.0, dc), f.derivative_mode)


def tangent_fd(curve: EvolutionCurve, t: float) -> tuple[float, float, float]:
    """Central difference of the curve in ``t``, componentwise."""
    return tuple(central_difference(lambda s, i=i: tuple(evolve(curve, s))[i], t) for i in range(3))


def origin_direction(f: CapFactor, e0: Event) -> tuple[float, float, float]:
    """The tangent ``(1, 1, c0 delta(h0))`` of the evolution of ``e0`` at its own time."""
    return (1.0, 1.0, e0.c * force_of_interest(f, e0.h))


def unit_evolution(f: CapFactor, t: float) -> Event:
    """Evolution of the unit event: ``(t, t, f(t))``."""
    return Event(t, t, eval_factor(f, t))


def double_translate_unit(f: CapFactor, e0: Event, t: float, t0: float | None = None) -> Event:
    """``mu_o(t - t0) e0`` computed through the f-product."""
    t0 = e0.t if t0 is None else t0
    return f_product(f, unit_evolution(f, t - t0), e0)


def exp_map(f: CapFactor, t0: float, e0: Event, direction=None, rtol: float = 1e-12):
    """Exponential map at ``(t0, e0)``: the evolution curve with its defining tangent.

    Only the evolution direction ``(1, 1, c0 delta(h0))`` is supported; passing
    any other ``direction`` raises :class:`UnsupportedTangentError`.
    """
    if e0.c == 0.0:
        raise NotInvertibleError(f"base event {tuple(e0)} has zero capital and is not invertible")
    v = origin_direction(f, e0)
    if direction is not None:
        direction = tuple(float(x) for x in direction)
        if len(direction) != 3 or not all(
            math.isclose(a, b, rel_tol=rtol, abs_tol=rtol) for a, b in zip(direction, v)
        ):
            raise UnsupportedTangentError(
                f"unsupported tangent direction {direction}; only {v} is constructible"
            )
    curve = EvolutionCurve(e0, f, None if t0 == e0.t else float(t0))
    return curve, TangentVector(e0, v, f.derivative_mode)


def homomorphism_residual(curve: EvolutionCurve, pairs, capital_scale: float = 1.0, floor: float = 1e-3) -> float:
    """Largest relative gap in ``[nu(t)|nu(t')]_e0 = nu(t +_t0 t')`` over ``pairs``.

    ``nu`` is the curve with its capital multiplied by ``capital_scale``; the
    law holds only for scale 1, which is how uniqueness is probed.
    """
    e0 = curve.base
    line = curve.time_line

    def nu(t):
        e = evolve(curve, t)
        return Event(e.t, e.h, e.c * capital_scale)

    worst = 0.0
    for t, t2 in pairs:
        lhs = centered_product(curve.factor, e0, nu(t), nu(t2))
        rhs = nu(line.add(t, t2))
        for a, b in zip(lhs, rhs):
            worst = max(worst, abs(a - b) / max(floor, abs(b)))
    return worst


def write_csv(curve: EvolutionCurve, ts, stream) -> None:
    """Write ``t,h,c`` rows with 17 significant digits and LF line endings."""
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["t", "h", "c"])
    for t in ts:
        w.writerow([format(v, ".17g") for v in evolve(curve, float(t))])


def time_grid(start: float, stop: float, steps: int) -> list[float]:
    """``steps + 1`` equally spaced times, both ends included exactly."""
    if steps < 1:
        raise ValueError("steps must be at least 1")
    if start > stop:
        raise ValueError("start must not exceed stop")
    ts = [start + (stop - start) * k / steps for k in range(steps + 1)]
    ts[-1] = stop
    return ts
