"""Products of capitalized events induced by a capitalization factor.

The f-product discounts both capitals back to their time origins and
recapitalizes the result over the summed capitalization time::

    (t, h, c)(t', h', c') = (t + t', h + h', c f(-h) c' f(-h') f(h + h'))

It makes R^3 a commutative semigroup with neutral ``o = (0, 0, 1)``; the
invertible elements are exactly the events with non-zero capital.  The
anti-product negates the capital and has neutral ``-o = (0, 0, -1)``.
Centering at an invertible ``e0`` translates the f-product,
``[e|e']_e0 = e e' e0^-1``, which moves the neutral element to ``e0``.

These operations are called "Lie products" in the financial literature;
they are group multiplications, not Lie brackets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .capfactor import CapFactor, eval_derivative, eval_factor, factor_ratio
from .events import NEG_UNIT, UNIT, Event, State


class NotInvertibleError(ValueError):
    """Raised when an operation needs an event with non-zero capital."""


def _require_invertible(e: Event, what: str = "event"):
    if e.c == 0.0:
        raise NotInvertibleError(f"{what} {tuple(e)} has zero capital and is not invertible")


def _capital(f: CapFactor, h, c, h2, c2):
    # every partial result is symmetric in the two arguments, so the
    # product is bitwise commutative
    return (c * c2) * factor_ratio(f, num=(-h, -h2, h + h2))


def f_product(f: CapFactor, e: Event, e2: Event) -> Event:
    return Event(e.t + e2.t, e.h + e2.h, _capital(f, e.h, e.c, e2.h, e2.c))


def f_anti_product(f: CapFactor, e: Event, e2: Event) -> Event:
    return Event(e.t + e2.t, e.h + e2.h, -_capital(f, e.h, e.c, e2.h, e2.c))


def state_product(f: CapFactor, s: State, s2: State) -> State:
    return State(s.h + s2.h, _capital(f, s.h, s.c, s2.h, s2.c))


def state_anti_product(f: CapFactor, s: State, s2: State) -> State:
    return State(s.h + s2.h, -_capital(f, s.h, s.c, s2.h, s2.c))


def f_inverse(e: Event) -> Event:
    """Inverse under the f-product; the same for every factor."""
    _require_invertible(e)
    return Event(-e.t, -e.h, 1.0 / e.c)


def centered_product(f: CapFactor, e0: Event, e: Event, e2: Event) -> Event:
    """Product centered at ``e0``; ``e0`` is its neutral element."""
    _require_invertible(e0, "center")
    t0, h0, c0 = e0
    hs = e.h + e2.h - h0
    cap = (e.c * e2.c / c0) * factor_ratio(f, num=(hs,), den=(e.h, e2.h, -h0))
    return Event(e.t + (e2.t - t0), hs, cap)


def translate(f: CapFactor, e0: Event, x: Event) -> Event:
    """``x e0^-1`` under the f-product."""
    _require_invertible(e0, "center")
    return f_product(f, x, f_inverse(e0))


def translated_inverse(f: CapFactor, e0: Event, e: Event) -> Event:
    """Inverse of ``e`` in the product centered at ``e0``: ``e^-1 e0^2``."""
    _require_invertible(e0, "center")
    return f_product(f, f_inverse(e), f_product(f, e0, e0))


def n_fold_product(f: CapFactor, events) -> Event:
    """Closed form of ``e1 e2 ... en``: capitals discounted separately, recapitalized once."""
    events = list(events)
    if not events:
        raise ValueError("n_fold_product needs at least one event")
    if len(events) == 1:
        return events[0]
    t = sum(e.t for e in events)
    h = sum(e.h for e in events)
    cap = 1.0
    for e in events:
        cap *= e.c
    return Event(t, h, cap * factor_ratio(f, num=(h,), den=[e.h for e in events]))


def fold_product(f: CapFactor, events) -> Event:
    """Left fold of :func:`f_product`; the reference route for :func:`n_fold_product`."""
    events = list(events)
    if not events:
        raise ValueError("fold_product needs at least one event")
    acc = events[0]
    for e in events[1:]:
        acc = f_product(f, acc, e)
    return acc


@dataclass(frozen=True)
class ProductKind:
    """Which product to use: ``f_product``, ``f_anti_product`` or ``centered`` at ``center``.

    The groups of invertible elements are not materialised; they are the
    product together with :meth:`is_invertible`.
    """

    kind: str
    center: Event | None = None

    def __post_init__(self):
        if self.kind not in ("f_product", "f_anti_product", "centered"):
            raise ValueError(f"unknown product kind {self.kind!r}")
        if self.kind == "centered":
            if self.center is None:
                raise ValueError("centered product needs a center event")
            _require_invertible(self.center, "center")
        elif self.center is not None:
            raise ValueError(f"{self.kind} takes no center")

    @classmethod
    def centered_at(cls, e0: Event) -> "ProductKind":
        return cls("centered", e0)

    def __call__(self, f: CapFactor, e: Event, e2: Event) -> Event:
        if self.kind == "f_product":
            return f_product(f, e, e2)
        if self.kind == "f_anti_product":
            return f_anti_product(f, e, e2)
        return centered_product(f, self.center, e, e2)

    @property
    def neutral(self) -> Event:
        if self.kind == "f_product":
            return UNIT
        if self.kind == "f_anti_product":
            return NEG_UNIT
        return self.center

    def is_invertible(self, e: Event) -> bool:
        return e.c != 0.0

    def inverse(self, f: CapFactor, e: Event) -> Event:
        if self.kind == "centered":
            return translated_inverse(f, self.center, e)
        return f_inverse(e)


# derivatives ------------------------------------------------------------

Vec3 = tuple[float, float, float]


class ProductPartials(NamedTuple):
    """Partials of the f-product with respect to each scalar argument."""

    t: Vec3
    h: Vec3
    c: Vec3
    t2: Vec3
    h2: Vec3
    c2: Vec3


def product_partials(f: CapFactor, e: Event, e2: Event) -> ProductPartials:
    _, h, c = e
    _, h2, c2 = e2
    fm, fm2, fs = eval_factor(f, -h), eval_factor(f, -h2), eval_factor(f, h + h2)
    dfm, dfm2, dfs = eval_derivative(f, -h), eval_derivative(f, -h2), eval_derivative(f, h + h2)
    # d/dh of f(-h) f(h+h') has two terms: the discount at -h and the recapitalization at h+h'
    dh = c2 * fm2 * (-c * dfm * fs + c * fm * dfs)
    dh2 = c * fm * (-c2 * dfm2 * fs + c2 * fm2 * dfs)
    return ProductPartials(
        t=(1.0, 0.0, 0.0),
        h=(0.0, 1.0, dh),
        c=(0.0, 0.0, fm * c2 * fm2 * fs),
        t2=(1.0, 0.0, 0.0),
        h2=(0.0, 1.0, dh2),
        c2=(0.0, 0.0, c * fm * fm2 * fs),
    )


def inverse_partials(e: Event) -> tuple[Vec3, Vec3, Vec3]:
    _require_invertible(e)
    return ((-1.0, 0.0, 0.0), (0.0, -1.0, 0.0), (0.0, 0.0, -1.0 / e.c**2))
