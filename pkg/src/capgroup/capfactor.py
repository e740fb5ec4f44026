"""Capitalization factors.

A capitalization factor is a positive C1 function ``f`` of a time
displacement with ``f(0) == 1`` and ``f(-h) == 1 / f(h)``.  Positivity plus
reciprocity force ``f = exp(g)`` with ``g`` odd, so every built-in factor is
stored through its exponent ``g``:

* ``exponential``        g(h) = delta * h
* ``odd_poly_exp``       g(h) = sum_k a_k * h**(2k + 1)
* ``tabulated_odd_exp``  g piecewise linear through user samples on h > 0,
                         extended oddly (only piecewise C1)

Arbitrary candidate functions can be wrapped with :meth:`CapFactor.from_callable`
so that :func:`validate_factor` can reject them.
"""

from __future__ import annotations

import bisect
import functools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .report import AxiomReport, Check

KINDS = ("exponential", "odd_poly_exp", "tabulated_odd_exp")
DERIVATIVE_MODES = ("analytic", "finite_difference")

MAX_EXPONENT = 700.0
FD_RELATIVE_STEP = 1e-6
DEFAULT_GRID = (0.25, 0.5, 1.0, 2.0, 5.0, 10.0, 25.0)
TOL_RECIP = 1e-12


class FactorRangeError(OverflowError):
    """Raised when a factor value would leave the double-precision range."""


class FactorSpecError(ValueError):
    """Raised for malformed or inconsistent factor specifications."""


def fd_step(x: float) -> float:
    return FD_RELATIVE_STEP * max(1.0, abs(x))


def central_difference(func: Callable[[float], float], x: float, step: float | None = None) -> float:
    """Central difference ``(func(x+s) - func(x-s)) / 2s`` with ``s = 1e-6 max(1,|x|)``."""
    s = fd_step(x) if step is None else step
    return (func(x + s) - func(x - s)) / (2.0 * s)


@dataclass(frozen=True)
class CapFactor:
    kind: str
    params: tuple = ()
    derivative_mode: str = "analytic"
    # only set for kind == "custom"
    func: Callable[[float], float] | None = field(default=None, compare=False, repr=False)
    dfunc: Callable[[float], float] | None = field(default=None, compare=False, repr=False)
    name: str = ""

    def __post_init__(self):
        if self.derivative_mode not in DERIVATIVE_MODES:
            raise FactorSpecError(f"unknown derivative mode {self.derivative_mode!r}")
        if self.kind == "custom":
            if self.func is None:
                raise FactorSpecError("custom factor needs a function")
            if self.derivative_mode == "analytic" and self.dfunc is None:
                raise FactorSpecError("analytic derivative mode needs a derivative function")
            return
        if self.kind not in KINDS:
            raise FactorSpecError(f"unknown factor kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        if not all(isinstance(p, (int, float)) and math.isfinite(p) for p in _flatten(self.params)):
            raise FactorSpecError("factor parameters must be finite reals")
        if self.kind == "exponential" and len(self.params) != 1:
            raise FactorSpecError("exponential factor takes exactly one parameter (delta)")
        if self.kind == "odd_poly_exp" and len(self.params) == 0:
            raise FactorSpecError("odd_poly_exp needs at least one coefficient")
        if self.kind == "tabulated_odd_exp":
            _check_samples(self.params)
            if self.derivative_mode == "analytic":
                raise FactorSpecError("tabulated factors are only piecewise C1; use finite_difference")

    # constructors -----------------------------------------------------

    @classmethod
    def exponential(cls, delta: float) -> "CapFactor":
        return cls("exponential", (float(delta),))

    @classmethod
    def odd_poly_exp(cls, coeffs) -> "CapFactor":
        return cls("odd_poly_exp", tuple(float(a) for a in coeffs))

    @classmethod
    def tabulated_odd_exp(cls, samples) -> "CapFactor":
        pts = tuple((float(h), float(g)) for h, g in samples)
        return cls("tabulated_odd_exp", pts, derivative_mode="finite_difference")

    @classmethod
    def from_callable(cls, func, derivative=None, name="custom") -> "CapFactor":
        mode = "analytic" if derivative is not None else "finite_difference"
        return cls("custom", (), mode, func=func, dfunc=derivative, name=name)

    @property
    def label(self) -> str:
        """Short human-readable description, e.g. ``exponential(delta=0.05)``."""
        if self.name:
            return self.name
        if self.kind == "exponential":
            return f"exponential(delta={self.params[0]:g})"
        if self.kind == "odd_poly_exp":
            return f"odd_poly_exp({', '.join(f'{a:g}' for a in self.params)})"
        return f"tabulated_odd_exp({len(self.params)} samples)"

    # exponent ---------------------------------------------------------

    @property
    def is_exp_of_odd(self) -> bool:
        return self.kind != "custom"

    @property
    def piecewise(self) -> bool:
        """True when the factor is only piecewise C1 (kinks at knots)."""
        return self.kind == "tabulated_odd_exp"

    def knots(self) -> tuple[float, ...]:
        """Points where the derivative may jump (both signs), empty for smooth kinds."""
        if self.kind != "tabulated_odd_exp":
            return ()
        hs = [h for h, _ in self.params]
        return tuple(sorted([-h for h in hs] + hs))

    def exponent(self, h: float) -> float:
        if self.kind == "exponential":
            return self.params[0] * h
        if self.kind == "odd_poly_exp":
            h2 = h * h
            acc = 0.0
            for a in reversed(self.params):
                acc = acc * h2 + a
            return acc * h
        if self.kind == "tabulated_odd_exp":
            return _tabulated(self.params, h)
        raise TypeError("custom factors have no exponent")

    def exponent_derivative(self, h: float) -> float:
        if self.kind == "exponential":
            return self.params[0]
        if self.kind == "odd_poly_exp":
            h2 = h * h
            acc = 0.0
            for k in range(len(self.params) - 1, -1, -1):
                acc = acc * h2 + (2 * k + 1) * self.params[k]
            return acc
        raise TypeError(f"{self.kind} has no closed-form exponent derivative")

    def to_spec(self) -> dict:
        if self.kind == "exponential":
            return {"kind": "exponential", "delta": self.params[0]}
        if self.kind == "odd_poly_exp":
            return {"kind": "odd_poly_exp", "coeffs": list(self.params)}
        if self.kind == "tabulated_odd_exp":
            return {"kind": "tabulated_odd_exp", "samples": [list(p) for p in self.params]}
        raise TypeError("custom factors cannot be serialised")

    def __call__(self, h: float) -> float:
        return eval_factor(self, h)


def _flatten(params):
    for p in params:
        if isinstance(p, tuple):
            yield from p
        else:
            yield p


def _check_samples(samples):
    if len(samples) == 0:
        raise FactorSpecError("tabulated_odd_exp needs at least one sample")
    prev = 0.0
    for pt in samples:
        if len(pt) != 2:
            raise FactorSpecError("each sample must be a pair [h, g(h)]")
        h = pt[0]
        if not h > prev:
            raise FactorSpecError("sample times must be positive and strictly increasing")
        prev = h


@functools.lru_cache(maxsize=64)
def _table(samples):
    # implicit knot (0, 0)
    return (0.0,) + tuple(p[0] for p in samples), (0.0,) + tuple(p[1] for p in samples)


def _tabulated(samples, h):
    if h < 0:
        return -_tabulated(samples, -h)
    # linear extrapolation past the last sample
    hs, gs = _table(samples)
    i = bisect.bisect_right(hs, h) - 1
    i = min(max(i, 0), len(hs) - 2)
    h0, h1 = hs[i], hs[i + 1]
    g0, g1 = gs[i], gs[i + 1]
    return g0 + (g1 - g0) * (h - h0) / (h1 - h0)


def _exp_checked(g: float, h: float) -> float:
    if not abs(g) <= MAX_EXPONENT:
        raise FactorRangeError(f"factor exponent {g!r} at h={h!r} is outside [-{MAX_EXPONENT:g}, {MAX_EXPONENT:g}]")
    return math.exp(g)


def _raw(factor: CapFactor, h: float) -> float:
    """Evaluate without the positivity post-condition (used by validation)."""
    if factor.kind == "custom":
        v = float(factor.func(h))
        if not math.isfinite(v):
            raise FactorRangeError(f"factor value at h={h!r} is not finite")
        return v
    return _exp_checked(factor.exponent(h), h)


def eval_factor(factor: CapFactor, h: float) -> float:
    """Return ``f(h)``; raises :class:`FactorRangeError` instead of returning inf/0."""
    v = _raw(factor, h)
    if not v > 0:
        raise FactorRangeError(f"factor value {v!r} at h={h!r} is not positive")
    return v


def eval_derivative(factor: CapFactor, h: float) -> float:
    if factor.derivative_mode == "finite_difference":
        return central_difference(lambda x: _raw(factor, x), h)
    if factor.kind == "custom":
        return float(factor.dfunc(h))
    g = factor.exponent(h)
    return factor.exponent_derivative(h) * _exp_checked(g, h)


def factor_ratio(factor: CapFactor, num=(), den=()) -> float:
    """``prod f(x) for x in num`` divided by ``prod f(x) for x in den``.

    Exp-of-odd factors combine the exponents first and exponentiate once,
    which saves roundings and cancels exactly when the exponents do.  The
    sum is accumulated in the order given, so callers control symmetry.
    """
    if not factor.is_exp_of_odd:
        out = 1.0
        for x in num:
            out *= eval_factor(factor, x)
        for x in den:
            out /= eval_factor(factor, x)
        return out
    acc = 0.0
    for x in num:
        g = factor.exponent(x)
        _exp_checked(g, x)
        acc += g
    for x in den:
        g = factor.exponent(x)
        _exp_checked(g, x)
        acc -= g
    if not abs(acc) <= MAX_EXPONENT:
        raise FactorRangeError(f"combined factor exponent {acc!r} is out of range")
    return math.exp(acc)


def force_of_interest(factor: CapFactor, h: float) -> float:
    """Instantaneous growth rate ``f'(h) / f(h)``.

    For analytic exp-of-odd factors this is the exponent derivative ``g'(h)``,
    which avoids the rounding of the quotient.
    """
    if factor.derivative_mode == "analytic" and factor.is_exp_of_odd:
        _exp_checked(factor.exponent(h), h)
        return factor.exponent_derivative(h)
    return eval_derivative(factor, h) / eval_factor(factor, h)


# ----------------------------------------------------------------------
# specs

_SPEC_KEYS = {
    "exponential": {"kind", "delta"},
    "odd_poly_exp": {"kind", "coeffs"},
    "tabulated_odd_exp": {"kind", "samples"},
}


def _real(x, what):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise FactorSpecError(f"{what} must be a number, got {x!r}")
    return float(x)


def parse_factor_spec(spec: dict) -> CapFactor:
    """Build a factor from its JSON dictionary form; unknown keys are rejected."""
    if not isinstance(spec, dict):
        raise FactorSpecError("factor spec must be a JSON object")
    kind = spec.get("kind")
    if kind not in _SPEC_KEYS:
        raise FactorSpecError(f"unknown factor kind {kind!r}; expected one of {', '.join(KINDS)}")
    extra = set(spec) - _SPEC_KEYS[kind]
    missing = _SPEC_KEYS[kind] - set(spec)
    if extra:
        raise FactorSpecError(f"unknown keys for {kind}: {', '.join(sorted(extra))}")
    if missing:
        raise FactorSpecError(f"missing keys for {kind}: {', '.join(sorted(missing))}")
    if kind == "exponential":
        return CapFactor.exponential(_real(spec["delta"], "delta"))
    if kind == "odd_poly_exp":
        coeffs = spec["coeffs"]
        if not isinstance(coeffs, list):
            raise FactorSpecError("coeffs must be a list")
        return CapFactor.odd_poly_exp([_real(a, "coefficient") for a in coeffs])
    samples = spec["samples"]
    if not isinstance(samples, list) or not all(isinstance(p, list) and len(p) == 2 for p in samples):
        raise FactorSpecError("samples must be a list of [h, g] pairs")
    return CapFactor.tabulated_odd_exp([(_real(h, "h"), _real(g, "g")) for h, g in samples])


def load_factor(path) -> CapFactor:
    text = Path(path).read_text(encoding="utf-8")
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FactorSpecError(f"{path}: malformed JSON ({exc})") from exc
    return parse_factor_spec(spec)


# ----------------------------------------------------------------------
# validation


def symmetric_grid(grid) -> list[float]:
    pts = {0.0}
    for h in grid:
        pts.add(float(h))
        pts.add(-float(h))
    return sorted(pts)


def validate_factor(factor, grid=DEFAULT_GRID, tol_recip: float = TOL_RECIP) -> AxiomReport:
    """Check the four factor axioms on a symmetric grid.

    Violations produce a failing report; they never raise.  ``factor`` may be
    a :class:`CapFactor` or a spec dictionary.
    """
    if isinstance(factor, dict):
        factor = parse_factor_spec(factor)
    grid = symmetric_grid(grid)
    if not grid:
        raise ValueError("validation grid must not be empty")

    def safe(fn, h):
        try:
            return fn(h)
        except (FactorRangeError, ArithmeticError, ValueError):
            return math.nan

    values = {h: safe(lambda x: _raw(factor, x), h) for h in grid}
    f0 = values[0.0]
    unit = abs(f0 - 1.0) if math.isfinite(f0) else math.inf
    nonpositive = sum(1 for v in values.values() if not v > 0)
    recip = 0.0
    for h in grid:
        prod = values[h] * values[-h]
        r = abs(prod - 1.0)
        recip = max(recip, r if math.isfinite(r) else math.inf)
    bad_deriv = sum(1 for h in grid if not math.isfinite(safe(lambda x: eval_derivative(factor, x), h)))

    n = len(grid)
    checks = [
        Check("unit_at_zero", unit, tol_recip, 1),
        Check("positivity", float(nonpositive), 0.0, n),
        Check("reciprocity", recip, tol_recip, n),
        Check("derivative_finite", float(bad_deriv), 0.0, n),
    ]
    notes = []
    if factor.piecewise:
        notes.append("piecewise-C1: derivative jumps at tabulation knots")
    report = AxiomReport.from_checks("D1-factor-axioms", checks, notes=notes)
    # samples = grid size, not the sum over checks
    return AxiomReport(
        report.law_id, n, report.max_residual, report.tolerance, report.passed,
        None, report.checks, report.notes,
    )
