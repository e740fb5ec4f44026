"""Seeded numerical verification of the event-group laws.

Every law has a short id (``T1-assoc``, ``T8-homomorphism``, ...) and
evaluates to an :class:`~capgroup.report.AxiomReport`.  Runs are deterministic: each law draws from its own generator seeded by
``(seed, crc32(law_id))``, so the result does not depend on which other laws
ran before it.

Residuals are relative gaps ``|a - b| / max(floor, |b|)`` per component.  For
algebraic identities ``floor = atol / rtol`` and the tolerance is ``rtol``,
which accepts exactly when ``|a - b| <= max(atol, rtol |b|)``; that region
lies inside ``|a - b| <= atol + rtol |b|``, so passing is never looser.  Checks
against finite differences use the floor from :func:`fd_floor` (at least 1).
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass, replace

import numpy as np

from . import algebra as alg
from .capfactor import (
    DEFAULT_GRID,
    FD_RELATIVE_STEP,
    CapFactor,
    FactorRangeError,
    central_difference,
    eval_derivative,
    eval_factor,
    force_of_interest,
    validate_factor,
)
from .events import NEG_UNIT, UNIT, Classification, Event, State, classify, opposite
from .evolution import (
    EvolutionCurve,
    double_translate_unit,
    evolve,
    origin_direction,
    tangent,
    tangent_fd,
    unit_evolution,
)
from .report import AxiomReport, Check

DEFAULT_SEED = 20240611


@dataclass(frozen=True)
class VerifyConfig:
    samples: int = 200
    seed: int = DEFAULT_SEED
    atol: float = 1e-12
    rtol: float = 1e-9
    fd_rtol: float = 1e-6
    origin_rtol: float = 1e-12
    tol_recip: float = 1e-12
    time_range: float = 20.0
    event_range: float = 10.0
    capital_range: float = 100.0
    min_capital: float = 1e-3
    # 1/c is differenced in the inverse partials; keep its curvature moderate
    min_capital_fd: float = 1e-2
    grid_points: int = 101
    grid_bases: int = 5
    max_chain: int = 6

    def __post_init__(self):
        if not self.rtol > 0 or not self.atol >= 0:
            raise ValueError(f"need rtol > 0 and atol >= 0, got rtol={self.rtol}, atol={self.atol}")
        if self.samples < 1:
            raise ValueError(f"samples must be positive, got {self.samples}")

    @property
    def floor(self) -> float:
        return self.atol / self.rtol


class UnknownLawError(KeyError):
    def __str__(self):
        return self.args[0]


# ----------------------------------------------------------------------
# helpers


def rel_gap(a, b, floor: float) -> float:
    worst = 0.0
    for x, y in zip(a, b):
        d = abs(x - y)
        if d:
            worst = max(worst, d / max(floor, abs(y)))
    return worst


def fd_floor(values, x: float) -> float:
    """Denominator floor for finite-difference checks at ``x``.

    Rounding in a central difference is about ``eps |F| / step`` with
    ``step = 1e-6 max(1, |x|)``; scaling by ``|F| / max(1, |x|)`` keeps
    derivatives that cancel to ~0 from being judged on rounding noise.
    """
    return max(1.0, max(abs(v) for v in values) / max(1.0, abs(x)))


def ulp_gap(a, b) -> float:
    worst = 0.0
    for x, y in zip(a, b):
        if x != y:
            worst = max(worst, abs(x - y) / math.ulp(max(abs(x), abs(y))))
    return worst


class _Sampler:
    def __init__(self, cfg: VerifyConfig, rng: np.random.Generator):
        self.cfg = cfg
        self.rng = rng

    def time(self, span=None):
        span = self.cfg.time_range if span is None else span
        return float(self.rng.uniform(-span, span))

    def capital(self, min_abs=None, sign=0):
        lo = self.cfg.min_capital if min_abs is None else min_abs
        while True:
            c = float(self.rng.uniform(-self.cfg.capital_range, self.cfg.capital_range))
            if abs(c) >= lo:
                break
        if sign:
            c = math.copysign(c, sign)
        return c

    def event(self, sign=0, min_abs=None):
        r = self.cfg.event_range
        return Event(self.time(r), self.time(r), self.capital(min_abs, sign))


def _near_knot(f: CapFactor, xs, scale=1.0) -> bool:
    knots = f.knots()
    if not knots:
        return False
    for x in xs:
        margin = 10 * FD_RELATIVE_STEP * max(1.0, abs(x), abs(scale))
        if any(abs(x - k) <= margin for k in knots):
            return True
    return False


def _count(bad: int, n: int, name: str) -> Check:
    return Check(name, float(bad), 0.0, n)


def _skip_note(skipped: int):
    return [f"piecewise-C1: {skipped} samples near tabulation knots skipped"] if skipped else []


# ----------------------------------------------------------------------
# laws


def _law_factor_axioms(f, cfg, s):
    base = validate_factor(f, DEFAULT_GRID, cfg.tol_recip)
    checks = list(base.checks)
    notes = list(base.notes)

    def safe(fn, *a):
        try:
            v = fn(*a)
        except (FactorRangeError, ArithmeticError, ValueError):
            return math.nan
        return v

    recip = 0.0
    foi = 0.0
    deriv = 0.0
    skipped = 0
    n = cfg.samples
    for _ in range(n):
        h = s.time()
        r = abs(safe(eval_factor, f, h) * safe(eval_factor, f, -h) - 1.0)
        recip = max(recip, r if math.isfinite(r) else math.inf)
        d = safe(eval_derivative, f, h)
        q = safe(force_of_interest, f, h) * safe(eval_factor, f, h)
        g = rel_gap((q,), (d,), 1e-300) if math.isfinite(q) and math.isfinite(d) else math.inf
        foi = max(foi, g)
        x = float(s.rng.uniform(-50.0, 50.0))
        if _near_knot(f, (x,)):
            skipped += 1
            continue
        fd = safe(central_difference, lambda y: eval_factor(f, y), x)
        an = safe(eval_derivative, f, x)
        g = rel_gap((an,), (fd,), fd_floor((safe(eval_factor, f, x),), x)) if math.isfinite(fd) and math.isfinite(an) else math.inf
        deriv = max(deriv, g)
    checks += [
        Check("reciprocity_random", recip, cfg.tol_recip, n),
        Check("force_of_interest_identity", foi, cfg.origin_rtol, n),
        Check("derivative_vs_fd", deriv, cfg.fd_rtol, n - skipped),
    ]
    return checks, notes + _skip_note(skipped)


def _law_assoc(f, cfg, s):
    assoc = comm = nfold = 0.0
    n = cfg.samples
    for _ in range(n):
        e, e2, e3 = s.event(), s.event(), s.event()
        lhs = alg.f_product(f, alg.f_product(f, e, e2), e3)
        rhs = alg.f_product(f, e, alg.f_product(f, e2, e3))
        assoc = max(assoc, rel_gap(lhs, rhs, cfg.floor))
        comm = max(comm, ulp_gap(alg.f_product(f, e, e2), alg.f_product(f, e2, e)))
        chain = [s.event() for _ in range(int(s.rng.integers(1, cfg.max_chain + 1)))]
        nfold = max(nfold, rel_gap(alg.n_fold_product(f, chain), alg.fold_product(f, chain), cfg.floor))
    return [
        Check("associativity", assoc, cfg.rtol, n),
        Check("commutativity_ulps", comm, 1.0, n),
        Check("n_fold_closed_form", nfold, cfg.rtol, n),
    ], []


def _law_neutral(f, cfg, s):
    worst = worst_state = 0.0
    n = cfg.samples
    for _ in range(n):
        e = s.event()
        worst = max(worst, rel_gap(alg.f_product(f, e, UNIT), e, cfg.floor))
        worst = max(worst, rel_gap(alg.f_product(f, UNIT, e), e, cfg.floor))
        st = e.state
        worst_state = max(worst_state, rel_gap(alg.state_product(f, st, State(0.0, 1.0)), st, cfg.floor))
    return [Check("neutral_unit", worst, cfg.rtol, n), Check("neutral_state", worst_state, cfg.rtol, n)], []


def _law_inverse(f, cfg, s):
    worst = invol = 0.0
    n = cfg.samples
    for _ in range(n):
        e = s.event()
        inv = alg.f_inverse(e)
        worst = max(worst, rel_gap(alg.f_product(f, e, inv), UNIT, cfg.floor))
        worst = max(worst, rel_gap(alg.f_product(f, inv, e), UNIT, cfg.floor))
        invol = max(invol, rel_gap(alg.f_inverse(inv), e, cfg.floor))
    accepted = 0
    for _ in range(10):
        try:
            alg.f_inverse(Event(s.time(), s.time(), 0.0))
            accepted += 1
        except alg.NotInvertibleError:
            pass
    return [
        Check("inverse_law", worst, cfg.rtol, n),
        Check("inverse_involution", invol, cfg.rtol, n),
        _count(accepted, 10, "zero_events_rejected"),
    ], []


def _law_components(f, cfg, s):
    credit_bad = debt_bad = debt_prod_bad = mixed_bad = 0
    n = cfg.samples
    sc, sd = Classification.STRICT_CREDIT, Classification.STRICT_DEBT
    for _ in range(n):
        a, b = s.event(sign=1), s.event(sign=1)
        x, y = s.event(sign=-1), s.event(sign=-1)
        credit_bad += sc not in classify(alg.f_product(f, a, b))
        debt_bad += sd not in classify(alg.f_anti_product(f, x, y))
        # debts are not closed under the f-product: two debts give a credit
        debt_prod_bad += sc not in classify(alg.f_product(f, x, y))
        mixed_bad += sd not in classify(alg.f_product(f, a, x))
    origin_bad = int(sc not in classify(UNIT)) + int(sd not in classify(NEG_UNIT))
    return [
        _count(credit_bad, n, "credits_closed_under_product"),
        _count(debt_bad, n, "debts_closed_under_anti_product"),
        _count(debt_prod_bad, n, "debt_times_debt_is_credit"),
        _count(mixed_bad, n, "credit_times_debt_is_debt"),
        _count(origin_bad, 2, "neutrals_in_components"),
    ], []


def _law_isomorphism(f, cfg, s):
    worst = 0.0
    sign_bad = 0
    n = cfg.samples
    for _ in range(n):
        e, e2 = s.event(), s.event()
        lhs = opposite(alg.f_product(f, e, e2))
        rhs = alg.f_anti_product(f, opposite(e), opposite(e2))
        worst = max(worst, rel_gap(lhs, rhs, cfg.floor))
        cls_e, cls_o = classify(e), classify(opposite(e))
        swapped = (Classification.STRICT_CREDIT in cls_e) == (Classification.STRICT_DEBT in cls_o)
        sign_bad += not swapped
    sign_bad += opposite(UNIT) != NEG_UNIT
    return [Check("intertwining", worst, cfg.rtol, n), _count(sign_bad, n + 1, "opposite_swaps_components")], []


def _law_anti(f, cfg, s):
    assoc = neutral = inverse = comm = 0.0
    closure_bad = 0
    n = cfg.samples
    for _ in range(n):
        e, e2, e3 = s.event(), s.event(), s.event()
        lhs = alg.f_anti_product(f, alg.f_anti_product(f, e, e2), e3)
        rhs = alg.f_anti_product(f, e, alg.f_anti_product(f, e2, e3))
        assoc = max(assoc, rel_gap(lhs, rhs, cfg.floor))
        neutral = max(neutral, rel_gap(alg.f_anti_product(f, e, NEG_UNIT), e, cfg.floor))
        # the anti-product inverse of (t,h,c) is (-t,-h,1/c) as well
        inverse = max(inverse, rel_gap(alg.f_anti_product(f, e, alg.f_inverse(e)), NEG_UNIT, cfg.floor))
        comm = max(comm, ulp_gap(alg.f_anti_product(f, e, e2), alg.f_anti_product(f, e2, e)))
        x, y = s.event(sign=-1), s.event(sign=-1)
        closure_bad += Classification.STRICT_DEBT not in classify(alg.f_anti_product(f, x, y))
    return [
        Check("anti_associativity", assoc, cfg.rtol, n),
        Check("anti_neutral", neutral, cfg.rtol, n),
        Check("anti_inverse", inverse, cfg.rtol, n),
        Check("anti_commutativity_ulps", comm, 1.0, n),
        _count(closure_bad, n, "debts_closed"),
    ], []


def _law_oneparam(f, cfg, s):
    worst = 0.0
    n = cfg.samples
    for _ in range(n):
        t, t2 = s.time(), s.time()
        lhs = alg.f_product(f, unit_evolution(f, t), unit_evolution(f, t2))
        worst = max(worst, rel_gap(lhs, unit_evolution(f, t + t2), cfg.floor))
    direction = tangent(EvolutionCurve(UNIT, f), 0.0).direction
    at_origin = rel_gap(direction, (1.0, 1.0, eval_derivative(f, 0.0)), 1e-300)
    at_origin = max(at_origin, rel_gap(direction, origin_direction(f, UNIT), 1e-300))
    return [
        Check("one_parameter_group", worst, cfg.rtol, n),
        Check("tangent_at_origin", at_origin, cfg.origin_rtol, 1),
    ], []


def _law_translation_group(f, cfg, s):
    assoc = comm = inverse = 0.0
    accepted = 0
    n = cfg.samples
    for _ in range(n):
        e0 = s.event()
        e, e2, e3 = s.event(), s.event(), s.event()
        cp = lambda a, b: alg.centered_product(f, e0, a, b)  # noqa: E731
        assoc = max(assoc, rel_gap(cp(cp(e, e2), e3), cp(e, cp(e2, e3)), cfg.floor))
        comm = max(comm, rel_gap(cp(e, e2), cp(e2, e), cfg.floor))
        inverse = max(inverse, rel_gap(cp(e, alg.translated_inverse(f, e0, e)), e0, cfg.floor))
        try:
            alg.translated_inverse(f, e0, Event(e.t, e.h, 0.0))
            accepted += 1
        except alg.NotInvertibleError:
            pass
    return [
        Check("centered_associativity", assoc, cfg.rtol, n),
        Check("centered_commutativity", comm, cfg.rtol, n),
        Check("translated_inverse", inverse, cfg.rtol, n),
        _count(accepted, n, "zero_events_not_invertible"),
    ], []


def _law_translation_identity(f, cfg, s):
    worst = at_unit = 0.0
    n = cfg.samples
    for _ in range(n):
        e0, e, e2 = s.event(), s.event(), s.event()
        lhs = alg.centered_product(f, e0, e, e2)
        rhs = alg.translate(f, e0, alg.f_product(f, e, e2))
        worst = max(worst, rel_gap(lhs, rhs, cfg.floor))
        at_unit = max(at_unit, rel_gap(alg.centered_product(f, UNIT, e, e2), alg.f_product(f, e, e2), cfg.floor))
    return [
        Check("centered_is_translated_product", worst, cfg.rtol, n),
        Check("centered_at_unit_is_product", at_unit, cfg.rtol, n),
    ], []


def _law_centered_neutral(f, cfg, s):
    worst = 0.0
    n = cfg.samples
    for _ in range(n):
        e0, e = s.event(), s.event()
        worst = max(worst, rel_gap(alg.centered_product(f, e0, e, e0), e, cfg.floor))
        worst = max(worst, rel_gap(alg.centered_product(f, e0, e0, e), e, cfg.floor))
    return [Check("centered_neutral", worst, cfg.rtol, n)], []


def _law_double_translation(f, cfg, s):
    bases = [UNIT, NEG_UNIT] + [s.event() for _ in range(cfg.grid_bases)]
    worst = 0.0
    base_bad = 0
    count = 0
    offsets = np.linspace(-cfg.time_range, cfg.time_range, cfg.grid_points)
    for e0 in bases:
        curve = EvolutionCurve(e0, f)
        for dt in offsets:
            t = e0.t + float(dt)
            worst = max(worst, rel_gap(double_translate_unit(f, e0, t), evolve(curve, t), cfg.floor))
            count += 1
        base_bad += evolve(curve, e0.t) != e0
    return [
        Check("double_translation", worst, cfg.rtol, count),
        _count(base_bad, len(bases), "curve_passes_base_exactly"),
    ], []


def _law_homomorphism(f, cfg, s):
    worst = cap_form = 0.0
    n = cfg.samples
    for _ in range(n):
        e0 = s.event()
        t0, h0, c0 = e0
        curve = EvolutionCurve(e0, f)
        line = curve.time_line
        t, t2 = s.time(), s.time()
        mu, mu2 = evolve(curve, t), evolve(curve, t2)
        lhs = alg.centered_product(f, e0, mu, mu2)
        rhs = evolve(curve, line.add(t, t2))
        worst = max(worst, rel_gap(lhs, rhs, cfg.floor))
        # capital evolution route: M(t) M(t') f(h0+h+h') f(h0) / (c0 f(h0+h) f(h0+h'))
        h, h2 = t - t0, t2 - t0
        M = lambda u: c0 * eval_factor(f, h0 + u - t0) / eval_factor(f, h0)  # noqa: E731
        via_m = (
            M(t) * M(t2) * eval_factor(f, h0 + h + h2) * eval_factor(f, h0)
            / (c0 * eval_factor(f, h0 + h) * eval_factor(f, h0 + h2))
        )
        direct = c0 * eval_factor(f, -h0) * eval_factor(f, h0 + t + t2 - 2 * t0)
        cap_form = max(cap_form, rel_gap((via_m,), (direct,), cfg.floor))
    return [
        Check("homomorphism", worst, cfg.rtol, n),
        Check("capital_evolution_form", cap_form, cfg.rtol, n),
    ], []


def _law_tangent(f, cfg, s):
    origin = fd_hr = fd_cap = 0.0
    skipped = 0
    n = cfg.samples
    for i in range(n):
        e0 = UNIT if i == 0 else s.event()
        curve = EvolutionCurve(e0, f)
        origin = max(origin, rel_gap(tangent(curve, e0.t).direction, origin_direction(f, e0), 1e-300))
        t = e0.t + s.time()
        if _near_knot(f, (e0.h, e0.h + (t - e0.t)), scale=t):
            skipped += 1
            continue
        an = tangent(curve, t).direction
        fd = tangent_fd(curve, t)
        floor = fd_floor(tuple(evolve(curve, t)), t)
        fd_hr = max(fd_hr, rel_gap(an[:2], fd[:2], floor))
        fd_cap = max(fd_cap, rel_gap(an[2:], fd[2:], floor))
    return [
        Check("tangent_at_origin", origin, cfg.origin_rtol, n),
        Check("tangent_vs_fd_times", fd_hr, cfg.fd_rtol, n - skipped),
        Check("tangent_vs_fd_capital", fd_cap, cfg.fd_rtol, n - skipped),
    ], _skip_note(skipped)


def _product_fd(f, e, e2):
    args = list(e) + list(e2)

    def comp(i):
        def fn(x):
            a = list(args)
            a[i] = x
            return tuple(alg.f_product(f, Event(*a[:3]), Event(*a[3:])))
        return fn

    out = []
    for i in range(6):
        fn = comp(i)
        x = args[i]
        step = FD_RELATIVE_STEP * max(1.0, abs(x))
        hi, lo = fn(x + step), fn(x - step)
        out.append(tuple((a - b) / (2 * step) for a, b in zip(hi, lo)))
    return out


def _law_partials(f, cfg, s):
    prod = inv = 0.0
    formula_bad = 0
    skipped = 0
    n = cfg.samples
    for _ in range(n):
        e, e2 = s.event(), s.event()
        inv_e = s.event(min_abs=cfg.min_capital_fd)
        _, h, c = e
        _, h2, c2 = e2
        ip = alg.inverse_partials(inv_e)
        formula_bad += ip[2] != (0.0, 0.0, -1 / inv_e.c**2)
        args = tuple(inv_e)
        for k in range(3):
            def fn(x, k=k):
                moved = Event(*(x if j == k else v for j, v in enumerate(args)))
                return tuple(alg.f_inverse(moved))[k]
            fd = central_difference(fn, args[k])
            inv = max(inv, rel_gap((ip[k][k],), (fd,), fd_floor(tuple(alg.f_inverse(inv_e)), args[k])))
        if _near_knot(f, (-h, -h2, h + h2), scale=max(abs(h), abs(h2))):
            skipped += 1
            continue
        pp = alg.product_partials(f, e, e2)
        formula_bad += pp.c != (0.0, 0.0, eval_factor(f, -h) * c2 * eval_factor(f, -h2) * eval_factor(f, h + h2))
        value = tuple(alg.f_product(f, e, e2))
        for x, an, fd in zip((*e, *e2), pp, _product_fd(f, e, e2)):
            prod = max(prod, rel_gap(an, fd, fd_floor(value, x)))
    return [
        Check("product_partials_vs_fd", prod, cfg.fd_rtol, n - skipped),
        Check("inverse_partials_vs_fd", inv, cfg.fd_rtol, n),
        _count(formula_bad, 2 * n - skipped, "closed_forms_exact"),
    ], _skip_note(skipped)


LAWS = {
    "D1-factor-axioms": _law_factor_axioms,
    "T1-assoc": _law_assoc,
    "T1-neutral": _law_neutral,
    "T1-inverse": _law_inverse,
    "T1-components": _law_components,
    "T1-isomorphism": _law_isomorphism,
    "T2-anti": _law_anti,
    "T3-oneparam": _law_oneparam,
    "T4-translation-group": _law_translation_group,
    "T5-translation-identity": _law_translation_identity,
    "T6-centered-neutral": _law_centered_neutral,
    "T6b-double-translation": _law_double_translation,
    "T8-homomorphism": _law_homomorphism,
    "T9-tangent": _law_tangent,
    "P1-partials-fd": _law_partials,
}

LAW_IDS = tuple(LAWS)


def _rng(seed: int, law_id: str) -> np.random.Generator:
    return np.random.default_rng([int(seed), zlib.crc32(law_id.encode())])


def run_law(law_id: str, f: CapFactor, config: VerifyConfig | None = None) -> AxiomReport:
    """Run one law; the report is a pure function of ``(law_id, f, config)``."""
    if law_id not in LAWS:
        raise UnknownLawError(f"unknown law {law_id!r}; available: {', '.join(LAW_IDS)}")
    cfg = config or VerifyConfig()
    sampler = _Sampler(cfg, _rng(cfg.seed, law_id))
    try:
        checks, notes = LAWS[law_id](f, cfg, sampler)
    except (FactorRangeError, ArithmeticError, ValueError) as exc:
        checks = [Check("evaluation", math.inf, 0.0, 0)]
        notes = [f"evaluation failed: {exc}"]
    return AxiomReport.from_checks(law_id, checks, seed=cfg.seed, notes=notes)


def run_all(f: CapFactor, config: VerifyConfig | None = None) -> list[AxiomReport]:
    return [run_law(law_id, f, config) for law_id in LAW_IDS]


def all_passed(reports) -> bool:
    return all(r.passed for r in reports)


def with_overrides(config: VerifyConfig, **kw) -> VerifyConfig:
    return replace(config, **{k: v for k, v in kw.items() if v is not None})
