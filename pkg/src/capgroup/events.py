"""Capitalized financial events ``(t, h, c)`` and their states ``(h, c)``.

``t`` is the reference time, ``h`` the capitalization time (the event has
been capitalizing since ``t - h``) and ``c`` the capital at ``t``.  Units are
documentation only: times in periods, capitals in monetary units.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class Event:
    t: float
    h: float
    c: float

    def __post_init__(self):
        for name in ("t", "h", "c"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"event component {name}={v!r} is not finite")
            object.__setattr__(self, name, v)

    def __iter__(self):
        return iter((self.t, self.h, self.c))

    @property
    def state(self) -> "State":
        return State(self.h, self.c)

    @property
    def invertible(self) -> bool:
        return self.c != 0.0


@dataclass(frozen=True, slots=True)
class State:
    h: float
    c: float

    def __post_init__(self):
        for name in ("h", "c"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"state component {name}={v!r} is not finite")
            object.__setattr__(self, name, v)

    def __iter__(self):
        return iter((self.h, self.c))


UNIT = Event(0.0, 0.0, 1.0)
NEG_UNIT = Event(0.0, 0.0, -1.0)


class Classification(str, enum.Enum):
    ZERO = "zero"
    STRICT_CREDIT = "strict_credit"
    STRICT_DEBT = "strict_debt"
    CREDIT = "credit"
    DEBT = "debt"


def classify(e: Event) -> frozenset[Classification]:
    """Every class the event belongs to; credits and debts overlap on zero events."""
    c = e.c
    out = set()
    if c == 0:
        out.add(Classification.ZERO)
    if c >= 0:
        out.add(Classification.CREDIT)
    if c > 0:
        out.add(Classification.STRICT_CREDIT)
    if c <= 0:
        out.add(Classification.DEBT)
    if c < 0:
        out.add(Classification.STRICT_DEBT)
    return frozenset(out)


def opposite(x):
    """Flip the sign of the capital of an event or a state."""
    return dataclasses.replace(x, c=-x.c)


def project_state(e: Event) -> State:
    return State(e.h, e.c)


def project_multitime(e: Event) -> tuple[float, float]:
    return (e.t, e.h)


def project_reference_time(e: Event) -> float:
    return e.t


def origin_time(e: Event) -> float:
    return e.t - e.h


# literals -------------------------------------------------------------


def parse_event(text: str) -> Event:
    """Parse ``"t,h,c"``."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise ValueError(f"expected an event literal 't,h,c', got {text!r}")
    try:
        return Event(*(float(p) for p in parts))
    except ValueError as exc:
        raise ValueError(f"bad event literal {text!r}: {exc}") from None


def format_number(x: float) -> str:
    """Shortest decimal that round-trips; integral values lose the trailing ``.0``."""
    if x == 0:
        return "0"
    if x.is_integer() and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def format_event(e) -> str:
    return ",".join(format_number(float(v)) for v in e)
