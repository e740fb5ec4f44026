"""Pass/fail records for numerically checked laws."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field


@dataclass(frozen=True)
class Check:
    """One measured quantity inside a law, with its own tolerance."""

    name: str
    max_residual: float
    tolerance: float
    samples: int = 0

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance

    @property
    def excess(self) -> float:
        # residual in units of tolerance; used to pick the worst check
        if self.tolerance > 0:
            return self.max_residual / self.tolerance
        return 0.0 if self.max_residual <= 0 else math.inf


@dataclass(frozen=True)
class AxiomReport:
    law_id: str
    samples: int
    max_residual: float
    tolerance: float
    passed: bool
    seed: int | None = None
    checks: tuple[Check, ...] = ()
    notes: tuple[str, ...] = ()

    @classmethod
    def from_checks(cls, law_id, checks, seed=None, notes=()):
        """Summarise several checks; the headline numbers come from the worst one.

        ``passed`` is true exactly when the headline residual is within its
        tolerance, which is the case iff every check passed.
        """
        checks = tuple(checks)
        if not checks:
            raise ValueError(f"{law_id}: a report needs at least one check")
        worst = max(checks, key=lambda c: c.excess)
        return cls(
            law_id=law_id,
            samples=sum(c.samples for c in checks),
            max_residual=worst.max_residual,
            tolerance=worst.tolerance,
            passed=worst.passed,
            seed=seed,
            checks=checks,
            notes=tuple(notes),
        )

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["checks"] = [dict(asdict(c), passed=c.passed) for c in self.checks]
        d["notes"] = list(self.notes)
        return d


def reports_to_json(reports, indent=2) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=indent)


def format_table(reports) -> str:
    rows = [("law", "samples", "max_residual", "tolerance", "result")]
    for r in reports:
        rows.append(
            (
                r.law_id,
                str(r.samples),
                f"{r.max_residual:.3e}",
                f"{r.tolerance:.1e}",
                "PASS" if r.passed else "FAIL",
            )
        )
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)
