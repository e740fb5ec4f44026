"""
Checking every law numerically
==============================

Each law is sampled at random with a fixed seed and summarised as a
report with its worst residual.
"""

from capgroup import CapFactor, VerifyConfig, run_all
from capgroup.report import format_table

for f in (CapFactor.exponential(0.05), CapFactor.tabulated_odd_exp([(1, 0.04), (2, 0.09), (5, 0.25)])):
    reports = run_all(f, VerifyConfig(samples=100))
    print(f.label)
    print(format_table(reports))
    for r in reports:
        for note in r.notes:
            print(f"  {r.law_id}: {note}")
    print()
