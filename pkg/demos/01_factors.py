"""
Capitalization factors
======================

A factor turns a capitalization time into a growth multiple.  The ones
this package builds on are exponentials of odd functions, so growing for
``h`` and then discounting for ``h`` always lands back on 1.
"""

import numpy as np

from capgroup import CapFactor, force_of_interest, validate_factor

# Three factors: constant force, a force that grows with time, and one
# read from a table of exponents.
compound = CapFactor.exponential(0.05)
drifting = CapFactor.odd_poly_exp([0.05, 0.001])
table = CapFactor.tabulated_odd_exp([(1, 0.04), (2, 0.09), (5, 0.25), (10, 0.55)])

h = np.array([0.5, 1, 2, 5, 10])
for f in (compound, drifting, table):
    grow = np.array([f(x) for x in h])
    back = np.array([f(-x) for x in h])
    print(f"{f.label:>30}: f(h) = {np.round(grow, 6)}, f(h) f(-h) - 1 = {np.abs(grow * back - 1).max():.1e}")

# The force of interest is the log-derivative f'/f.  It is flat for the
# compound factor and rises for the drifting one.
for x in (0.0, 2.0, 5.0):
    print(f"delta({x}) compound {force_of_interest(compound, x):.4f}  drifting {force_of_interest(drifting, x):.4f}")

# Simple interest, 1 + 0.05 h, is not reciprocal and fails validation.
simple = CapFactor.from_callable(lambda x: 1 + 0.05 * x, lambda x: 0.05, name="simple interest")
for f in (compound, simple):
    report = validate_factor(f)
    print(f"{f.label}: {'PASS' if report.passed else 'FAIL'} (reciprocity residual {report.check('reciprocity').max_residual:.2e})")
