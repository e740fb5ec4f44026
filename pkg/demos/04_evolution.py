"""
Evolution curves and the exponential map
========================================

Letting an event keep capitalizing traces a curve through event space.
It respects the centered product and is pinned down by its velocity at
the base event.
"""

import io

import numpy as np

from capgroup import CapFactor, Event, EvolutionCurve, centered_product, evolve, exp_map, tangent
from capgroup.evolution import homomorphism_residual, tangent_fd, write_csv

f = CapFactor.odd_poly_exp([0.05, 0.001])
e0 = Event(1, 2, 100)
curve = EvolutionCurve(e0, f)

ts = np.linspace(-2, 6, 5)
print(curve.sample(ts))

# Combining two points of the curve with the product centered at e0 moves
# along the curve by the translated sum t + t' - t0.
t, t2 = 2.5, 4.0
print(tuple(centered_product(f, e0, evolve(curve, t), evolve(curve, t2))))
print(tuple(evolve(curve, t + t2 - e0.t)))

# The tangent at the base is (1, 1, c0 delta(h0)); finite differences agree.
print("analytic", tangent(curve, 3.0).direction)
print("central ", tangent_fd(curve, 3.0))

# The exponential map returns this curve.  Scaling its capital by 1.001
# breaks the homomorphism, which is why no other curve has this tangent.
curve, tan = exp_map(f, e0.t, e0)
pairs = np.random.default_rng(0).uniform(-20, 20, size=(50, 2))
print("residual exact   ", homomorphism_residual(curve, pairs))
print("residual x 1.001 ", homomorphism_residual(curve, pairs, capital_scale=1.001))

buf = io.StringIO()
write_csv(curve, [1.0, 2.0, 3.0], buf)
print(buf.getvalue())
