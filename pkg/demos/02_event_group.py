"""
The group of capitalized events
===============================

An event ``(t, h, c)`` is a capital ``c`` observed at time ``t`` that has
been capitalizing for ``h``.  Multiplying two events discounts each capital
back to its origin and capitalizes the product over the combined time.
"""

from capgroup import (
    CapFactor,
    Event,
    classify,
    f_anti_product,
    f_inverse,
    f_product,
    n_fold_product,
    opposite,
)

f = CapFactor.odd_poly_exp([0.05, 0.001])
a = Event(1, 2, 100)
b = Event(3, 1, 50)

ab = f_product(f, a, b)
print("a b       =", tuple(ab))
print("b a       =", tuple(f_product(f, b, a)))

# (0, 0, 1) is neutral and every event with non-zero capital has an inverse.
print("a o       =", tuple(f_product(f, a, Event(0, 0, 1))))
print("a a^-1    =", tuple(f_product(f, a, f_inverse(a))))

# Associativity, compared with the closed form for several factors at once.
c = Event(-2, 0.5, 3)
left = f_product(f, f_product(f, a, b), c)
print("(ab)c     =", tuple(left))
print("closed    =", tuple(n_fold_product(f, [a, b, c])))

# Credits multiply into credits.  Debts need the anti-product, whose neutral
# is (0, 0, -1); flipping signs carries one product onto the other.
debt = opposite(a)
print("debt class:", sorted(k.value for k in classify(debt)))
print("anti(-a, -b) =", tuple(f_anti_product(f, debt, opposite(b))))
print("-(a b)       =", tuple(opposite(ab)))
