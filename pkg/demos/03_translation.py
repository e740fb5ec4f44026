"""
Centering the product at another event
======================================

Translating by an invertible event ``e0`` gives a new product with ``e0``
as its neutral element: ``[e|e']_e0 = e e' e0^-1``.
"""

from capgroup import CapFactor, Event, ProductKind, centered_product, f_product, translate, translated_inverse

f = CapFactor.exponential(0.05)
e0 = Event(1, 1, 10)
x, y = Event(1, 2, 100), Event(3, 1, 50)

print("[x|y]_e0          =", tuple(centered_product(f, e0, x, y)))
print("(x y) e0^-1       =", tuple(translate(f, e0, f_product(f, x, y))))
print("[x|e0]_e0         =", tuple(centered_product(f, e0, x, e0)))

inv = translated_inverse(f, e0, x)
print("inverse of x      =", tuple(inv))
print("[x|inverse]_e0    =", tuple(centered_product(f, e0, x, inv)))

# The same operations through a ProductKind value.
centered = ProductKind.centered_at(e0)
print("neutral           =", tuple(centered.neutral))
print("kind(x, y)        =", tuple(centered(f, x, y)))
