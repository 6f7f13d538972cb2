"""A walk through the algebra of reflexive processes.

A physical process is a capital letter; lowercase letters are the
information-processing elements watching it.  Words stack reflections:
``Txy`` is y's image of x's image of T.  Polynomials collect the words
that exist in a system; multiplying by (1 + observers) is one step of
"becoming aware".

Run:  python demos/demo_algebra.py
"""

from reflexgrid import apply_awareness, atom, equals, parse

print("A bare physical process:")
omega = parse("T")
print("  Ω =", omega)

print("\nElement x becomes aware of it:")
omega = apply_awareness(omega, [atom("x")])
print("  Ω =", omega)

print("\nThen y becomes aware of T *and* of x's watching:")
omega = apply_awareness(omega, [atom("y")])
print("  Ω =", omega, "   (Txy is y's image of x's image of T)")

print("\nIf z can only see T through y, the reality differs from direct sight:")
direct = parse("T(1+x+y+z)")
mediated = parse("T(1+x+y+yz)")
print("  direct:  ", direct)
print("  mediated:", mediated)
print("  same system?", equals(direct, mediated))

print("\nOrder of reflection matters; the product is not commutative:")
print("  xy =", parse("x") * parse("y"), "   yx =", parse("y") * parse("x"))
print("  equal?", equals(parse("xy"), parse("yx")))

print("\nAnything to the power zero is the unit process:")
print("  (x+y)^0 =", parse("(x+y)^0"))

print("\nA four-way game coming to life, then growing images of images:")
for text in (
    "T",
    "T(1 + x + y + z + w)",
    "T(1 + x + y + z + w + yx)",
    "T(1 + x + y + z + w + yx + yxy)",
):
    print("  Ω =", parse(text))

print("\nThe three fleet structures used by the grid scenarios:")
print("  selfish:    ", parse("T(1 + a0 + a1 + a2)"))
print("  mutual:     ", parse("T(1 + a0 + a1 + (a0+a1)a0 + (a0+a1)a1)"))
print("  controlled: ", parse("T(1 + c + a0 + a1) + Tc(a0 + a1)"))
