"""Bounded checks of a diophantine model of Z and of existential definitions."""

from fractions import Fraction

from htpq import DiophantineModelSpec, ExistentialDefSpec, Polynomial, check_existential_def, check_model, parse_poly
from htpq.subrings import FiniteInclude

identity = DiophantineModelSpec(1, Polynomial(), parse_poly("x0 + x1 - x2"), parse_poly("x0*x1 - x2"))
r = check_model(identity, FiniteInclude(), 6, 12)
print("identity model over Z:", r.status, "with", r.count("verified"), "facts verified")

r = check_model(identity, FiniteInclude({2}), 3, 6, inject={1: ["1/2"]})
print("1/2 forced as the unit over Z[1/2]:", r.status, "->", [c.claim for c in r.checks if c.status == "refuted"][:3])

g = parse_poly("x1^2 + (x0^2 - x0)^2")
for ring in ("Z", "Z[1/2]"):
    W = FiniteInclude() if ring == "Z" else FiniteInclude({2})
    rep = check_existential_def(ExistentialDefSpec(g), W, [0, 1, Fraction(1, 2)], 10)
    print(f"g = {g} over {ring}:", rep.status, [(c.claim, c.status) for c in rep.checks])
