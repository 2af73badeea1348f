"""Reductions between solvability problems on small inputs."""

from fractions import Fraction

from htpq import parse_poly, to_text
from htpq.polyring import eval_poly
from htpq.reductions import GadgetRegistry, conjoin, homogenize_with_positivity, mock_gadget, mock_semantics_holds, semilocal_reduce
from htpq.solver import search
from htpq.subrings import FiniteInclude

f = parse_poly("3*x0 - 2")
red = homogenize_with_positivity(f)
print("f       =", to_text(f))
print("reduced =", to_text(red.reduced))
fwd = red.forward({0: Fraction(2, 3)})
print("integer witness from the rational zero 2/3:", fwd, "value", eval_poly(red.reduced, fwd))
print("and back:", red.backward(fwd))

gs = [parse_poly("x0 - 2"), parse_poly("x0*x1 - 1")]
out = search(conjoin(gs), FiniteInclude({2}), 10)
print("common zero of", [to_text(g) for g in gs], "over Z[1/2]:", out.witness.as_text())

reg = GadgetRegistry()
reg.register(mock_gadget(5))
sl = semilocal_reduce(parse_poly("5*x0 - 1"), [5], reg)
print("semilocal reduction with a mock gadget:", len(sl.instances), "instance(s), semantics", sl.semantics)
print("  root 1/5 survives once 5 is excluded:", mock_semantics_holds(sl, {0: Fraction(1, 5)}))
