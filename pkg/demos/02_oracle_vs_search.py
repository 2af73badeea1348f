"""Two-squares oracle against bounded search on a few rings."""

from fractions import Fraction

from htpq import parse_descriptor, parse_poly, search
from htpq.quadratic_oracle import hilbert_symbol, two_squares_in_subring

print("Hilbert symbols (2, 3)_v:", {v: hilbert_symbol(2, 3, v) for v in ("inf", 2, 3)})
for ring in ("include:", "include:5", "residue:3mod4", "exclude:5"):
    W = parse_descriptor(ring)
    for c, e in ((5, 1), (1, 3), (2, 1), (3, 6)):
        f = parse_poly(f"{c}*x0^2 + {c}*x1^2 - {e}")
        v = two_squares_in_subring(Fraction(e, c), W)
        out = search(f, W, 100)
        seen = out.witness.as_text() if hasattr(out, "witness") else "none up to height 100"
        print(f"{ring:14} {c}(X^2+Y^2) = {e:2}: oracle {'yes' if v.solvable else 'no ':3}  search {seen}")
