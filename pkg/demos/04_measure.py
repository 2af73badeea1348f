"""Monte Carlo measure of a solvability class next to its exact value."""

from htpq import estimate_measure_A, parse_poly
from htpq.measure import boundary_gap

for text in ("5*x0^2 + 5*x1^2 - 1", "10*x0^2 + 10*x1^2 - 1", "x0^2 + x1^2 - 3*x2^2 - 2"):
    f = parse_poly(text)
    est = estimate_measure_A(f, 20, 20000, seed=1)
    print(f"{text:28} estimate {float(est.value):.4f}  95% CI [{float(est.ci_low):.4f}, {float(est.ci_high):.4f}]")
    try:
        gap = boundary_gap(f, 20, 6)
    except ValueError as exc:
        print("   no exact bounds:", exc)
        continue
    note = " (oracle silent)" if gap.oracle_inconclusive else ""
    print(f"{'':28} certified A {gap.lower_A}, complement {gap.lower_comp}, gap {gap.gap}{note}")
