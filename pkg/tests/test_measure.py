import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from htpq.measure import boundary_gap, cylinder_union_measure, estimate_measure_A, sample_condition
from htpq.polyring import Polynomial, parse_poly
from htpq.subrings import Condition, Sampled, restrict

P = parse_poly
F = Fraction


def test_sample_condition():
    assert sample_condition(3, 7, 40) == sample_condition(3, 7, 40)
    assert sample_condition(3, 7, 0) == Condition("")
    assert sample_condition(3, 7, 10).bits == sample_condition(3, 7, 40).bits[:10]
    assert sample_condition(3, 0, 25) == restrict(Sampled(3), 25)
    freq = sum(sample_condition(11, i, 10).bits.count("1") for i in range(10**4)) / 10**5
    assert 0.49 <= freq <= 0.51


def test_union_examples():
    assert cylinder_union_measure(["101"]) == F(1, 8)
    assert cylinder_union_measure(["0", "1"]) == 1
    assert cylinder_union_measure(["1", "01"]) == F(3, 4)
    assert cylinder_union_measure([]) == 0
    assert cylinder_union_measure([""]) == 1
    assert cylinder_union_measure([Condition("11"), Condition("1")]) == F(1, 2)


def truth_table_measure(sigmas):
    L = max((len(s) for s in sigmas), default=0)
    hits = sum(any(w.startswith(s) for s in sigmas) for w in ("".join(t) for t in itertools.product("01", repeat=L)))
    return F(hits, 2**L)


strings = st.text(alphabet="01", max_size=7)


@given(st.lists(strings, max_size=6))
def test_union_matches_truth_table(sigmas):
    assert cylinder_union_measure(sigmas) == truth_table_measure(sigmas)


def test_estimate_examples():
    assert estimate_measure_A(P("x0 - 3"), 10, 200, 1).value == 1
    assert estimate_measure_A(P("x0^2 + 1"), 10, 200, 1).value == 0
    e = estimate_measure_A(P("5*x0^2 + 5*x1^2 - 1"), 5, 10**4, 2)
    assert e.ci_low <= F(1, 2) <= e.ci_high
    assert e.ci_low <= e.value <= e.ci_high


def test_estimate_is_exact_count_of_samples():
    # the statistic equals the fraction of samples whose bit for 5 is set
    f = P("5*x0^2 + 5*x1^2 - 1")
    e = estimate_measure_A(f, 10, 500, 9)
    assert e.value == F(sum(sample_condition(9, i, 4).bits[2] == "1" for i in range(500)), 500)


def test_estimate_monotone_in_height():
    f = P("10*x0^2 + 10*x1^2 - 1")  # needs 2 and 5 in W, witness height 10
    vals = [estimate_measure_A(f, H, 2000, 4).value for H in (2, 3, 6, 12, 20)]
    assert vals == sorted(vals)
    assert vals[0] == 0 and vals[-1] > 0


def test_estimate_deterministic_across_jobs():
    f = P("2*x0^2 + 2*x1^2 - 1")
    ests = {estimate_measure_A(f, 8, 5000, 17, jobs=j) for j in (1, 3, 4)}
    assert len(ests) == 1


def test_estimate_rejects():
    with pytest.raises(ValueError):
        estimate_measure_A(Polynomial(), 5, 10, 0)
    with pytest.raises(ValueError):
        estimate_measure_A(P("x0"), 5, 0, 0)


def test_boundary_gap_examples():
    g = boundary_gap(P("5*x0^2 + 5*x1^2 - 1"), 10, 4)
    assert (g.lower_A, g.lower_comp, g.gap) == (F(1, 2), F(1, 2), 0)
    g = boundary_gap(P("x0^2 + x1^2 - 7"), 10, 4)
    assert (g.lower_comp, g.gap) == (1, 0)
    g = boundary_gap(P("x0 - 3"), 10, 4)
    assert (g.lower_A, g.gap) == (1, 0)
    g = boundary_gap(P("x0^3 - 2"), 10, 4)
    assert g.oracle_inconclusive and g.gap == 1
