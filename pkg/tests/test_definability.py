from fractions import Fraction

import pytest

from htpq.definability import (
    DiophantineModelSpec,
    ExistentialDefSpec,
    SpecError,
    check_existential_def,
    check_model,
)
from htpq.polyring import Polynomial, parse_poly
from htpq.subrings import FiniteInclude

P = parse_poly
Z = FiniteInclude()
IDENTITY = DiophantineModelSpec(1, Polynomial(), P("x0 + x1 - x2"), P("x0*x1 - x2"))


def test_identity_model_over_Z():
    r = check_model(IDENTITY, Z, 5, 10)
    assert r.status.startswith("consistent at budget")
    assert r.missing == []
    assert r.representatives == {k: (Fraction(k),) for k in range(-5, 6)}
    assert r.count("refuted") == r.count("inconclusive") == 0
    plus = sum(1 for a in range(-5, 6) for b in range(-5, 6) if abs(a + b) <= 5)
    times = sum(1 for a in range(-5, 6) for b in range(-5, 6) if abs(a * b) <= 5)
    assert r.count("verified") == plus + times


def test_perturbed_fact_is_refuted():
    bad = DiophantineModelSpec(1, Polynomial(), P("(x0 + x1 - x2)*((x0 - 2)^2 + (x1 - 2)^2 + (x2 - 5)^2)"), IDENTITY.h_times)
    r = check_model(bad, Z, 6, 10)
    assert r.status == "refuted"
    assert [c.claim for c in r.checks if c.status == "refuted"] == ["non-fact 2 + 2 = 5 holds"]


def test_injected_half_is_refuted():
    r = check_model(IDENTITY, FiniteInclude({2}), 4, 6, inject={1: ["1/2"]})
    assert r.status == "refuted"


def test_empty_domain():
    spec = DiophantineModelSpec(1, P("x0^2 + 1"), IDENTITY.h_plus, IDENTITY.h_times)
    r = check_model(spec, Z, 5, 10)
    assert r.missing == list(range(-5, 6))
    assert r.count("refuted") == 0


def test_model_spec_errors():
    with pytest.raises(SpecError):
        DiophantineModelSpec(0, Polynomial(), Polynomial(), Polynomial())
    with pytest.raises(SpecError):
        check_model(IDENTITY, Z, 0, 5)
    with pytest.raises(SpecError):
        check_model(IDENTITY, Z, 2, 5, inject={1: [1, 2]})


def test_width_two_model():
    # pairs (k, 0) with componentwise operations
    h = P("x1")
    hp = P("(x0 + x2 - x4)^2 + x1^2 + x3^2 + x5^2")
    ht = P("(x0*x2 - x4)^2 + x1^2 + x3^2 + x5^2")
    r = check_model(DiophantineModelSpec(2, h, hp, ht), Z, 3, 4)
    assert r.status.startswith("consistent")
    assert r.representatives[2] == (2, 0)


def test_existential_definition_examples():
    zero = ExistentialDefSpec(Polynomial())
    r = check_existential_def(zero, Z, [-2, -1, 0, 1, 2], 10)
    assert r.status.startswith("consistent at budget")
    assert all(c.status == "verified" for c in r.checks)
    r = check_existential_def(zero, FiniteInclude({2}), [0, Fraction(1, 2)], 10)
    assert r.status == "refuted"
    g = ExistentialDefSpec(P("x1^2 + (x0^2 - x0)^2"))
    r = check_existential_def(g, FiniteInclude({2}), [0, 1, Fraction(1, 2)], 10)
    assert [c.status for c in r.checks] == ["verified", "verified", "inconclusive"]
    assert r.status.startswith("consistent")


def test_probe_outside_ring_is_skipped():
    r = check_existential_def(ExistentialDefSpec(Polynomial()), Z, [Fraction(1, 3), 4], 5)
    assert [c.status for c in r.checks] == ["skipped", "verified"]
    with pytest.raises(SpecError):
        check_existential_def(ExistentialDefSpec(Polynomial()), Z, [], 5)


def test_vocabulary_never_claims_validity():
    reports = [
        check_existential_def(ExistentialDefSpec(Polynomial()), Z, [-1, 0, 1], 5).to_record(),
        check_model(IDENTITY, Z, 3, 5).to_record(),
    ]
    assert "valid" not in str(reports).replace("invalid", "")
