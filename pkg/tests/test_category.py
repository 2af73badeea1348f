import itertools

import pytest

from htpq.category import (
    CylinderCertificate,
    InA,
    Inconclusive,
    InComplementInterior,
    Member,
    NonMember,
    PhiBudget,
    ProbeFailure,
    Undecided,
    UndecidedUpTo,
    boundary_probe,
    generic_check,
    negative_certificates,
    nowhere_dense_probe,
    phi_decide,
    positive_certificates,
    validate_certificate,
)
from htpq.polyring import parse_poly
from htpq.quadratic_oracle import decide_family_member
from htpq.subrings import CofiniteExclude, Condition, FiniteInclude, ResidueRule
from fractions import Fraction

P = parse_poly
W3 = ResidueRule(((3, 4),))


def bits(certs):
    return [c.condition.bits for c in certs]


def test_positive_examples():
    certs = positive_certificates(P("2*x0^2 + 2*x1^2 - 1"), 1, 2)
    assert bits(certs) == ["1"]
    assert certs[0].witness.assignment == {0: Fraction(1, 2), 1: Fraction(1, 2)}
    certs = positive_certificates(P("x0 - 3"), 0, 5)
    assert bits(certs) == [""] and certs[0].witness.assignment == {0: 3}
    assert positive_certificates(P("x0^2 + 1"), 4, 10) == []


def test_negative_examples():
    f = P("5*x0^2 + 5*x1^2 - 1")
    certs = negative_certificates(f, 3)
    assert bits(certs) == ["000", "010", "100", "110"]
    assert all(c.condition.bits[2] == "0" for c in certs)
    assert bits(negative_certificates(P("x0^2 + x1^2 - 7"), 0)) == [""]
    assert isinstance(negative_certificates(P("x0^3 - 2"), 4), Inconclusive)


def test_certificates_are_minimal_and_valid():
    f = P("10*x0^2 + 10*x1^2 - 1")
    pos, neg = positive_certificates(f, 5, 20), negative_certificates(f, 5)
    for certs in (pos, neg):
        for a, b in itertools.permutations(certs, 2):
            assert not b.condition.extends(a.condition)
        assert all(validate_certificate(c) for c in certs)
    # no cylinder certified both ways
    for a in pos:
        for b in neg:
            assert not (a.condition.extends(b.condition) or b.condition.extends(a.condition))


def test_positive_prefix_coherence():
    f = P("2*x0^2 + 2*x1^2 - 1")
    (cert,) = positive_certificates(f, 1, 2)
    for tail in ("0", "1", "0110"):
        ext = CylinderCertificate("positive", f, cert.condition + tail, witness=cert.witness)
        assert validate_certificate(ext)


def test_certificate_record_round_trip():
    f = P("5*x0^2 + 5*x1^2 - 1")
    for c in positive_certificates(f, 3, 10) + negative_certificates(f, 3):
        assert CylinderCertificate.from_record(c.to_record()) == c


def test_validate_rejects_forgeries():
    f = P("5*x0^2 + 5*x1^2 - 1")
    (good, *_) = positive_certificates(f, 3, 10)
    assert not validate_certificate(CylinderCertificate("positive", f, Condition("11"), witness=good.witness))
    assert not validate_certificate(CylinderCertificate("negative", f, Condition("111")))


def test_boundary_probe_examples():
    f = P("5*x0^2 + 5*x1^2 - 1")
    assert isinstance(boundary_probe(f, FiniteInclude({5}), 4, 10), InA)
    st = boundary_probe(f, W3, 4, 10)
    assert isinstance(st, InComplementInterior) and st.excluded == {5}
    assert boundary_probe(P("x0^3 - 2"), FiniteInclude(), 4, 20) == UndecidedUpTo(4, 20)


def test_phi_examples():
    r = phi_decide(P("2*x0 - 1"), FiniteInclude())
    assert isinstance(r, NonMember) and r.excluded == {2}
    assert isinstance(phi_decide(P("2*x0 - 1"), FiniteInclude({2})), Member)
    for W in (FiniteInclude(), CofiniteExclude(), W3):
        r = phi_decide(P("x0^2 + x1^2 - 7"), W)
        assert isinstance(r, NonMember) and r.excluded == frozenset()
    r = phi_decide(P("5*x0^2 + 5*x1^2 - 1"), W3)
    assert isinstance(r, NonMember) and r.excluded == {5}


def test_phi_undecided_only_on_budget():
    r = phi_decide(P("x0^3 - 2"), CofiniteExclude(), PhiBudget(rounds=4, max_height=16))
    assert r == Undecided(4, 16, False)


def test_generic_examples():
    rep = generic_check(FiniteInclude(), [P("2*x0 - 1")])
    assert rep.passes and isinstance(rep.results[0][1], NonMember)
    rep = generic_check(W3, [P("5*x0^2 + 5*x1^2 - 1")])
    assert rep.passes and rep.results[0][1].excluded == {5}
    assert generic_check(W3, []).passes
    assert not generic_check(W3, [P("x0^3 - 2")], PhiBudget(rounds=3, max_height=8)).passes


def test_nowhere_dense_examples():
    f = P("5*x0^2 + 5*x1^2 - 1")
    r = nowhere_dense_probe(f, Condition("1"))
    assert r.extension.bits == "100" and r.certificate.kind == "negative"
    r = nowhere_dense_probe(f, Condition(""))
    assert r.extension.bits == "000"
    r = nowhere_dense_probe(f, Condition("001"))
    assert r.extension.bits == "001" and r.certificate.kind == "positive"
    for s in ("", "0", "1011"):
        r = nowhere_dense_probe(P("x0 - 3"), Condition(s))
        assert r.extension.bits == s and r.certificate.kind == "positive"
    for c in (nowhere_dense_probe(f, Condition(s)).certificate for s in ("", "11", "0101")):
        assert validate_certificate(c)


def test_nowhere_dense_reports_failure():
    r = nowhere_dense_probe(P("x0^3 - 2"), Condition("1"), max_depth=4, H=10)
    assert isinstance(r, ProbeFailure) and r.explored == 1 + 2 + 4 + 8


@pytest.mark.parametrize("text", ["5*x0^2 + 5*x1^2 - 1", "2*x0 - 1", "3*x0^2 + 3*x1^2 - 6", "x0^2 + x1^2 - 21"])
@pytest.mark.parametrize("W", [FiniteInclude(), FiniteInclude({5}), W3, CofiniteExclude({5})])
def test_phi_matches_oracle(text, W):
    f = P(text)
    r = phi_decide(f, W)
    assert isinstance(r, (Member, NonMember))
    assert isinstance(r, Member) == decide_family_member(f, W).solvable
