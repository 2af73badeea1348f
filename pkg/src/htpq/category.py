"""Cylinder certificates and topological probes on the space of prime sets.

A condition sigma (a 0/1 string over prime indices) names the cylinder of all
W extending it.  Two kinds of certificates are produced:

positive
    a witness whose denominator primes are all forced into W by sigma, so
    f has a zero in R_W for every W in the cylinder;
negative
    an exact oracle verdict that f has no zero in R_{P - A0} with A0 the
    primes sigma forces out of W; every ring in the cylinder is smaller.

Both properties persist along extensions of sigma, which lets the searches
below prune whole subtrees.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .polyring import Polynomial, eval_poly, parse_poly, to_text
from .quadratic_oracle import NotInFamily, OracleVerdict, decide_family_member
from .solver import (
    DEFAULT_LIMITS,
    Found,
    ResourceLimitExceeded,
    SearchLimits,
    SolutionWitness,
    assignment_key,
    search,
    witness_supports,
)
from .subrings import (
    CofiniteExclude,
    Condition,
    FiniteInclude,
    SubringDescriptor,
    complement_primes,
    contains_rational,
    nth_prime,
)

__all__ = [
    "CylinderCertificate",
    "Inconclusive",
    "positive_certificates",
    "negative_certificates",
    "validate_certificate",
    "InA",
    "InComplementInterior",
    "UndecidedUpTo",
    "boundary_probe",
    "Member",
    "NonMember",
    "Undecided",
    "PhiBudget",
    "phi_decide",
    "GenericReport",
    "generic_check",
    "NowhereDense",
    "ProbeFailure",
    "nowhere_dense_probe",
]


@dataclass(frozen=True)
class CylinderCertificate:
    kind: str  # "positive" or "negative"
    polynomial: Polynomial
    condition: Condition
    witness: SolutionWitness | None = None
    reason: dict | None = None

    def to_record(self) -> dict:
        rec = {"kind": self.kind, "polynomial": to_text(self.polynomial), "condition": self.condition.bits}
        if self.witness is not None:
            rec["witness"] = self.witness.as_text()
            rec["support"] = sorted(self.witness.support)
        if self.reason is not None:
            rec["reason"] = self.reason
        return rec

    @classmethod
    def from_record(cls, rec: Mapping) -> CylinderCertificate:
        kind = rec["kind"]
        if kind not in ("positive", "negative"):
            raise ValueError(f"unknown certificate kind {kind!r}")
        f = parse_poly(rec["polynomial"])
        witness = None
        if "witness" in rec:
            assignment = {int(k.lstrip("x")): Fraction(v) for k, v in rec["witness"].items()}
            witness = SolutionWitness(assignment, frozenset(rec.get("support", ())))
        return cls(kind, f, Condition(rec["condition"]), witness, rec.get("reason"))


@dataclass(frozen=True)
class Inconclusive:
    reason: str


def _oracle_cache(f: Polynomial):
    memo: dict[frozenset[int], OracleVerdict | NotInFamily] = {}

    def ask(excluded: frozenset[int]):
        if excluded not in memo:
            memo[excluded] = decide_family_member(f, CofiniteExclude(excluded))
        return memo[excluded]

    return ask


def _refuted(v) -> bool:
    return isinstance(v, OracleVerdict) and not v.solvable


def _minimal_conditions(L: int, holds, may_extend) -> list[Condition]:
    """Minimal conditions of length <= L with ``holds``, by (length, bits).

    ``may_extend(sigma)`` must be False only when no extension of sigma can
    satisfy ``holds``; it prunes the depth-first walk.
    """
    out = []

    def walk(bits: str):
        sigma = Condition(bits)
        if holds(sigma):
            out.append(sigma)
            return
        if len(bits) == L or not may_extend(sigma):
            return
        walk(bits + "0")
        walk(bits + "1")

    walk("")
    return sorted(out, key=lambda s: (len(s), s.bits))


def _least(witnesses: list[SolutionWitness]) -> SolutionWitness:
    return min(witnesses, key=lambda w: assignment_key([w.assignment[i] for i in sorted(w.assignment)]))


def _supports_by_index(f: Polynomial, L: int, H: int, limits: SearchLimits):
    first = [nth_prime(i) for i in range(L)]
    supports = witness_supports(f, FiniteInclude(first), H, limits=limits)
    return first, supports


def positive_certificates(
    f: Polynomial, L: int, H: int, *, limits: SearchLimits = DEFAULT_LIMITS
) -> list[CylinderCertificate]:
    """Minimal conditions of length <= L certified by a witness of height <= H."""
    first, supports = _supports_by_index(f, L, H, limits)

    def holds(sigma: Condition) -> bool:
        return any(s <= sigma.ones() for s in supports)

    def may_extend(sigma: Condition) -> bool:
        open_ = sigma.ones() | frozenset(first[len(sigma) :])
        return any(s <= open_ for s in supports)

    return [
        CylinderCertificate("positive", f, sigma, witness=_least([w for s, w in supports.items() if s <= sigma.ones()]))
        for sigma in _minimal_conditions(L, holds, may_extend)
    ]


def negative_certificates(f: Polynomial, L: int) -> list[CylinderCertificate] | Inconclusive:
    """Minimal conditions of length <= L on which the oracle refutes solvability."""
    ask = _oracle_cache(f)
    top = ask(frozenset())
    if isinstance(top, NotInFamily):
        return Inconclusive(top.reason)
    first = [nth_prime(i) for i in range(L)]

    def holds(sigma: Condition) -> bool:
        return _refuted(ask(sigma.zeros()))

    def may_extend(sigma: Condition) -> bool:
        return _refuted(ask(sigma.zeros() | frozenset(first[len(sigma) :])))

    return [
        CylinderCertificate("negative", f, sigma, reason=ask(sigma.zeros()).reason)
        for sigma in _minimal_conditions(L, holds, may_extend)
    ]


def validate_certificate(cert: CylinderCertificate) -> bool:
    """Re-check a certificate from scratch."""
    if cert.kind == "positive":
        w = cert.witness
        if w is None or eval_poly(cert.polynomial, w.assignment) != 0:
            return False
        forced = cert.condition.ones()
        return all(contains_rational(FiniteInclude(forced), q) for q in w.assignment.values())
    if cert.kind == "negative":
        return _refuted(decide_family_member(cert.polynomial, CofiniteExclude(cert.condition.zeros())))
    return False


# ---------------------------------------------------------------------------
# probes at a single W


@dataclass(frozen=True)
class InA:
    witness: SolutionWitness


@dataclass(frozen=True)
class InComplementInterior:
    excluded: frozenset[int]
    reason: dict


@dataclass(frozen=True)
class UndecidedUpTo:
    depth: int
    height: int


ProbeStatus = Union[InA, InComplementInterior, UndecidedUpTo]


def _first_refuting_subset(ask, candidates: list[int], max_size: int) -> tuple[frozenset[int], dict] | None:
    """Smallest refuting subset of ``candidates`` (size, then index order).

    Refutation is monotone in the excluded set, so if the full candidate set
    fails no subset can succeed.
    """
    if not _refuted(ask(frozenset(candidates))):
        return None
    for size in range(0, min(max_size, len(candidates)) + 1):
        for combo in itertools.combinations(candidates, size):
            v = ask(frozenset(combo))
            if _refuted(v):
                return frozenset(combo), v.reason
    return None


def boundary_probe(
    f: Polynomial, W: SubringDescriptor, depth: int, H: int, *, limits: SearchLimits = DEFAULT_LIMITS
) -> ProbeStatus:
    """Locate W relative to the solvability set A(f) with the given budget."""
    out = search(f, W, H, limits=limits)
    if isinstance(out, Found):
        return InA(out.witness)
    candidates = [nth_prime(i) for i in range(depth) if not W.has(nth_prime(i))]
    hit = _first_refuting_subset(_oracle_cache(f), candidates, len(candidates))
    if hit is not None:
        return InComplementInterior(*hit)
    return UndecidedUpTo(depth, H)


# ---------------------------------------------------------------------------
# the dovetailed decision procedure


@dataclass(frozen=True)
class Member:
    witness: SolutionWitness
    round: int


@dataclass(frozen=True)
class NonMember:
    excluded: frozenset[int]
    reason: dict
    round: int


@dataclass(frozen=True)
class Undecided:
    rounds: int
    height: int
    solver_limited: bool = False


PhiResult = Union[Member, NonMember, Undecided]


@dataclass(frozen=True)
class PhiBudget:
    rounds: int = 10
    max_height: int = 256
    scan_limit: int = 10_000
    limits: SearchLimits = DEFAULT_LIMITS


def phi_decide(f: Polynomial, W: SubringDescriptor, budget: PhiBudget = PhiBudget()) -> PhiResult:
    """Alternate bounded witness search with oracle refutations on finite A0 outside W.

    Round k searches up to height min(2^k, max_height), then tries every
    A0 among the first k primes outside W with |A0| <= k, smallest first.
    """
    ask = _oracle_cache(f)
    solver_limited = False
    H = 1
    for k in range(1, budget.rounds + 1):
        H = min(2**k, budget.max_height)
        if not solver_limited:
            try:
                out = search(f, W, H, limits=budget.limits)
            except ResourceLimitExceeded:
                # keep refuting; the search side is out of budget
                solver_limited = True
            else:
                if isinstance(out, Found):
                    return Member(out.witness, k)
        comp = complement_primes(W, k, budget.scan_limit)
        hit = _first_refuting_subset(ask, comp, k)
        if hit is not None:
            return NonMember(hit[0], hit[1], k)
    return Undecided(budget.rounds, H, solver_limited)


@dataclass(frozen=True)
class GenericReport:
    results: tuple[tuple[Polynomial, PhiResult], ...]

    @property
    def passes(self) -> bool:
        return not any(isinstance(r, Undecided) for _, r in self.results)


def generic_check(W: SubringDescriptor, fs: Iterable[Polynomial], budget: PhiBudget = PhiBudget()) -> GenericReport:
    """Run the decision procedure on each polynomial; W passes if none stay undecided."""
    return GenericReport(tuple((f, phi_decide(f, W, budget)) for f in fs))


# ---------------------------------------------------------------------------
# nowhere density of the boundary


@dataclass(frozen=True)
class NowhereDense:
    extension: Condition
    certificate: CylinderCertificate


@dataclass(frozen=True)
class ProbeFailure:
    start: Condition
    max_depth: int
    explored: int


def nowhere_dense_probe(
    f: Polynomial,
    sigma: Condition,
    *,
    max_depth: int = 12,
    H: int = 50,
    limits: SearchLimits = DEFAULT_LIMITS,
) -> NowhereDense | ProbeFailure:
    """Shortest extension of sigma (lexicographic among equal lengths) whose
    cylinder avoids the boundary of A(f), with its certificate."""
    if len(sigma) > max_depth:
        raise ValueError("sigma is longer than the probe depth")
    _, supports = _supports_by_index(f, max_depth, H, limits)
    ask = _oracle_cache(f)
    explored = 0
    for length in range(len(sigma), max_depth + 1):
        for tail in itertools.product("01", repeat=length - len(sigma)):
            tau = Condition(sigma.bits + "".join(tail))
            explored += 1
            ones = tau.ones()
            hits = [w for s, w in supports.items() if s <= ones]
            if hits:
                return NowhereDense(tau, CylinderCertificate("positive", f, tau, witness=_least(hits)))
            v = ask(tau.zeros())
            if _refuted(v):
                return NowhereDense(tau, CylinderCertificate("negative", f, tau, reason=v.reason))
    return ProbeFailure(sigma, max_depth, explored)
