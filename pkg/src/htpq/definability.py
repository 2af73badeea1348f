"""Bounded, refutation-oriented checks of diophantine models and definitions of Z.

Both notions quantify over the whole ring, so nothing here can certify one.
Every individual check lands in one of three buckets: ``verified`` (a
witness was found for something that must hold), ``refuted`` (a witness was
found for something that must not hold, which is a proof of failure), or
``inconclusive`` (the height budget ran out).

Variable conventions: a model of width n reads h as h(x0..x_{n-1}, Y) and
h_plus, h_times as polynomials in three consecutive n-tuples
x0..x_{3n-1} followed by auxiliary variables.  An existential definition
reads g as g(x0, Y) with x0 the designated variable.
"""

from __future__ import annotations

import itertools
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .polyring import Polynomial
from .solver import DEFAULT_LIMITS, Found, SearchLimits, coord_key, enumerate_candidates, search
from .subrings import SubringDescriptor, contains_rational

__all__ = [
    "DiophantineModelSpec",
    "ExistentialDefSpec",
    "SpecError",
    "Check",
    "ModelReport",
    "check_model",
    "ExdefReport",
    "check_existential_def",
]

VERIFIED = "verified"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive"
SKIPPED = "skipped"

Tuple = tuple[Fraction, ...]


class SpecError(ValueError):
    pass


@dataclass(frozen=True)
class DiophantineModelSpec:
    n: int
    h: Polynomial
    h_plus: Polynomial
    h_times: Polynomial

    def __post_init__(self):
        if self.n < 1:
            raise SpecError("tuple width n must be at least 1")


@dataclass(frozen=True)
class ExistentialDefSpec:
    g: Polynomial


@dataclass(frozen=True)
class Check:
    status: str
    claim: str
    detail: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        return {"status": self.status, "claim": self.claim, **({"detail": self.detail} if self.detail else {})}


class _Solvability:
    """Memoized ``exists Y: p(fixed, Y) = 0`` at height <= H."""

    def __init__(self, W: SubringDescriptor, H: int, limits: SearchLimits):
        self.W, self.H, self.limits = W, H, limits
        self.memo: dict = {}

    def __call__(self, p: Polynomial, fixed: Tuple) -> dict | None:
        key = (p, fixed)
        if key not in self.memo:
            sub = p.substitute(dict(enumerate(fixed)))
            if sub.is_zero():
                ans = {}
            elif not sub.variables():
                ans = None
            else:
                out = search(sub, self.W, self.H, limits=self.limits)
                ans = out.witness.as_text() if isinstance(out, Found) else None
            self.memo[key] = ans
        return self.memo[key]


def _tuple_key(t: Tuple):
    return (max(coord_key(v)[0] for v in t), tuple(coord_key(v) for v in t))


def _fmt(t: Tuple) -> str:
    return "(" + ", ".join(str(v) for v in t) + ")"


@dataclass
class ModelReport:
    representatives: dict[int, Tuple]
    missing: list[int]
    checks: list[Check]
    stray: list[Tuple]
    m: int
    H: int

    @property
    def status(self) -> str:
        if any(c.status == REFUTED for c in self.checks):
            return REFUTED
        return f"consistent at budget (m={self.m}, H={self.H})"

    def count(self, status: str) -> int:
        return sum(c.status == status for c in self.checks)

    def to_record(self) -> dict:
        return {
            "status": self.status,
            "representatives": {str(k): _fmt(v) for k, v in sorted(self.representatives.items())},
            "missing": self.missing,
            "verified": self.count(VERIFIED),
            "refuted": [c.to_record() for c in self.checks if c.status == REFUTED],
            "inconclusive": [c.to_record() for c in self.checks if c.status == INCONCLUSIVE],
            "stray_domain_elements": len(self.stray),
        }


def check_model(
    spec: DiophantineModelSpec,
    W: SubringDescriptor,
    m: int,
    H: int,
    *,
    inject: Mapping[int, Sequence] | None = None,
    limits: SearchLimits = DEFAULT_LIMITS,
) -> ModelReport:
    """Necessary-condition check of (h, h_plus, h_times) as a model of Z inside R_W.

    Representatives are found from the domain grid at height <= H: 0 is the
    element with 0 + 0 = 0, 1 the other element with 1 * 1 = 1, and k +- 1 is
    reached through h_plus.  ``inject`` overrides chosen representatives.
    All addition and multiplication facts among |k| <= m are then checked,
    along with every non-fact, whose solvability refutes the model.
    """
    if m < 1:
        raise SpecError("range m must be at least 1")
    n = spec.n
    for name, p, width in (("h", spec.h, n), ("h_plus", spec.h_plus, 3 * n), ("h_times", spec.h_times, 3 * n)):
        if p.is_zero():
            continue
        if not p.is_integral():
            raise SpecError(f"{name} must have integer coefficients")
    solv = _Solvability(W, H, limits)
    checks: list[Check] = []

    domain = sorted(
        (t for t in enumerate_candidates(n, W, H) if solv(spec.h, t) is not None),
        key=_tuple_key,
    )

    def plus(a: Tuple, b: Tuple, c: Tuple):
        return solv(spec.h_plus, a + b + c)

    def times(a: Tuple, b: Tuple, c: Tuple):
        return solv(spec.h_times, a + b + c)

    def unique(cands: list[Tuple], claim: str) -> Tuple | None:
        if len(cands) > 1:
            checks.append(Check(REFUTED, claim, {"candidates": [_fmt(t) for t in cands[:5]]}))
        return cands[0] if cands else None

    injected = {k: tuple(Fraction(v) for v in t) for k, t in (inject or {}).items()}
    for k, t in injected.items():
        if len(t) != n:
            raise SpecError(f"injected representative for {k} has width {len(t)}, expected {n}")
    reps: dict[int, Tuple] = {}

    zero = injected.get(0) or unique([d for d in domain if plus(d, d, d) is not None], "unique zero (x + x = x)")
    if zero is not None:
        reps[0] = zero
        one = injected.get(1) or unique(
            [d for d in domain if d != zero and times(d, d, d) is not None], "unique one (x * x = x, x != 0)"
        )
        if one is not None:
            reps[1] = one
            for k in range(1, m):
                if k + 1 in injected:
                    reps[k + 1] = injected[k + 1]
                    continue
                nxt = unique([d for d in domain if plus(reps[k], one, d) is not None], f"unique successor of {k}")
                if nxt is None:
                    break
                reps[k + 1] = nxt
            for k in range(0, -m, -1):
                if k - 1 in injected:
                    reps[k - 1] = injected[k - 1]
                    continue
                prv = unique([d for d in domain if plus(d, one, reps[k]) is not None], f"unique predecessor of {k}")
                if prv is None:
                    break
                reps[k - 1] = prv
    missing = [k for k in range(-m, m + 1) if k not in reps]

    # two integers sharing a representative cannot both be right
    seen: dict[Tuple, int] = {}
    for k in sorted(reps, key=lambda k: (abs(k), k)):
        t = reps[k]
        if t in seen:
            checks.append(Check(REFUTED, f"{seen[t]} and {k} share the representative {_fmt(t)}"))
        else:
            seen[t] = k

    for op, sym, fn, rel in (("plus", "+", plus, lambda a, b: a + b), ("times", "*", times, lambda a, b: a * b)):
        for a, b in itertools.product(sorted(reps), repeat=2):
            for c in sorted(reps):
                wit = fn(reps[a], reps[b], reps[c])
                claim = f"{a} {sym} {b} = {c}"
                if c == rel(a, b):
                    checks.append(Check(VERIFIED if wit is not None else INCONCLUSIVE, claim, {"witness": wit} if wit else {}))
                elif wit is not None:
                    checks.append(Check(REFUTED, f"non-fact {claim} holds", {"witness": wit}))

    stray = [d for d in domain if d not in seen]
    return ModelReport(reps, missing, checks, stray, m, H)


@dataclass
class ExdefReport:
    checks: list[Check]
    H: int

    @property
    def status(self) -> str:
        if any(c.status == REFUTED for c in self.checks):
            return REFUTED
        return f"consistent at budget (H={self.H})"

    def to_record(self) -> dict:
        return {"status": self.status, "probes": [c.to_record() for c in self.checks]}


def check_existential_def(
    spec: ExistentialDefSpec,
    W: SubringDescriptor,
    probes: Sequence,
    H: int,
    *,
    limits: SearchLimits = DEFAULT_LIMITS,
) -> ExdefReport:
    """Probe ``q in Z  <=>  exists Y: g(q, Y) = 0`` at the given points of R_W."""
    if not probes:
        raise SpecError("need at least one probe")
    solv = _Solvability(W, H, limits)
    checks = []
    for q in map(Fraction, probes):
        claim = f"x0 = {q}"
        if not contains_rational(W, q):
            checks.append(Check(SKIPPED, claim, {"note": "probe not in the ring"}))
            continue
        wit = solv(spec.g, (q,))
        if q.denominator == 1:
            status = VERIFIED if wit is not None else INCONCLUSIVE
        else:
            status = REFUTED if wit is not None else INCONCLUSIVE
        detail = {"witness": wit} if wit is not None else {"note": f"no witness up to height {H}"}
        checks.append(Check(status, claim, detail))
    return ExdefReport(checks, H)
