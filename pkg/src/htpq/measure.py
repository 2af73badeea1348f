"""Fair-coin measure on prime sets: Monte Carlo estimates and exact cylinder measures.

A sampled condition of length L flips one coin per prime index.  Since a
witness of height <= H only has primes <= H in its denominators, samples of
length pi(H) decide the lower-bound statistic exactly.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .category import Inconclusive, negative_certificates, positive_certificates
from .polyring import Polynomial
from .solver import DEFAULT_LIMITS, SearchLimits, witness_supports
from .subrings import Condition, FiniteInclude, coin_bit_matrix, coin_bits, prime_index, primes_up_to

__all__ = [
    "MeasureEstimate",
    "sample_condition",
    "estimate_measure_A",
    "cylinder_union_measure",
    "BoundaryGap",
    "boundary_gap",
]

# rows of the coin matrix handled per numpy batch
_BATCH = 8192
_Z95 = 1.959963984540054


@dataclass(frozen=True)
class MeasureEstimate:
    value: Fraction
    samples: int
    H: int
    seed: int
    ci_low: Fraction
    ci_high: Fraction

    def to_record(self) -> dict:
        return {
            "value": str(self.value),
            "samples": self.samples,
            "H": self.H,
            "seed": self.seed,
            "ci_low": str(self.ci_low),
            "ci_high": str(self.ci_high),
        }


def sample_condition(seed: int, index: int, L: int) -> Condition:
    """The index-th sampled condition; bit i depends only on (seed, index, i)."""
    if L == 0:
        return Condition("")
    return Condition("".join("1" if b else "0" for b in coin_bits(seed, index, L)))


def _count_hits(args) -> int:
    seed, start, stop, L, supports = args
    hits = 0
    for lo in range(start, stop, _BATCH):
        hi = min(stop, lo + _BATCH)
        bits = coin_bit_matrix(seed, np.arange(lo, hi, dtype=np.uint64), L)
        ok = np.zeros(hi - lo, dtype=bool)
        for idx in supports:
            ok |= bits[:, idx].all(axis=1) if idx else True
            if ok.all():
                break
        hits += int(ok.sum())
    return hits


def _normal_ci(value: Fraction, n: int) -> tuple[Fraction, Fraction]:
    # normal approximation; degenerate (zero width) at value 0 or 1
    p = float(value)
    half = Fraction(_Z95 * math.sqrt(p * (1 - p) / n)).limit_denominator(10**9)
    return max(Fraction(0), value - half), min(Fraction(1), value + half)


def estimate_measure_A(
    f: Polynomial,
    H: int,
    n: int,
    seed: int,
    *,
    jobs: int = 1,
    limits: SearchLimits = DEFAULT_LIMITS,
) -> MeasureEstimate:
    """Fraction of n sampled prime sets whose ring has a witness of height <= H."""
    if f.is_zero():
        raise ValueError("the zero polynomial has no solvability class to measure")
    if n < 1:
        raise ValueError("need at least one sample")
    primes = primes_up_to(H)
    L = len(primes)
    supports = witness_supports(f, FiniteInclude(primes), H, limits=limits)
    support_idx = sorted((sorted(prime_index(p) for p in s) for s in supports), key=lambda s: (len(s), s))
    jobs = max(1, min(jobs, n))
    bounds = [n * k // jobs for k in range(jobs + 1)]
    tasks = [(seed, bounds[k], bounds[k + 1], L, support_idx) for k in range(jobs)]
    if jobs == 1:
        hits = _count_hits(tasks[0])
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            hits = sum(pool.map(_count_hits, tasks))
    value = Fraction(hits, n)
    lo, hi = _normal_ci(value, n)
    return MeasureEstimate(value, n, H, seed, lo, hi)


def cylinder_union_measure(sigmas) -> Fraction:
    """Exact measure of the union of the cylinders U_sigma, by trie merge."""
    trie: dict = {}  # nested by bit; True marks a fully covered subtree
    for s in sigmas:
        bits = s.bits if isinstance(s, Condition) else str(s)
        if not bits:
            return Fraction(1)
        node = trie
        for b in bits[:-1]:
            if node.get(b) is True:
                break
            node = node.setdefault(b, {})
        else:
            node[bits[-1]] = True

    def mu(node) -> Fraction:
        if node is True:
            return Fraction(1)
        return sum((mu(child) for child in node.values()), Fraction(0)) / 2

    return mu(trie)


@dataclass(frozen=True)
class BoundaryGap:
    lower_A: Fraction
    lower_comp: Fraction
    gap: Fraction
    positive: int
    negative: int
    oracle_inconclusive: bool

    def to_record(self) -> dict:
        return {
            "lower_A": str(self.lower_A),
            "lower_comp": str(self.lower_comp),
            "gap": str(self.gap),
            "positive_certificates": self.positive,
            "negative_certificates": self.negative,
            "oracle_inconclusive": self.oracle_inconclusive,
        }


def boundary_gap(f: Polynomial, H: int, depth: int, *, limits: SearchLimits = DEFAULT_LIMITS) -> BoundaryGap:
    """Exact measures of the certified parts of A(f) and its complement at this budget.

    The gap 1 - lower_A - lower_comp bounds the boundary measure from above.
    """
    if f.is_zero():
        raise ValueError("the zero polynomial has no solvability class")
    pos = positive_certificates(f, depth, H, limits=limits)
    neg = negative_certificates(f, depth)
    inconclusive = isinstance(neg, Inconclusive)
    if inconclusive:
        neg = []
    lower_A = cylinder_union_measure([c.condition for c in pos])
    lower_comp = cylinder_union_measure([c.condition for c in neg])
    return BoundaryGap(lower_A, lower_comp, 1 - lower_A - lower_comp, len(pos), len(neg), inconclusive)
