"""Prime indexing and decidable descriptions of prime sets W.

A set W of primes determines the ring R_W = Z[1/p : p in W].  Primes are
indexed from zero (``nth_prime(0) == 2``), and a finite binary string over
those indices (a :class:`Condition`) names the cylinder of all W extending it.

Descriptors are plain frozen dataclasses so they hash, compare and serialize
exactly; see :func:`parse_descriptor` for the text syntax.
"""

from __future__ import annotations

import bisect
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import numpy as np

__all__ = [
    "Condition",
    "FiniteInclude",
    "CofiniteExclude",
    "ResidueRule",
    "ConditionPlusDefault",
    "Sampled",
    "SubringDescriptor",
    "DescriptorError",
    "nth_prime",
    "prime_index",
    "primes_up_to",
    "prime_count",
    "is_prime",
    "factorize",
    "prime_factors",
    "contains_prime",
    "contains_rational",
    "restrict",
    "coin_bits",
    "parse_descriptor",
    "format_descriptor",
    "FACTOR_LIMIT",
]

# Denominators above this bound are rejected instead of factored.
FACTOR_LIMIT = 10**14


class DescriptorError(ValueError):
    """Malformed descriptor text or an out-of-contract query."""


# ---------------------------------------------------------------------------
# primes

_sieve_limit = 0
_primes: list[int] = []


def _grow(limit: int) -> None:
    global _sieve_limit, _primes
    if limit <= _sieve_limit:
        return
    n = max(limit, 2 * _sieve_limit, 1024)
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:2] = False
    for i in range(2, int(n**0.5) + 1):
        if is_p[i]:
            is_p[i * i :: i] = False
    _primes = np.flatnonzero(is_p).tolist()
    _sieve_limit = n


def primes_up_to(n: int) -> list[int]:
    _grow(n)
    return _primes[: bisect.bisect_right(_primes, n)]


def prime_count(n: int) -> int:
    """pi(n): the number of primes <= n."""
    return len(primes_up_to(n))


def nth_prime(n: int) -> int:
    """The n-th prime, counting from ``nth_prime(0) == 2``."""
    if n < 0:
        raise DescriptorError("prime index must be >= 0")
    while len(_primes) <= n:
        _grow(max(2 * _sieve_limit, 1024))
    return _primes[n]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p <= 10**7:
        _grow(p)
        i = bisect.bisect_left(_primes, p)
        return i < len(_primes) and _primes[i] == p
    return len(factorize(p)) == 1 and next(iter(factorize(p).values())) == 1


def prime_index(p: int) -> int:
    if not is_prime(p):
        raise DescriptorError(f"{p} is not prime")
    _grow(p)
    return bisect.bisect_left(_primes, p)


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of |n| by trial division (n != 0)."""
    n = abs(int(n))
    if n == 0:
        raise DescriptorError("cannot factor zero")
    if n > FACTOR_LIMIT:
        raise DescriptorError(f"{n} exceeds the factorization bound {FACTOR_LIMIT}")
    out: dict[int, int] = {}
    if n == 1:
        return out
    r = int(n**0.5) + 1
    _grow(r)
    for p in _primes:
        if p * p > n:
            break
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out[p] = k
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_factors(n: int) -> frozenset[int]:
    return frozenset(factorize(n))


# ---------------------------------------------------------------------------
# conditions


@dataclass(frozen=True)
class Condition:
    """A finite 0/1 string; bit i says whether p_i belongs to W."""

    bits: str = ""

    def __post_init__(self):
        if set(self.bits) - {"0", "1"}:
            raise DescriptorError(f"condition must be a 0/1 string, got {self.bits!r}")

    def __len__(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return self.bits

    def ones(self) -> frozenset[int]:
        """Primes forced into W."""
        return frozenset(nth_prime(i) for i, b in enumerate(self.bits) if b == "1")

    def zeros(self) -> frozenset[int]:
        """Primes forced out of W."""
        return frozenset(nth_prime(i) for i, b in enumerate(self.bits) if b == "0")

    def extends(self, other: Condition) -> bool:
        return self.bits.startswith(other.bits)

    def __add__(self, more: str) -> Condition:
        return Condition(self.bits + more)


# ---------------------------------------------------------------------------
# descriptors


@dataclass(frozen=True)
class FiniteInclude:
    primes: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "primes", frozenset(int(p) for p in self.primes))
        for p in self.primes:
            if not is_prime(p):
                raise DescriptorError(f"{p} is not prime")

    def has(self, p: int) -> bool:
        return p in self.primes


@dataclass(frozen=True)
class CofiniteExclude:
    primes: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "primes", frozenset(int(p) for p in self.primes))
        for p in self.primes:
            if not is_prime(p):
                raise DescriptorError(f"{p} is not prime")

    def has(self, p: int) -> bool:
        return p not in self.primes


@dataclass(frozen=True)
class ResidueRule:
    """Primes lying in any of the residue classes ``a mod m``, with overrides."""

    classes: tuple[tuple[int, int], ...]
    overrides: tuple[tuple[int, bool], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(sorted((a % m, m) for a, m in self.classes)))
        object.__setattr__(self, "overrides", tuple(sorted((int(p), bool(b)) for p, b in self.overrides)))
        if any(m <= 0 for _, m in self.classes):
            raise DescriptorError("moduli must be positive")

    def has(self, p: int) -> bool:
        for q, b in self.overrides:
            if q == p:
                return b
        return any(p % m == a for a, m in self.classes)


@dataclass(frozen=True)
class ConditionPlusDefault:
    condition: Condition
    default: bool = False

    def has(self, p: int) -> bool:
        i = prime_index(p)
        if i < len(self.condition):
            return self.condition.bits[i] == "1"
        return self.default


@dataclass(frozen=True)
class Sampled:
    """Fair-coin random W; the bit of p_i depends only on (seed, i)."""

    seed: int
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def has(self, p: int) -> bool:
        i = prime_index(p)
        bit = self._cache.get(i)
        if bit is None:
            bit = bool(coin_bits(self.seed, 0, i + 1)[i])
            self._cache.setdefault(i, bit)
        return bit


SubringDescriptor = Union[FiniteInclude, CofiniteExclude, ResidueRule, ConditionPlusDefault, Sampled]


def contains_prime(W: SubringDescriptor, p: int) -> bool:
    if not is_prime(p):
        raise DescriptorError(f"{p} is not prime")
    return W.has(p)


def contains_rational(W: SubringDescriptor, q) -> bool:
    """Whether q lies in R_W, i.e. every prime of its denominator is in W."""
    d = Fraction(q).denominator
    return all(W.has(p) for p in prime_factors(d))


def restrict(W: SubringDescriptor, length: int) -> Condition:
    """The initial segment of W of the given length, as a condition."""
    return Condition("".join("1" if W.has(nth_prime(i)) else "0" for i in range(length)))


def complement_primes(W: SubringDescriptor, count: int, scan_limit: int = 10_000) -> list[int]:
    """The first ``count`` primes outside W, scanning at most ``scan_limit`` primes."""
    out = []
    for i in range(scan_limit):
        p = nth_prime(i)
        if not W.has(p):
            out.append(p)
            if len(out) == count:
                break
    return out


# ---------------------------------------------------------------------------
# deterministic coin flips

_M64 = np.uint64(0xFFFFFFFFFFFFFFFF)


def _splitmix64(x: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = x + np.uint64(0x9E3779B97F4A7C15)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))


def coin_words(seed: int, streams: np.ndarray, nwords: int) -> np.ndarray:
    """64-bit words ``[stream, j]`` that are pure functions of (seed, stream, j)."""
    s = _splitmix64(np.array([seed & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64))[0]
    streams = np.asarray(streams, dtype=np.uint64).reshape(-1, 1)
    j = np.arange(nwords, dtype=np.uint64).reshape(1, -1)
    with np.errstate(over="ignore"):
        base = _splitmix64(s ^ _splitmix64(streams))
        return _splitmix64(base + j * np.uint64(0xD1B54A32D192ED03))


def coin_bits(seed: int, stream: int, length: int) -> np.ndarray:
    """``length`` fair bits for one (seed, stream); prefixes agree across lengths."""
    return coin_bit_matrix(seed, np.array([stream]), length)[0]


def coin_bit_matrix(seed: int, streams: np.ndarray, length: int) -> np.ndarray:
    """Boolean array of shape (len(streams), length)."""
    nwords = max(1, -(-length // 64))
    words = coin_words(seed, streams, nwords)
    shifts = np.arange(64, dtype=np.uint64)
    bits = ((words[:, :, None] >> shifts) & np.uint64(1)).astype(bool)
    return bits.reshape(len(words), -1)[:, :length]


# ---------------------------------------------------------------------------
# text syntax


def _primes_list(text: str) -> frozenset[int]:
    text = text.strip()
    if not text:
        return frozenset()
    try:
        return frozenset(int(t) for t in text.split(","))
    except ValueError as exc:
        raise DescriptorError(f"bad prime list {text!r}") from exc


def parse_descriptor(text: str) -> SubringDescriptor:
    """Parse ``include:2,5``, ``exclude:5``, ``residue:3mod4;override:7=0``,
    ``cond:0101;default=1`` or ``random:seed=42``."""
    kind, _, rest = text.strip().partition(":")
    kind = kind.strip().lower()
    if kind == "include":
        return FiniteInclude(_primes_list(rest))
    if kind == "exclude":
        return CofiniteExclude(_primes_list(rest))
    if kind == "residue":
        parts = rest.split(";")
        classes = []
        for c in parts[0].split(","):
            m = re.fullmatch(r"\s*(\d+)\s*mod\s*(\d+)\s*", c)
            if not m:
                raise DescriptorError(f"bad residue class {c!r}")
            classes.append((int(m.group(1)), int(m.group(2))))
        overrides = []
        for extra in parts[1:]:
            key, _, val = extra.partition(":")
            if key.strip() != "override":
                raise DescriptorError(f"unknown residue option {extra!r}")
            for item in val.split(","):
                m = re.fullmatch(r"\s*(\d+)\s*=\s*([01])\s*", item)
                if not m:
                    raise DescriptorError(f"bad override {item!r}")
                p = int(m.group(1))
                if not is_prime(p):
                    raise DescriptorError(f"{p} is not prime")
                overrides.append((p, m.group(2) == "1"))
        return ResidueRule(tuple(classes), tuple(overrides))
    if kind == "cond":
        bits, _, opt = rest.partition(";")
        default = False
        if opt:
            m = re.fullmatch(r"\s*default\s*=\s*([01])\s*", opt)
            if not m:
                raise DescriptorError(f"bad condition option {opt!r}")
            default = m.group(1) == "1"
        return ConditionPlusDefault(Condition(bits.strip()), default)
    if kind == "random":
        m = re.fullmatch(r"\s*seed\s*=\s*(-?\d+)\s*", rest)
        if not m:
            raise DescriptorError(f"bad random descriptor {text!r}")
        return Sampled(int(m.group(1)))
    raise DescriptorError(f"unknown descriptor kind {kind!r}")


def format_descriptor(W: SubringDescriptor) -> str:
    if isinstance(W, FiniteInclude):
        return "include:" + ",".join(map(str, sorted(W.primes)))
    if isinstance(W, CofiniteExclude):
        return "exclude:" + ",".join(map(str, sorted(W.primes)))
    if isinstance(W, ResidueRule):
        s = "residue:" + ",".join(f"{a}mod{m}" for a, m in W.classes)
        if W.overrides:
            s += ";override:" + ",".join(f"{p}={int(b)}" for p, b in W.overrides)
        return s
    if isinstance(W, ConditionPlusDefault):
        return f"cond:{W.condition.bits};default={int(W.default)}"
    if isinstance(W, Sampled):
        return f"random:seed={W.seed}"
    raise TypeError(f"not a descriptor: {W!r}")
