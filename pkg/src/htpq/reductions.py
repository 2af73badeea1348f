"""Polynomial many-one reductions between solvability problems.

* :func:`homogenize_with_positivity` maps f to F with
  ``f in HTP(Q)  <=>  F in HTP(R_W)`` for every W, together with explicit
  witness translations in both directions;
* :func:`conjoin` turns a system into one equation (sum of squares);
* :func:`semilocal_reduce` combines a polynomial with per-prime gadgets so
  that solvability in R_{P - A0} becomes solvability over Q.

Gadget polynomials for the last reduction are external data.  The registry
ships empty; :func:`mock_gadget` provides a placeholder whose meaning is an
injected valuation predicate, usable only through the semantic evaluator
:func:`mock_semantics_holds`.
"""

from __future__ import annotations

import json
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from pathlib import Path

from .polyring import Polynomial, PolynomialError, eval_poly, homogenize_core, parse_poly, total_degree
from .quadratic_oracle import padic_valuation, two_squares
from .subrings import is_prime

__all__ = [
    "PositivityReduction",
    "homogenize_with_positivity",
    "conjoin",
    "four_squares",
    "GadgetEntry",
    "GadgetRegistry",
    "GadgetError",
    "mock_gadget",
    "SemilocalReduction",
    "semilocal_reduce",
    "mock_semantics_holds",
]

SEMANTICS_MOCK = "mock"
SEMANTICS_DECLARED = "declared"


def four_squares(n: int) -> tuple[int, int, int, int]:
    """Lagrange decomposition n = a^2 + b^2 + c^2 + d^2 with a >= b >= c >= d >= 0.

    The largest feasible a is taken first, then the largest b leaving a sum of
    two squares, which is split with :func:`two_squares`.
    """
    if n < 0:
        raise ValueError("four_squares needs a nonnegative integer")

    def three_squares_ok(m: int) -> bool:
        while m and m % 4 == 0:
            m //= 4
        return m % 8 != 7

    for a in range(math.isqrt(n), -1, -1):
        r = n - a * a
        if not three_squares_ok(r):
            continue
        for b in range(min(a, math.isqrt(r)), -1, -1):
            cd = two_squares(r - b * b)
            if cd is not None and cd[0] <= b:
                return (a, b, cd[0], cd[1])
    raise AssertionError(f"no four-square decomposition found for {n}")


# ---------------------------------------------------------------------------
# HTP(Q) -> HTP(R_W)


@dataclass(frozen=True)
class PositivityReduction:
    source: Polynomial
    reduced: Polynomial
    xs: tuple[int, ...]
    y: int
    squares: tuple[int, int, int, int]
    degree: int

    def forward(self, zero: Mapping[int, Fraction]) -> dict[int, int]:
        """Integer solution of the reduced polynomial from a rational zero of the source."""
        vals = {i: Fraction(zero.get(i, 0)) for i in self.xs}
        if eval_poly(self.source, vals) != 0:
            raise ValueError("the given point is not a zero of the source polynomial")
        Y = reduce(math.lcm, (v.denominator for v in vals.values()), 1)
        out = {i: int(v * Y) for i, v in vals.items()}
        out[self.y] = Y
        for var, s in zip(self.squares, four_squares(Y - 1)):
            out[var] = s
        return out

    def backward(self, solution: Mapping[int, Fraction]) -> dict[int, Fraction]:
        """Rational zero of the source from any rational zero of the reduced polynomial."""
        Y = Fraction(solution[self.y])
        if Y <= 0:
            raise ValueError("reduced solutions always have a positive Y coordinate")
        return {i: Fraction(solution.get(i, 0)) / Y for i in self.xs}


def homogenize_with_positivity(f: Polynomial) -> PositivityReduction:
    """F = (Y^d f(X/Y))^2 + (Y - 1 - A^2 - B^2 - C^2 - D^2)^2.

    Y, A, B, C, D are the five variable ids following the largest id of f.
    """
    if f.is_zero():
        raise PolynomialError("cannot reduce the zero polynomial")
    if not f.is_integral():
        raise PolynomialError("expected an integral polynomial; clear denominators first")
    base = f.max_var() + 1
    y = base
    sq = (base + 1, base + 2, base + 3, base + 4)
    core = homogenize_core(f, y)
    pos = Polynomial.var(y) - 1
    for v in sq:
        pos = pos - Polynomial.var(v) ** 2
    reduced = core**2 + pos**2
    return PositivityReduction(f, reduced, tuple(range(base)), y, sq, total_degree(f))


def conjoin(gs: Sequence[Polynomial]) -> Polynomial:
    """Sum of squares: over any subring of Q its zeros are the common zeros of gs."""
    if not gs:
        raise ValueError("conjoin needs at least one polynomial")
    out = Polynomial()
    for g in gs:
        out = out + g * g
    return out


# ---------------------------------------------------------------------------
# semilocal combiner


class GadgetError(ValueError):
    pass


@dataclass(frozen=True)
class GadgetEntry:
    """Polynomial g_p(Z, X1, X2, X3) in the variables x0..x3 with declared meaning
    ``g_p(q, X) solvable over Q  <=>  v_p(q) >= 0``."""

    p: int
    polynomial: Polynomial
    semantics: str = SEMANTICS_DECLARED

    def __post_init__(self):
        if not is_prime(self.p):
            raise GadgetError(f"{self.p} is not prime")
        if self.polynomial.variables() != (0, 1, 2, 3):
            raise GadgetError("a gadget must mention exactly the variables x0 (Z), x1, x2, x3")
        if self.semantics not in (SEMANTICS_DECLARED, SEMANTICS_MOCK):
            raise GadgetError(f"unknown semantics tag {self.semantics!r}")

    def predicate(self, q) -> bool:
        """The declared membership claim, checked with the valuation oracle."""
        return padic_valuation(Fraction(q), self.p) >= 0


def mock_gadget(p: int) -> GadgetEntry:
    """Placeholder gadget for semantic tests; its polynomial carries no meaning."""
    x = [Polynomial.var(i) for i in range(4)]
    return GadgetEntry(p, x[0] * x[1] * x[2] * x[3], SEMANTICS_MOCK)


@dataclass
class GadgetRegistry:
    entries: dict[int, GadgetEntry] = field(default_factory=dict)

    def register(self, entry: GadgetEntry) -> None:
        if entry.p in self.entries:
            raise GadgetError(f"duplicate gadget for p = {entry.p}")
        self.entries[entry.p] = entry

    def __getitem__(self, p: int) -> GadgetEntry:
        return self.entries[p]

    def __contains__(self, p: int) -> bool:
        return p in self.entries

    @classmethod
    def from_records(cls, records: Iterable[Mapping]) -> GadgetRegistry:
        reg = cls()
        for r in records:
            try:
                entry = GadgetEntry(int(r["prime"]), parse_poly(r["polynomial"]), r.get("semantics", SEMANTICS_DECLARED))
            except KeyError as exc:
                raise GadgetError(f"gadget record missing field {exc}") from exc
            reg.register(entry)
        return reg

    @classmethod
    def load(cls, path: str | Path) -> GadgetRegistry:
        """Read a JSON list, or JSON lines, of {prime, polynomial, semantics} records."""
        text = Path(path).read_text(encoding="utf-8").strip()
        if not text:
            return cls()
        if text.startswith("["):
            return cls.from_records(json.loads(text))
        return cls.from_records(json.loads(line) for line in text.splitlines() if line.strip())


@dataclass(frozen=True)
class GadgetInstance:
    p: int
    j: int
    z: int
    aux: tuple[int, int, int]


@dataclass(frozen=True)
class SemilocalReduction:
    source: Polynomial
    excluded: tuple[int, ...]
    reduced: Polynomial
    instances: tuple[GadgetInstance, ...]
    gadgets: tuple[GadgetEntry, ...]

    @property
    def semantics(self) -> str:
        if any(g.semantics == SEMANTICS_MOCK for g in self.gadgets):
            return SEMANTICS_MOCK
        return SEMANTICS_DECLARED


def semilocal_reduce(g: Polynomial, excluded: Iterable[int], reg: GadgetRegistry) -> SemilocalReduction:
    """g^2 + sum over p in A0 and j <= n of g_p(Z_j, fresh, fresh, fresh)^2.

    g is read as a polynomial in Z_0..Z_n = x0..xn (n its largest variable
    id); fresh variables follow x_n in (p, j, k) order.
    """
    A0 = tuple(sorted(set(excluded)))
    missing = [p for p in A0 if p not in reg]
    if missing:
        raise GadgetError(f"no gadget registered for prime(s) {missing}")
    n = g.max_var()
    nxt = n + 1
    out = g * g
    instances = []
    for p in A0:
        gp = reg[p].polynomial
        if set(gp.variables()) - {0, 1, 2, 3}:
            raise GadgetError(f"gadget for {p} uses variables outside x0..x3")
        for j in range(n + 1):
            aux = (nxt, nxt + 1, nxt + 2)
            nxt += 3
            # rename is simultaneous, so overlapping ids are fine
            inst = gp.rename({0: j, 1: aux[0], 2: aux[1], 3: aux[2]})
            out = out + inst * inst
            instances.append(GadgetInstance(p, j, j, aux))
    return SemilocalReduction(g, A0, out, tuple(instances), tuple(reg[p] for p in A0))


def mock_semantics_holds(red: SemilocalReduction, z_values: Mapping[int, Fraction]) -> bool:
    """Whether the reduced polynomial is solvable at the given Z values, reading
    every gadget instance through its declared predicate instead of its polynomial."""
    if eval_poly(red.source, z_values) != 0:
        return False
    gadgets = {g.p: g for g in red.gadgets}
    return all(gadgets[inst.p].predicate(z_values.get(inst.z, 0)) for inst in red.instances)
