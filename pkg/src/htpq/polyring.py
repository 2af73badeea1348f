"""Exact sparse multivariate polynomials over Z and Q.

Variables are ``x0, x1, ...`` identified by their natural-number index.  A
term is keyed by its exponent vector (a tuple indexed by variable id with no
trailing zeros), so the constant term is keyed by ``()``.  Coefficients are
Python ``int`` when integral and ``fractions.Fraction`` otherwise; zero
coefficients are never stored.

Also provides the polynomial <-> natural-number bijection used to view
Z[x0, x1, ...] as a subset of the naturals, and a small parser for the
``2*x0^2 + 2*x1^2 - 1`` text syntax.
"""

from __future__ import annotations

import math
import re
from collections.abc import Iterable, Iterator, Mapping
from fractions import Fraction
from functools import reduce
from math import isqrt
from typing import Union

Coeff = Union[int, Fraction]
Exps = tuple[int, ...]

__all__ = [
    "Polynomial",
    "PolynomialError",
    "parse_poly",
    "eval_poly",
    "total_degree",
    "clear_denominators",
    "homogenize_core",
    "encode",
    "decode",
    "cantor_pair",
    "cantor_unpair",
]


class PolynomialError(ValueError):
    """Raised on malformed polynomial input or an invalid operation."""


def _canon_coeff(c: Coeff) -> Coeff:
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, int):
        return int(c)
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


def _trim(e: Iterable[int]) -> Exps:
    t = list(e)
    if any(x < 0 for x in t):
        raise PolynomialError(f"negative exponent in {t}")
    while t and t[-1] == 0:
        t.pop()
    return tuple(t)


def _add_exps(a: Exps, b: Exps) -> Exps:
    if len(a) < len(b):
        a, b = b, a
    return tuple(x + (b[i] if i < len(b) else 0) for i, x in enumerate(a))


def grlex_key(e: Exps) -> tuple[int, Exps]:
    # Python tuple comparison on trimmed vectors agrees with zero-padding.
    return (sum(e), e)


class Polynomial:
    """Immutable sparse polynomial in canonical form.

    Two polynomials compare equal iff their term maps are equal, regardless of
    the order in which terms were supplied.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Iterable[int], Coeff] | Iterable[tuple[Iterable[int], Coeff]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exps, Coeff] = {}
        for e, c in items:
            key = _trim(e)
            acc[key] = acc.get(key, 0) + c
        self._terms: dict[Exps, Coeff] = {
            k: _canon_coeff(v) for k, v in sorted(acc.items(), key=lambda kv: grlex_key(kv[0]), reverse=True) if v != 0
        }
        self._hash: int | None = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, c: Coeff) -> Polynomial:
        return cls({(): c})

    @classmethod
    def var(cls, i: int) -> Polynomial:
        if i < 0:
            raise PolynomialError("variable index must be >= 0")
        return cls({(0,) * i + (1,): 1})

    @classmethod
    def from_records(cls, records: Iterable[Mapping]) -> Polynomial:
        """Build from the structured form ``[{"exps": [...], "coef": "-3"}, ...]``."""
        out = []
        for r in records:
            try:
                out.append((tuple(int(x) for x in r["exps"]), Fraction(str(r["coef"]))))
            except (KeyError, ValueError, TypeError) as exc:
                raise PolynomialError(f"bad term record {r!r}") from exc
        return cls(out)

    def to_records(self) -> list[dict]:
        return [{"exps": list(e), "coef": str(c)} for e, c in self._terms.items()]

    # -- basic protocol ---------------------------------------------------
    @property
    def terms(self) -> dict[Exps, Coeff]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Exps, Coeff]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r})"

    def __str__(self) -> str:
        return to_text(self)

    # -- queries ----------------------------------------------------------
    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self._terms.values())

    def variables(self) -> tuple[int, ...]:
        seen = set()
        for e in self._terms:
            seen.update(i for i, x in enumerate(e) if x)
        return tuple(sorted(seen))

    def max_var(self) -> int:
        """Largest variable index occurring, or -1 for constants."""
        vs = self.variables()
        return vs[-1] if vs else -1

    def degree_in(self, i: int) -> int:
        return max((e[i] if i < len(e) else 0 for e in self._terms), default=0)

    def constant_term(self) -> Coeff:
        return self._terms.get((), 0)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self._terms}
        return len(degs) <= 1

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.const(other)
        return NotImplemented

    def __add__(self, other) -> Polynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(list(self._terms.items()) + list(other._terms.items()))

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial({e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> Polynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> Polynomial:
        return (-self) + other

    def __mul__(self, other) -> Polynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc: dict[Exps, Coeff] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                k = _add_exps(e1, e2)
                acc[k] = acc.get(k, 0) + c1 * c2
        return Polynomial(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Polynomial:
        if not isinstance(n, int) or n < 0:
            raise PolynomialError("exponent must be a natural number")
        result = Polynomial.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c: Coeff) -> Polynomial:
        return Polynomial({e: c * v for e, v in self._terms.items()})

    # -- substitution -----------------------------------------------------
    def rename(self, mapping: Mapping[int, int]) -> Polynomial:
        """Rename variables; ids missing from ``mapping`` are kept."""
        out: dict[Exps, Coeff] = {}
        for e, c in self._terms.items():
            new = [0] * (max([mapping.get(i, i) for i in range(len(e))], default=-1) + 1)
            for i, x in enumerate(e):
                if x:
                    new[mapping.get(i, i)] += x
            k = _trim(new)
            out[k] = out.get(k, 0) + c
        return Polynomial(out)

    def substitute(self, values: Mapping[int, Coeff]) -> Polynomial:
        """Partially evaluate: replace the given variables by rational constants."""
        out: dict[Exps, Coeff] = {}
        for e, c in self._terms.items():
            coeff = Fraction(c)
            rest = list(e)
            for i, x in enumerate(e):
                if x and i in values:
                    coeff *= Fraction(values[i]) ** x
                    rest[i] = 0
            k = _trim(rest)
            out[k] = out.get(k, 0) + coeff
        return Polynomial(out)

    def compose(self, images: Mapping[int, Polynomial]) -> Polynomial:
        """Replace variable i by the polynomial images[i] (others kept)."""
        result = Polynomial()
        for e, c in self._terms.items():
            term = Polynomial.const(c)
            for i, x in enumerate(e):
                if x:
                    term = term * (images[i] if i in images else Polynomial.var(i)) ** x
            result = result + term
        return result

    def as_univariate(self, i: int) -> dict[int, Polynomial]:
        """Split into ``{k: coefficient of x_i^k}`` with coefficients free of x_i."""
        parts: dict[int, dict[Exps, Coeff]] = {}
        for e, c in self._terms.items():
            k = e[i] if i < len(e) else 0
            rest = list(e)
            if i < len(rest):
                rest[i] = 0
            parts.setdefault(k, {})[_trim(rest)] = c
        return {k: Polynomial(v) for k, v in parts.items()}


# ---------------------------------------------------------------------------
# evaluation, degree, denominators, homogenization


def eval_poly(f: Polynomial, a: Mapping[int, Coeff]) -> Fraction:
    """Exact value of ``f`` at the rational point ``a`` (var id -> value)."""
    missing = [v for v in f.variables() if v not in a]
    if missing:
        raise PolynomialError(f"no value assigned to x{missing[0]}")
    vals = {i: Fraction(v) for i, v in a.items()}
    total = Fraction(0)
    for e, c in f.items():
        t = Fraction(c)
        for i, x in enumerate(e):
            if x:
                t *= vals[i] ** x
        total += t
    return total


def total_degree(f: Polynomial) -> int:
    if f.is_zero():
        raise PolynomialError("the zero polynomial has no degree")
    return max(sum(e) for e, _ in f.items())


def clear_denominators(g: Polynomial) -> Polynomial:
    """Multiply by the lcm of the coefficient denominators.

    The content of the result is not divided out, so for integral input the
    polynomial is returned unchanged.
    """
    if g.is_zero():
        raise PolynomialError("cannot clear denominators of the zero polynomial")
    lcm = reduce(math.lcm, (Fraction(c).denominator for _, c in g.items()), 1)
    return g.scale(lcm)


def homogenize_core(f: Polynomial, y: int) -> Polynomial:
    """Return ``Y^d * f(X/Y)`` with ``Y = x_y`` and ``d = total_degree(f)``."""
    if f.is_zero():
        raise PolynomialError("cannot homogenize the zero polynomial")
    if y in f.variables():
        raise PolynomialError(f"homogenizing variable x{y} already occurs in f")
    d = total_degree(f)
    out: dict[Exps, Coeff] = {}
    for e, c in f.items():
        new = list(e) + [0] * max(0, y + 1 - len(e))
        new[y] += d - sum(e)
        out[_trim(new)] = c
    return Polynomial(out)


# ---------------------------------------------------------------------------
# text syntax


def _fmt_coeff(c: Coeff) -> str:
    return str(c)


def to_text(f: Polynomial) -> str:
    if f.is_zero():
        return "0"
    parts: list[str] = []
    for e, c in f.items():
        mono = "*".join(f"x{i}" if x == 1 else f"x{i}^{x}" for i, x in enumerate(e) if x)
        neg = c < 0
        a = -c if neg else c
        if not mono:
            body = _fmt_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_fmt_coeff(a)}*{mono}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(parts)


_TOKEN = re.compile(r"\s*(?:(\d+)|x(\d+)|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolynomialError(f"unexpected input at column {pos}: {text[pos:pos + 10]!r}")
        num, var, op = m.groups()
        if num is not None:
            out.append(("num", num))
        elif var is not None:
            out.append(("var", var))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens: list[tuple[str, str]]):
        self.toks = tokens
        self.i = 0

    def peek(self) -> tuple[str, str] | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self) -> tuple[str, str]:
        tok = self.peek()
        if tok is None:
            raise PolynomialError("unexpected end of input")
        self.i += 1
        return tok

    def expr(self) -> Polynomial:
        acc = self.term()
        while (t := self.peek()) is not None and t in (("op", "+"), ("op", "-")):
            self.take()
            rhs = self.term()
            acc = acc + rhs if t[1] == "+" else acc - rhs
        return acc

    def term(self) -> Polynomial:
        acc = self.unary()
        while (t := self.peek()) is not None and t in (("op", "*"), ("op", "/")):
            self.take()
            rhs = self.unary()
            if t[1] == "*":
                acc = acc * rhs
            else:
                if rhs.variables() or rhs.is_zero():
                    raise PolynomialError("division is only allowed by nonzero constants")
                acc = acc.scale(1 / Fraction(rhs.constant_term()))
        return acc

    def unary(self) -> Polynomial:
        t = self.peek()
        if t in (("op", "-"), ("op", "+")):
            self.take()
            inner = self.unary()
            return -inner if t[1] == "-" else inner
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise PolynomialError("exponent must be a natural number literal")
            return base ** int(val)
        return base

    def atom(self) -> Polynomial:
        kind, val = self.take()
        if kind == "num":
            return Polynomial.const(int(val))
        if kind == "var":
            return Polynomial.var(int(val))
        if val == "(":
            inner = self.expr()
            if self.take() != ("op", ")"):
                raise PolynomialError("missing closing parenthesis")
            return inner
        raise PolynomialError(f"unexpected token {val!r}")


def parse_poly(text: str) -> Polynomial:
    """Parse ASCII polynomial text such as ``"2*x0^2 + 2*x1^2 - 1"``.

    Rational constants may be written with ``/`` (``1/2*x0 - 1/3``); ``**``
    is accepted as a synonym for ``^``.
    """
    toks = _tokenize(text)
    if not toks:
        raise PolynomialError("empty polynomial text")
    p = _Parser(toks)
    out = p.expr()
    if p.peek() is not None:
        raise PolynomialError(f"trailing input starting at token {p.peek()[1]!r}")
    return out


# ---------------------------------------------------------------------------
# bijection N <-> Z[x0, x1, ...]


def cantor_pair(a: int, b: int) -> int:
    s = a + b
    return s * (s + 1) // 2 + b


def cantor_unpair(z: int) -> tuple[int, int]:
    w = (isqrt(8 * z + 1) - 1) // 2
    b = z - w * (w + 1) // 2
    return w - b, b


def _tuple_code(xs: tuple[int, ...]) -> int:
    acc = xs[-1]
    for x in reversed(xs[:-1]):
        acc = cantor_pair(x, acc)
    return acc


def _tuple_decode(z: int, k: int) -> tuple[int, ...]:
    out = []
    for _ in range(k - 1):
        a, z = cantor_unpair(z)
        out.append(a)
    out.append(z)
    return tuple(out)


def seq_code(xs: tuple[int, ...]) -> int:
    """Length-prefixed Cantor tupling: a bijection from finite sequences onto N."""
    if not xs:
        return 0
    return 1 + cantor_pair(len(xs) - 1, _tuple_code(xs))


def seq_decode(n: int) -> tuple[int, ...]:
    if n == 0:
        return ()
    k1, z = cantor_unpair(n - 1)
    return _tuple_decode(z, k1 + 1)


def _exps_code(e: Exps) -> int:
    # trimmed vectors (last entry >= 1) correspond to arbitrary sequences
    if not e:
        return 0
    return seq_code(e[:-1] + (e[-1] - 1,))


def _exps_decode(n: int) -> Exps:
    s = seq_decode(n)
    if not s:
        return ()
    return s[:-1] + (s[-1] + 1,)


def _zigzag(c: int) -> int:
    return 2 * (c - 1) if c > 0 else 2 * (-c) - 1


def _unzigzag(n: int) -> int:
    return n // 2 + 1 if n % 2 == 0 else -(n + 1) // 2


def encode(f: Polynomial) -> int:
    """Code number of an integral polynomial; 0 codes the zero polynomial.

    Terms are ordered by exponent code; consecutive gaps between exponent codes
    and the zig-zag coded coefficients are paired and the resulting sequence
    is length-prefix tupled.
    """
    if not f.is_integral():
        raise PolynomialError("only integral polynomials have code numbers")
    terms = sorted((_exps_code(e), c) for e, c in f.items())
    seq, prev = [], -1
    for ec, c in terms:
        seq.append(cantor_pair(ec - prev - 1, _zigzag(c)))
        prev = ec
    return seq_code(tuple(seq))


def decode(n: int) -> Polynomial:
    if n < 0:
        raise PolynomialError("code numbers are natural numbers")
    terms, prev = {}, -1
    for z in seq_decode(n):
        gap, cz = cantor_unpair(z)
        prev = prev + gap + 1
        terms[_exps_decode(prev)] = _unzigzag(cz)
    return Polynomial(terms)
