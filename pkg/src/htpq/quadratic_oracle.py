"""A decidable solvability oracle for a small family of quadratic equations.

Full solvability over Q is not known to be decidable, so certificates of
non-solvability are only issued on a family where the answer is computable:

* ``c*(X^2 + Y^2) - e``: exact in every R_W (two-squares theorem plus a
  denominator condition);
* ``a*X + b`` in one variable: exact in every R_W (inspect the root);
* homogeneous quadratic forms in at most four variables: always solvable
  (the zero vector); isotropy over Q is reported as extra information;
* diagonalizable ``Q(X) + k`` in at most three variables: when the form
  ``Q + k*T^2`` is anisotropic over Q (Hasse-Minkowski), unsolvable in every
  subring; when it is isotropic the answer is only given for W = all primes.

Anything else yields :class:`NotInFamily`.
"""

from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import numpy as np

from .polyring import Polynomial
from .subrings import CofiniteExclude, SubringDescriptor, factorize, is_prime

__all__ = [
    "INF",
    "OracleVerdict",
    "NotInFamily",
    "QuadraticForm",
    "padic_valuation",
    "hilbert_symbol",
    "hilbert_symbol_bruteforce",
    "is_square_in_Qp",
    "isotropic_over_Q",
    "two_squares",
    "two_squares_in_subring",
    "decide_family_member",
    "diagonalize",
    "relevant_places",
]

INF = "inf"
Place = Union[int, str]


@dataclass(frozen=True)
class OracleVerdict:
    solvable: bool
    reason: dict = field(default_factory=dict)
    witness: dict | None = None


@dataclass(frozen=True)
class NotInFamily:
    reason: str = "outside the supported family"


# ---------------------------------------------------------------------------
# local arithmetic


def padic_valuation(q, p: int) -> int | float:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    q = Fraction(q)
    if q == 0:
        return math.inf

    def v(n: int) -> int:
        k = 0
        while n % p == 0:
            n //= p
            k += 1
        return k

    return v(abs(q.numerator)) - v(q.denominator)


def _integral_rep(a) -> int:
    # same square class, integral
    a = Fraction(a)
    return a.numerator * a.denominator


def _split(n: int, p: int) -> tuple[int, int]:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k, n


def _legendre(u: int, p: int) -> int:
    r = pow(u % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def hilbert_symbol(a, b, place: Place) -> int:
    """(a, b) at a prime p or at ``INF``, via the standard local formulas."""
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol needs nonzero arguments")
    if place == INF:
        return -1 if a < 0 and b < 0 else 1
    p = int(place)
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    alpha, u = _split(_integral_rep(a), p)
    beta, v = _split(_integral_rep(b), p)
    if p != 2:
        s = (-1) ** (alpha * beta * ((p - 1) // 2))
        return s * _legendre(u, p) ** beta * _legendre(v, p) ** alpha
    eps = lambda x: ((x - 1) // 2) % 2
    omg = lambda x: ((x * x - 1) // 8) % 2
    e = eps(u) * eps(v) + alpha * omg(v) + beta * omg(u)
    return -1 if e % 2 else 1


@dataclass(frozen=True)
class _SquareTables:
    modulus: int
    squares: np.ndarray  # z^2 for all z
    unit_squares: np.ndarray  # z^2 for z a unit


_TABLES: dict[int, _SquareTables] = {}


def _tables(p: int, k: int) -> _SquareTables:
    m = p**k
    if m not in _TABLES:
        z = np.arange(m, dtype=np.int64)
        sq = np.zeros(m, dtype=bool)
        sq[(z * z) % m] = True
        usq = np.zeros(m, dtype=bool)
        units = z[z % p != 0]
        usq[(units * units) % m] = True
        _TABLES[m] = _SquareTables(m, sq, usq)
    return _TABLES[m]


def hilbert_symbol_bruteforce(a, b, place: Place) -> int:
    """Independent evaluator: search for a primitive zero of z^2 - a x^2 - b y^2.

    Square factors are stripped so that both valuations are 0 or 1, then every
    (x, y) modulo p^3 (2^6 for p = 2) is tried.
    """
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol needs nonzero arguments")
    if place == INF:
        # a real nontrivial zero exists iff a*x^2 + b*y^2 >= 0 somewhere on the unit circle
        return 1 if max(a, b) > 0 else -1
    p = int(place)
    k = 6 if p == 2 else 3
    T = _tables(p, k)
    m = T.modulus

    def reduce(n: int) -> int:
        e, u = _split(n, p)
        return (p if e % 2 else 1) * u

    ar, br = reduce(_integral_rep(a)) % m, reduce(_integral_rep(b)) % m
    return _primitive_zero_mod(ar, br, p, k)


@lru_cache(maxsize=4096)
def _primitive_zero_mod(ar: int, br: int, p: int, k: int) -> int:
    T = _tables(p, k)
    m = T.modulus
    x = np.arange(m, dtype=np.int64)
    unit = x % p != 0
    a_unit = np.unique((ar * x[unit] * x[unit]) % m)
    a_all = np.unique((ar * x * x) % m)
    a_div = np.unique((ar * x[~unit] * x[~unit]) % m)
    b_unit = np.unique((br * x[unit] * x[unit]) % m)
    b_all = np.unique((br * x * x) % m)
    b_div = np.unique((br * x[~unit] * x[~unit]) % m)
    # (x unit, any y), (any x, y unit): z arbitrary; (p | x, p | y): z must be a unit
    for left, right, table in ((a_unit, b_all, T.squares), (a_all, b_unit, T.squares), (a_div, b_div, T.unit_squares)):
        step = max(1, 2**16 // len(right))
        for s in range(0, len(left), step):
            if table[(left[s : s + step, None] + right[None, :]) % m].any():
                return 1
    return -1


def is_square_in_Qp(x, p: Place) -> bool:
    x = Fraction(x)
    if x == 0:
        return True
    if p == INF:
        return x > 0
    n = _integral_rep(x)
    e, u = _split(n, int(p))
    if e % 2:
        return False
    if p == 2:
        return u % 8 == 1
    return _legendre(u, int(p)) == 1


def relevant_places(*values) -> list[Place]:
    """INF, 2, and every prime dividing a numerator or denominator."""
    primes = {2}
    for v in values:
        v = Fraction(v)
        primes |= set(factorize(v.numerator)) if v.numerator else set()
        primes |= set(factorize(v.denominator))
    return [INF] + sorted(primes)


# ---------------------------------------------------------------------------
# forms


@dataclass(frozen=True)
class QuadraticForm:
    """Diagonal form <a_1, ..., a_n> with nonzero rational entries, n <= 4."""

    entries: tuple[Fraction, ...]

    def __post_init__(self):
        ents = tuple(Fraction(a) for a in self.entries)
        if not ents or len(ents) > 4:
            raise ValueError("dimension must be between 1 and 4")
        if any(a == 0 for a in ents):
            raise ValueError("diagonal entries must be nonzero")
        object.__setattr__(self, "entries", ents)

    @classmethod
    def from_polynomial(cls, f: Polynomial) -> QuadraticForm:
        diag = diagonalize(f)
        nz = [d for d in diag if d != 0]
        if len(nz) != len(diag):
            raise ValueError("degenerate form")
        return cls(tuple(nz))


def diagonalize(f: Polynomial) -> list[Fraction]:
    """Diagonal entries (zeros for the radical) of a homogeneous quadratic f."""
    vs = f.variables()
    if any(sum(e) != 2 for e, _ in f.items()):
        raise ValueError("not a homogeneous quadratic")
    n = len(vs)
    pos = {v: i for i, v in enumerate(vs)}
    M = [[Fraction(0)] * n for _ in range(n)]
    for e, c in f.items():
        idx = [pos[i] for i, x in enumerate(e) for _ in range(x)]
        i, j = idx
        if i == j:
            M[i][i] += c
        else:
            M[i][j] += Fraction(c, 2)
            M[j][i] += Fraction(c, 2)
    out = []
    for i in range(n):
        if M[i][i] == 0:
            j = next((j for j in range(i + 1, n) if M[j][j] != 0), None)
            if j is not None:
                M[i], M[j] = M[j], M[i]
                for row in M:
                    row[i], row[j] = row[j], row[i]
            else:
                j = next((j for j in range(i + 1, n) if M[i][j] != 0), None)
                if j is not None:
                    # x_i <- x_i + x_j gives a nonzero pivot 2*M[i][j]
                    for c in range(n):
                        M[i][c] += M[j][c]
                    for r in range(n):
                        M[r][i] += M[r][j]
        piv = M[i][i]
        out.append(piv)
        if piv == 0:
            continue
        for r in range(i + 1, n):
            t = M[r][i] / piv
            if t:
                for c in range(n):
                    M[r][c] -= t * M[i][c]
                for c in range(n):
                    M[c][r] -= t * M[c][i]
    return out


def _local_isotropic(ents: tuple[Fraction, ...], v: Place) -> bool:
    n = len(ents)
    if n == 1:
        return False
    if n == 2:
        return is_square_in_Qp(-ents[0] * ents[1], v)
    if n == 3:
        a, b, c = ents
        return hilbert_symbol(-a * c, -b * c, v) == 1
    d = math.prod(ents)
    if not is_square_in_Qp(d, v):
        return True
    hasse = 1
    for i in range(4):
        for j in range(i + 1, 4):
            hasse *= hilbert_symbol(ents[i], ents[j], v)
    return hasse == hilbert_symbol(-1, -1, v)


def isotropic_over_Q(F: QuadraticForm) -> OracleVerdict:
    """Hasse-Minkowski: isotropic over Q iff isotropic at every place."""
    ents = F.entries
    if len(ents) == 1:
        return OracleVerdict(False, {"failing_places": ["all"], "detail": "rank one form"})
    places = relevant_places(*ents)
    if len(ents) == 2:
        # -a*b is a global square iff it is a local square everywhere
        failing = [str(v) for v in places if not is_square_in_Qp(-ents[0] * ents[1], v)]
    else:
        failing = [str(v) for v in places if not _local_isotropic(ents, v)]
    reason = {"places_checked": [str(p) for p in places]}
    if failing:
        return OracleVerdict(False, {"failing_places": failing, **reason})
    return OracleVerdict(True, reason)


# ---------------------------------------------------------------------------
# sums of two squares


def _sqrt_minus_one(p: int) -> int:
    c = 2
    while _legendre(c, p) != -1:
        c += 1
    return pow(c, (p - 1) // 4, p)


def _prime_two_squares(p: int) -> tuple[int, int]:
    if p == 2:
        return 1, 1
    a, b = p, _sqrt_minus_one(p)
    while b * b > p:
        a, b = b, a % b
    c = math.isqrt(p - b * b)
    return b, c


def two_squares(n: int) -> tuple[int, int] | None:
    """(a, b) with a >= b >= 0 and a^2 + b^2 = n, or None if impossible."""
    if n < 0:
        return None
    if n == 0:
        return 0, 0
    re_, im = 1, 0
    for p, e in factorize(n).items():
        if p % 4 == 3:
            if e % 2:
                return None
            re_, im = re_ * p ** (e // 2), im * p ** (e // 2)
            continue
        x, y = _prime_two_squares(p)
        for _ in range(e):
            re_, im = re_ * x - im * y, re_ * y + im * x
    a, b = abs(re_), abs(im)
    return (a, b) if a >= b else (b, a)


def two_squares_in_subring(q, W: SubringDescriptor) -> OracleVerdict:
    """Decide whether X^2 + Y^2 = q has a solution with X, Y in R_W."""
    q = Fraction(q)
    if q == 0:
        return OracleVerdict(True, {"family": "two_squares", "q": "0"}, {"X": "0", "Y": "0"})
    if q < 0:
        return OracleVerdict(False, {"family": "two_squares", "q": str(q), "failing_places": [INF]})
    fac_num = factorize(q.numerator)
    fac_den = factorize(q.denominator)
    for ell in sorted(set(fac_num) | set(fac_den)):
        v = fac_num.get(ell, 0) - fac_den.get(ell, 0)
        if ell % 4 == 3 and v % 2:
            return OracleVerdict(
                False, {"family": "two_squares", "q": str(q), "failing_places": [str(ell)], "valuation": v}
            )
    missing = sorted(p for p in fac_den if not W.has(p))
    if missing:
        return OracleVerdict(
            False, {"family": "two_squares", "q": str(q), "denominator_primes_outside_W": missing}
        )
    s = q.denominator
    a, b = two_squares(q.numerator * s)
    return OracleVerdict(
        True,
        {"family": "two_squares", "q": str(q), "scale": s},
        {"X": str(Fraction(a, s)), "Y": str(Fraction(b, s))},
    )


# ---------------------------------------------------------------------------
# family facade


def _as_two_squares(f: Polynomial) -> tuple[int, int, int, int] | None:
    """(u, v, c, e) when f = c*(x_u^2 + x_v^2) - e with u < v."""
    vs = f.variables()
    if len(vs) != 2:
        return None
    u, v = vs
    cu = f.terms.get((0,) * u + (2,))
    cv = f.terms.get((0,) * v + (2,))
    if cu is None or cu != cv:
        return None
    if len(f) - (1 if f.constant_term() else 0) != 2:
        return None
    return u, v, int(cu), -int(f.constant_term())


def decide_family_member(f: Polynomial, W: SubringDescriptor) -> OracleVerdict | NotInFamily:
    """Exact verdict on ``f in HTP(R_W)`` for supported patterns, else NotInFamily."""
    if f.is_zero() or not f.is_integral():
        return NotInFamily("zero or non-integral polynomial")
    vs = f.variables()
    if not vs:
        return NotInFamily("constant polynomial")
    degs = {sum(e) for e, _ in f.items()}
    if len(vs) == 1 and max(degs) == 1:
        x = vs[0]
        a = f.terms[(0,) * x + (1,)]
        r = Fraction(-f.constant_term(), a)
        den_primes = sorted(factorize(r.denominator))
        missing = [p for p in den_primes if not W.has(p)]
        reason = {"family": "linear", "root": str(r), "denominator_primes": den_primes}
        if missing:
            reason["denominator_primes_outside_W"] = missing
            return OracleVerdict(False, reason)
        return OracleVerdict(True, reason, {f"x{x}": str(r)})
    ts = _as_two_squares(f)
    if ts is not None:
        u, v, c, e = ts
        verdict = two_squares_in_subring(Fraction(e, c), W)
        wit = None
        if verdict.witness is not None:
            wit = {f"x{u}": verdict.witness["X"], f"x{v}": verdict.witness["Y"]}
        return OracleVerdict(verdict.solvable, verdict.reason, wit)
    if max(degs) != 2 or any(0 < sum(e) < 2 for e, _ in f.items()):
        return NotInFamily("not a quadratic without linear terms")
    k = f.constant_term()
    form_part = f - k
    if len(vs) > 4 or (k and len(vs) > 3):
        return NotInFamily("too many variables")
    diag = diagonalize(form_part)
    nz = tuple(d for d in diag if d != 0)
    if k == 0:
        iso = isotropic_over_Q(QuadraticForm(nz)) if nz else OracleVerdict(True, {})
        if len(nz) < len(diag):
            iso = OracleVerdict(True, {"detail": "degenerate form"})
        reason = {"family": "homogeneous_quadratic", "nontrivial_zero_over_Q": iso.solvable, **iso.reason}
        return OracleVerdict(True, reason, {f"x{x}": "0" for x in vs})
    if not nz:
        return NotInFamily("no quadratic part")
    verdict = isotropic_over_Q(QuadraticForm(nz + (Fraction(k),)))
    reason = {"family": "diagonal_conic", "entries": [str(d) for d in nz], "constant": str(k), **verdict.reason}
    if not verdict.solvable:
        return OracleVerdict(False, reason)
    if isinstance(W, CofiniteExclude) and not W.primes:
        return OracleVerdict(True, reason)
    return NotInFamily("rational solutions exist; subring question unsupported")
