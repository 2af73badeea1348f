"""Height-bounded search for zeros of integer polynomials inside R_W.

The candidate grid at height H is every assignment whose coordinates are
reduced fractions a/b with |a| <= H, 1 <= b <= H and b W-smooth (all prime
factors of b in W).  Candidates are ordered by their height (the largest
coordinate height, where a/b has height max(|a|, b)) and then
lexicographically by coordinate key; the reported witness is always the least
solution in that order.

Two exact engines cover the grid:

* :func:`search_exhaustive` walks :func:`enumerate_candidates` and evaluates
  every point.  It is slow and serves as the reference.
* :func:`search` (the default) enumerates all but one "pivot" variable with
  numpy and solves for the pivot exactly: closed forms in degree <= 2,
  evaluation over the pivot's grid otherwise.  Integer overflow is ruled out
  by an a-priori bound; arrays fall back to Python integers when it fails.

Both engines agree on every outcome; the test-suite cross-checks them.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterator, Mapping
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .polyring import Polynomial, PolynomialError, clear_denominators, eval_poly
from .subrings import SubringDescriptor, prime_factors, primes_up_to

__all__ = [
    "SolutionWitness",
    "Found",
    "ExhaustedUpTo",
    "SearchOutcome",
    "SearchLimits",
    "ResourceLimitExceeded",
    "height",
    "coord_key",
    "assignment_key",
    "coordinate_grid",
    "enumerate_candidates",
    "candidate_count",
    "search",
    "search_exhaustive",
    "all_solutions",
    "witness_supports",
    "make_witness",
]

_INT64_SAFE = 2**62


class ResourceLimitExceeded(RuntimeError):
    """The requested search exceeds the configured limits; nothing is claimed."""


@dataclass(frozen=True)
class SearchLimits:
    max_points: int = 4_000_000
    max_height: int = 100_000
    max_vars: int = 12


DEFAULT_LIMITS = SearchLimits()


@dataclass(frozen=True)
class SolutionWitness:
    assignment: Mapping[int, Fraction]
    support: frozenset[int]

    def as_text(self) -> dict[str, str]:
        return {f"x{i}": str(v) for i, v in sorted(self.assignment.items())}


@dataclass(frozen=True)
class Found:
    witness: SolutionWitness
    height: int


@dataclass(frozen=True)
class ExhaustedUpTo:
    H: int


SearchOutcome = Found | ExhaustedUpTo


# ---------------------------------------------------------------------------
# ordering


def height(q) -> int:
    q = Fraction(q)
    return max(abs(q.numerator), q.denominator)


def coord_key(q) -> tuple[int, int, int, bool]:
    q = Fraction(q)
    return (height(q), q.denominator, abs(q.numerator), q.numerator < 0)


def assignment_key(values) -> tuple:
    keys = tuple(coord_key(v) for v in values)
    return (max((k[0] for k in keys), default=0), keys)


def make_witness(f: Polynomial, assignment: Mapping[int, Fraction]) -> SolutionWitness:
    assignment = {int(i): Fraction(v) for i, v in assignment.items()}
    support: set[int] = set()
    for v in assignment.values():
        support |= prime_factors(v.denominator)
    return SolutionWitness(assignment, frozenset(support))


# ---------------------------------------------------------------------------
# candidate grid


def _smooth_table(W: SubringDescriptor, H: int) -> np.ndarray:
    """smooth[b] is True iff every prime factor of b lies in W (0 <= b <= H)."""
    smooth = np.ones(H + 1, dtype=bool)
    smooth[0] = False
    for p in primes_up_to(H):
        if not W.has(p):
            smooth[p::p] = False
    return smooth


@lru_cache(maxsize=64)
def _grid_cached(W: SubringDescriptor, H: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    smooth = _smooth_table(W, H)
    nums, dens = [], []
    a = np.arange(-H, H + 1, dtype=np.int64)
    for b in np.flatnonzero(smooth):
        keep = a[np.gcd(a, b) == 1]
        nums.append(keep)
        dens.append(np.full(keep.shape, b, dtype=np.int64))
    num = np.concatenate(nums)
    den = np.concatenate(dens)
    h = np.maximum(np.abs(num), den)
    order = np.lexsort((num < 0, np.abs(num), den, h))
    num, den = num[order], den[order]
    for arr in (num, den, smooth):
        arr.flags.writeable = False
    return num, den, smooth


def coordinate_grid(W: SubringDescriptor, H: int) -> tuple[np.ndarray, np.ndarray]:
    """Numerators and denominators of every grid coordinate, in canonical order."""
    num, den, _ = _grid_cached(W, H)
    return num, den


def enumerate_candidates(nvars: int, W: SubringDescriptor, H: int) -> Iterator[tuple[Fraction, ...]]:
    """Yield every grid assignment once, by height then lexicographically."""
    if H < 1:
        raise ValueError("height bound must be >= 1")
    if nvars == 0:
        yield ()
        return
    num, den = coordinate_grid(W, H)
    coords = [Fraction(int(a), int(b)) for a, b in zip(num, den)]
    heights = [height(q) for q in coords]
    for h in range(1, H + 1):
        upto = [q for q, hq in zip(coords, heights) if hq <= h]
        for cand in itertools.product(upto, repeat=nvars):
            if max(height(q) for q in cand) == h:
                yield cand


def candidate_count(nvars: int, W: SubringDescriptor, H: int) -> int:
    return len(coordinate_grid(W, H)[0]) ** nvars


# ---------------------------------------------------------------------------
# exact pivot scan


def _isqrt_exact(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Integer square roots and a mask of exact squares, for x >= 0."""
    if x.dtype == object:
        r = np.array([math.isqrt(int(v)) for v in x], dtype=object)
        return r, (r * r == x)
    r = np.floor(np.sqrt(x.astype(np.float64))).astype(np.int64)
    best = r.copy()
    ok = np.zeros(x.shape, dtype=bool)
    for delta in (-1, 0, 1):
        c = np.maximum(r + delta, 0)
        hit = c * c == x
        best = np.where(hit, c, best)
        ok |= hit
    return best, ok


def _gcd(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype == object or b.dtype == object:
        return np.array([math.gcd(int(x), int(y)) for x, y in zip(a, b)], dtype=object)
    return np.gcd(a, b)


def _reduce(num: np.ndarray, den: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    sign = np.where(den < 0, -1, 1)
    num, den = num * sign, den * sign
    g = _gcd(np.abs(num), den)
    g = np.where(g == 0, 1, g)
    return num // g, den // g


class _Plan:
    """Precomputed data for scanning one polynomial over one grid."""

    def __init__(self, f: Polynomial, W: SubringDescriptor, H: int):
        self.f, self.W, self.H = f, W, H
        self.vars = f.variables()
        self.pivot = min(self.vars, key=lambda v: (f.degree_in(v), -v))
        self.others = [v for v in self.vars if v != self.pivot]
        parts = f.as_univariate(self.pivot)
        self.deg = max(parts)
        self.dother = {v: f.degree_in(v) for v in self.others}
        span = sum(self.dother.values())
        # each coefficient: list of (coef, exponents of others)
        self.parts: dict[int, list[tuple[int, tuple[int, ...]]]] = {}
        bounds = {}
        for k in range(self.deg + 1):
            p = parts.get(k, Polynomial())
            self.parts[k] = [
                (int(c), tuple(e[v] if v < len(e) else 0 for v in self.others)) for e, c in p.items()
            ]
            bounds[k] = sum(abs(c) for c, _ in self.parts[k]) * H**span
        num, den, smooth = _grid_cached(W, H)
        self.num, self.den, self.smooth = num, den, smooth
        self.G = len(num)
        self.points = self.G ** len(self.others)
        if self.deg <= 1:
            need = max(bounds.values())
        elif self.deg == 2:
            need = max(max(bounds.values()), bounds[1] ** 2 + 4 * bounds[2] * bounds[0])
        else:
            need = sum(bounds.values()) * H**self.deg
        self.dtype = np.int64 if need < _INT64_SAFE else object

    def coefficients(self, start: int, stop: int):
        k = len(self.others)
        idx = np.arange(start, stop, dtype=np.int64)
        multi = np.unravel_index(idx, (self.G,) * k) if k else ()
        n = stop - start
        powA, powB = [], []
        for i, v in enumerate(self.others):
            a = self.num[multi[i]].astype(self.dtype)
            b = self.den[multi[i]].astype(self.dtype)
            pa, pb = [np.ones(n, dtype=self.dtype)], [np.ones(n, dtype=self.dtype)]
            for _ in range(self.dother[v]):
                pa.append(pa[-1] * a)
                pb.append(pb[-1] * b)
            powA.append(pa)
            powB.append(pb)
        C = []
        for kk in range(self.deg + 1):
            acc = np.zeros(n, dtype=self.dtype)
            for c, ex in self.parts[kk]:
                t = np.full(n, c, dtype=self.dtype)
                for i, v in enumerate(self.others):
                    t = t * powA[i][ex[i]] * powB[i][self.dother[v] - ex[i]]
                acc = acc + t
            C.append(acc)
        return multi, C

    def _accept(self, pts, ynum, yden, out):
        ynum, yden = _reduce(ynum, yden)
        ok = (np.abs(ynum) <= self.H) & (yden <= self.H) & (yden >= 1)
        pts, ynum, yden = pts[ok], ynum[ok], yden[ok]
        if len(pts):
            ok2 = self.smooth[yden.astype(np.int64)]
            pts, ynum, yden = pts[ok2], ynum[ok2], yden[ok2]
        out.extend(zip(pts.tolist(), [int(v) for v in ynum], [int(v) for v in yden]))

    def solve_range(self, start: int, stop: int) -> list[tuple[Fraction, ...]]:
        multi, C = self.coefficients(start, stop)
        n = stop - start
        allidx = np.arange(n)
        found: list[tuple[int, int, int]] = []
        zero_all = np.ones(n, dtype=bool)
        for c in C:
            zero_all &= c == 0
        found.extend((int(i), 0, 1) for i in np.flatnonzero(zero_all))
        live = ~zero_all
        if self.deg == 1:
            c0, c1 = C
            m = live & (c1 != 0)
            self._accept(allidx[m], -c0[m], c1[m], found)
        elif self.deg == 2:
            c0, c1, c2 = C
            lin = live & (c2 == 0) & (c1 != 0)
            self._accept(allidx[lin], -c0[lin], c1[lin], found)
            quad = live & (c2 != 0)
            q0, q1, q2, qi = c0[quad], c1[quad], c2[quad], allidx[quad]
            disc = q1 * q1 - 4 * q2 * q0
            nonneg = disc >= 0
            q0, q1, q2, qi, disc = q0[nonneg], q1[nonneg], q2[nonneg], qi[nonneg], disc[nonneg]
            r, sq = _isqrt_exact(disc)
            q1, q2, qi, r = q1[sq], q2[sq], qi[sq], r[sq]
            self._accept(qi, -q1 + r, 2 * q2, found)
            self._accept(qi, -q1 - r, 2 * q2, found)
        else:
            self._grid_eval(C, live, allidx, found)
        return self._materialize(multi, start, found)

    def _grid_eval(self, C, live, allidx, found):
        pn = self.num.astype(self.dtype)
        pd = self.den.astype(self.dtype)
        pnp = [np.ones(self.G, dtype=self.dtype)]
        pdp = [np.ones(self.G, dtype=self.dtype)]
        for _ in range(self.deg):
            pnp.append(pnp[-1] * pn)
            pdp.append(pdp[-1] * pd)
        rows = allidx[live]
        if not len(rows):
            return
        step = max(1, 2**20 // self.G)
        for s in range(0, len(rows), step):
            blk = rows[s : s + step]
            total = np.zeros((len(blk), self.G), dtype=self.dtype)
            for k, c in enumerate(C):
                total = total + np.outer(c[blk], pnp[k] * pdp[self.deg - k])
            ii, jj = np.nonzero(total == 0)
            found.extend((int(blk[i]), int(self.num[j]), int(self.den[j])) for i, j in zip(ii, jj))

    def _materialize(self, multi, start, found):
        sols = set()
        pos = {v: i for i, v in enumerate(self.others)}
        for i, yn, yd in found:
            vals = []
            for v in self.vars:
                if v == self.pivot:
                    vals.append(Fraction(yn, yd))
                else:
                    g = multi[pos[v]][i]
                    vals.append(Fraction(int(self.num[g]), int(self.den[g])))
            sols.add(tuple(vals))
        return list(sols)


def _scan_worker(args):
    f, W, H, start, stop, chunk = args
    plan = _Plan(f, W, H)
    out = []
    for s in range(start, stop, chunk):
        out.extend(plan.solve_range(s, min(stop, s + chunk)))
    return out


def _prepare(f: Polynomial, H: int, limits: SearchLimits) -> Polynomial:
    if f.is_zero():
        raise PolynomialError("the zero polynomial is excluded from search")
    if H < 1:
        raise ValueError("height bound must be >= 1")
    if H > limits.max_height:
        raise ResourceLimitExceeded(f"height {H} exceeds limit {limits.max_height}")
    if len(f.variables()) > limits.max_vars:
        raise ResourceLimitExceeded(f"{len(f.variables())} variables exceed limit {limits.max_vars}")
    return f if f.is_integral() else clear_denominators(f)


def all_solutions(
    f: Polynomial, W: SubringDescriptor, H: int, *, limits: SearchLimits = DEFAULT_LIMITS, jobs: int = 1
) -> list[tuple[Fraction, ...]]:
    """Solutions of f = 0 on the height-H grid, values ordered by variable id.

    Where f vanishes for every value of the pivot variable only the pivot value
    0 is reported; it dominates the others both in canonical order and in
    denominator support.
    """
    f = _prepare(f, H, limits)
    if not f.variables():
        return []
    plan = _Plan(f, W, H)
    if plan.points > limits.max_points:
        raise ResourceLimitExceeded(f"{plan.points} grid points exceed limit {limits.max_points}")
    chunk = 2**17 if plan.deg <= 2 else max(1, 2**14)
    if jobs <= 1 or plan.points < 4 * chunk:
        return _scan_worker((f, W, H, 0, plan.points, chunk))
    bounds = np.linspace(0, plan.points, jobs + 1).astype(np.int64).tolist()
    tasks = [(f, W, H, a, b, chunk) for a, b in zip(bounds, bounds[1:]) if b > a]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        parts = list(ex.map(_scan_worker, tasks))
    return [s for part in parts for s in part]


def _schedule(H: int) -> list[int]:
    hs, h = [], 1
    while h < H:
        hs.append(h)
        h *= 2
    hs.append(H)
    return hs


def _verified(f: Polynomial, W: SubringDescriptor, vars_, values) -> SolutionWitness:
    w = make_witness(f, dict(zip(vars_, values)))
    if eval_poly(f, w.assignment) != 0 or not all(W.has(p) for p in w.support):
        raise AssertionError(f"internal error: unverifiable witness {w}")
    return w


def search(
    f: Polynomial, W: SubringDescriptor, H: int, *, limits: SearchLimits = DEFAULT_LIMITS, jobs: int = 1
) -> SearchOutcome:
    """Least zero of f in R_W of height <= H, or an exhaustion claim.

    Heights are tried in doubling rounds so small solutions return quickly;
    each round is a complete scan, so the least solution found in the first
    successful round is the least overall.
    """
    g = _prepare(f, H, limits)
    vars_ = g.variables()
    if not vars_:
        return ExhaustedUpTo(H)
    for h in _schedule(H):
        sols = all_solutions(g, W, h, limits=limits, jobs=jobs)
        if sols:
            best = min(sols, key=assignment_key)
            return Found(_verified(g, W, vars_, best), assignment_key(best)[0])
    return ExhaustedUpTo(H)


def search_exhaustive(
    f: Polynomial,
    W: SubringDescriptor,
    H: int,
    *,
    moduli: tuple[int, ...] = (),
    limits: SearchLimits = DEFAULT_LIMITS,
) -> SearchOutcome:
    """Reference engine: evaluate f at every grid candidate in canonical order.

    ``moduli`` enables a cheap pre-test on integer candidates (f reduced mod m
    must vanish); it only skips evaluations and never changes the outcome.
    """
    g = _prepare(f, H, limits)
    vars_ = g.variables()
    if not vars_:
        return ExhaustedUpTo(H)
    if candidate_count(len(vars_), W, H) > limits.max_points:
        raise ResourceLimitExceeded("candidate grid exceeds the configured limit")
    terms = list(g.items())
    for cand in enumerate_candidates(len(vars_), W, H):
        if moduli and all(q.denominator == 1 for q in cand):
            point = dict(zip(vars_, (int(q) for q in cand)))
            if any(_eval_mod(terms, point, m) != 0 for m in moduli):
                continue
        if eval_poly(g, dict(zip(vars_, cand))) == 0:
            return Found(_verified(g, W, vars_, cand), assignment_key(cand)[0])
    return ExhaustedUpTo(H)


def _eval_mod(terms, point: Mapping[int, int], m: int) -> int:
    total = 0
    for e, c in terms:
        t = c % m
        for i, x in enumerate(e):
            if x:
                t = t * pow(point[i], x, m) % m
        total += t
    return total % m


def witness_supports(
    f: Polynomial, W: SubringDescriptor, H: int, *, limits: SearchLimits = DEFAULT_LIMITS
) -> dict[frozenset[int], SolutionWitness]:
    """Map each denominator support occurring among grid solutions to its least witness."""
    g = _prepare(f, H, limits)
    vars_ = g.variables()
    if not vars_:
        return {}
    best: dict[frozenset[int], tuple] = {}
    for sol in all_solutions(g, W, H, limits=limits):
        supp: set[int] = set()
        for q in sol:
            if q.denominator > 1:
                supp |= prime_factors(q.denominator)
        key = frozenset(supp)
        if key not in best or assignment_key(sol) < assignment_key(best[key]):
            best[key] = sol
    return {s: _verified(g, W, vars_, sol) for s, sol in best.items()}
