"""Straight lines lying on the graph of a reliability polynomial.

A line ``R_i = a_i t + b_i`` (``i = 1..n``), ``R = a_{n+1} t + b_{n+1}`` lies
on the graph of ``p`` iff ``p(a t + b)`` equals ``a_{n+1} t + b_{n+1}`` as a
polynomial in ``t``.  Expanding gives one equation per power of ``t``:
``c_0 = b_{n+1}``, ``c_1 = a_{n+1}`` and ``c_k = 0`` for ``k >= 2``, where
``c_k`` is multilinear in the ``2n`` unknowns ``a_1..a_n, b_1..b_n``.

In the ``2n``-variable polynomials returned by :func:`coefficient_system`,
``a_i`` is variable ``i`` and ``b_i`` is variable ``n + i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Mapping, Sequence

import numpy as np

from .linalg import rank
from .netmodel import fixture, minimal_cuts
from .reliability import from_min_cuts
from .sqfree_poly import SqFreePoly, to_fraction

__all__ = [
    "AffineLine",
    "ZeroPattern",
    "Branch",
    "Window",
    "bridge_polynomial",
    "coefficient_system",
    "complete_point",
    "line_polynomial",
    "verify_line",
    "verify_line_sampling",
    "verify_line_coefficients",
    "zero_patterns",
    "enumerate_branches",
    "branch_for",
    "solve_directions",
    "probability_window",
    "plausibility_report",
    "DIRECTION_GRID",
    "BASE_GRID",
    "CASE_LABELS",
    "DEFAULT_PINS",
]

# free direction coordinates are drawn from this grid (never 0)
DIRECTION_GRID = tuple(Fraction(x) for x in (1, -1, 2, -2, Fraction(1, 2), Fraction(-1, 2), 5))
# base-point coordinates; 0 and 1 matter because many residuals factor through b_i or 1 - b_i
BASE_GRID = tuple(Fraction(x) for x in (0, 1, -1, 2, Fraction(1, 2), Fraction(-1, 2), Fraction(1, 4), Fraction(3, 4), 5))


@lru_cache(maxsize=None)
def bridge_polynomial() -> SqFreePoly:
    """Reliability polynomial of the ``fig2`` bridge network."""
    return from_min_cuts(minimal_cuts(fixture("fig2")), 5)


def _names(n: int) -> list[str]:
    return [f"a{i}" for i in range(1, n + 1)] + [f"b{i}" for i in range(1, n + 1)]


def coefficient_system(p: SqFreePoly) -> list[SqFreePoly]:
    """Coefficients ``c_0..c_n`` of ``p(a t + b)`` as polynomials in ``a, b``.

    ``c_k`` collects, for every monomial ``M`` of ``p`` and every ``k``-subset
    ``T`` of its variables, ``coeff(M) * prod_{T} a_i * prod_{M \\ T} b_i``.
    """
    n = p.n
    if n < 1:
        raise ValueError("coefficient system needs at least one variable")
    out: list[dict[int, Fraction]] = [{} for _ in range(n + 1)]
    for mask, coeff in p.terms.items():
        vars_ = [i for i in range(n) if mask >> i & 1]
        for k in range(len(vars_) + 1):
            for chosen in combinations(vars_, k):
                m = 0
                for i in vars_:
                    m |= 1 << i if i in chosen else 1 << (n + i)
                out[k][m] = out[k].get(m, 0) + coeff
    names = _names(n)
    return [SqFreePoly(2 * n, terms, names) for terms in out]


def complete_point(b: Sequence, p: SqFreePoly | None = None) -> Fraction:
    """Height of the graph of ``p`` (default: the bridge polynomial) over ``b``."""
    p = bridge_polynomial() if p is None else p
    return p.evaluate([to_fraction(x) for x in b])


@dataclass(frozen=True)
class AffineLine:
    """``t -> a t + b`` in ``n + 1`` coordinates; the last one is the reliability."""

    a: tuple[Fraction, ...]
    b: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(to_fraction(x) for x in self.a))
        object.__setattr__(self, "b", tuple(to_fraction(x) for x in self.b))
        if len(self.a) != len(self.b):
            raise ValueError("direction and base point differ in length")
        if len(self.a) < 2:
            raise ValueError("a line needs at least one component coordinate plus the value")

    @property
    def n(self) -> int:
        return len(self.a) - 1

    @property
    def is_degenerate(self) -> bool:
        return not any(self.a)

    def at(self, t) -> tuple[Fraction, ...]:
        t = to_fraction(t)
        return tuple(ai * t + bi for ai, bi in zip(self.a, self.b))

    def to_json(self) -> dict:
        return {"a": [_frac(x) for x in self.a], "b": [_frac(x) for x in self.b]}

    @classmethod
    def from_json(cls, doc: Mapping) -> AffineLine:
        return cls(tuple(doc["a"]), tuple(doc["b"]))


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _check_line(p: SqFreePoly, line: AffineLine):
    if line.n != p.n:
        raise ValueError(f"line has {line.n} component coordinates, polynomial has {p.n}")


def verify_line_sampling(p: SqFreePoly, line: AffineLine) -> bool:
    """Check ``p(a t + b) = a_{n+1} t + b_{n+1}`` at ``n + 1`` distinct ``t``.

    The difference is a polynomial of degree at most ``n`` in ``t``, so
    vanishing at ``n + 1`` points forces it to vanish identically.
    """
    _check_line(p, line)
    for t in range(p.n + 1):
        pt = line.at(t)
        if p.evaluate(pt[:-1]) != pt[-1]:
            return False
    return True


def verify_line_coefficients(p: SqFreePoly, line: AffineLine) -> bool:
    """Check the line against :func:`coefficient_system` term by term."""
    _check_line(p, line)
    c = coefficient_system(p)
    point = line.a[:-1] + line.b[:-1]
    vals = [ck.evaluate(point) for ck in c]
    if vals[0] != line.b[-1] or vals[1] != line.a[-1]:
        return False
    return not any(vals[2:])


def verify_line(p: SqFreePoly, line: AffineLine) -> bool:
    """True iff the line lies on the graph of ``p``; both checks must agree."""
    by_samples = verify_line_sampling(p, line)
    by_coeffs = verify_line_coefficients(p, line)
    if by_samples != by_coeffs:
        raise AssertionError(f"line checks disagree for {line}")
    return by_samples


def line_polynomial(p: SqFreePoly, a: Sequence, b: Sequence) -> AffineLine:
    """The line through ``(b, p(b))`` with direction ``a`` and ``a_{n+1} = c_1``.

    Only meaningful when ``c_2..c_n`` vanish; :func:`verify_line` says so.
    """
    a = [to_fraction(x) for x in a]
    b = [to_fraction(x) for x in b]
    c = coefficient_system(p)
    point = a + b
    return AffineLine(tuple(a) + (c[1].evaluate(point),), tuple(b) + (c[0].evaluate(point),))


# ---------------------------------------------------------------- branches

@dataclass(frozen=True, order=True)
class ZeroPattern:
    """Exact zero set of the direction plus optional base-point pins.

    ``zeroed`` lists the ``i`` with ``a_i = 0``; every other ``a_i`` (``i <= n``)
    is required to be nonzero.  ``pins`` fixes some ``b_i`` to given values.
    """

    zeroed: tuple[int, ...]
    pins: tuple[tuple[int, Fraction], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "zeroed", tuple(sorted(set(self.zeroed))))
        object.__setattr__(self, "pins", tuple(sorted((int(i), to_fraction(v)) for i, v in dict(self.pins).items())))

    @property
    def key(self) -> str:
        head = "=".join(f"a{i}" for i in self.zeroed) + "=0" if self.zeroed else "none"
        tail = "".join(f",b{i}={_frac(v)}" for i, v in self.pins)
        return head + tail

    @classmethod
    def parse(cls, text: str) -> ZeroPattern:
        """Inverse of :attr:`key`, e.g. ``"a1=a4=a5=0,b1=1"``."""
        if text.strip() == "none":
            return cls(())
        parts = [s.strip() for s in text.split(",") if s.strip()]
        if not parts:
            raise ValueError("empty pattern")
        zeroed: list[int] = []
        pins: dict[int, Fraction] = {}
        for part in parts:
            sides = [s.strip() for s in part.split("=")]
            if len(sides) < 2:
                raise ValueError(f"bad pattern item {part!r}")
            value = sides[-1]
            for name in sides[:-1]:
                if len(name) < 2 or name[0] not in "ab" or not name[1:].isdigit():
                    raise ValueError(f"bad variable {name!r} in pattern")
                i = int(name[1:])
                if name[0] == "a":
                    if to_fraction(value) != 0:
                        raise ValueError(f"direction coordinates can only be pinned to 0 ({part!r})")
                    zeroed.append(i)
                else:
                    pins[i] = to_fraction(value)
        return cls(tuple(zeroed), tuple(pins.items()))

    def check(self, n: int):
        for i in self.zeroed + tuple(i for i, _ in self.pins):
            if not 1 <= i <= n:
                raise ValueError(f"pattern {self.key} refers to coordinate {i} outside 1..{n}")


# pinned sub-branches that carry their own case label
DEFAULT_PINS = (
    ZeroPattern((1,), ((1, 1),)),
    ZeroPattern((1, 2), ((1, 1),)),
)

# case labels -> canonical branch keys; "iv" and "v" of Case 1 are
# written as products (a1a4 = 0, a1a5 = 0) but their equations set both to zero
CASE_LABELS = {
    "Case 1": "a1=0",
    "Case 1 i": "a1=0,b1=1",
    "Case 1 ii": "a1=a2=0",
    "Case 1 iii": "a1=a3=0",
    "Case 1 iv": "a1=a4=0",
    "Case 1 v": "a1=a5=0",
    "Case 2": "a1=a2=0",
    "Case 2 i": "a1=a2=0,b1=1",
    "Case 2 ii": "a1=a2=a3=0",
    "Case 2 iii": "a1=a2=a4=0",
    "Case 3": "a1=a2=a3=0",
    "Case 3 i": "a1=a2=a3=a4=0",
    "Case 3 ii": "a1=a2=a3=a5=0",
    "Case 4": "a1=a2=a3=a4=0",
}


def zero_patterns(n: int, pins: Iterable[ZeroPattern] = ()) -> list[ZeroPattern]:
    """All zero sets of size ``1..n-1`` followed by the pinned variants."""
    out = [ZeroPattern(z) for k in range(1, n) for z in combinations(range(1, n + 1), k)]
    return out + [z for z in pins if z not in out]


@dataclass(frozen=True)
class Branch:
    """One pattern of the line system after substitution.

    ``residuals`` maps ``k`` to the restricted ``c_k`` for every ``k >= 2``
    that does not vanish identically.  ``dof`` is ``None`` for a branch with
    no sampled solution having the required nonzero direction coordinates.
    """

    pattern: ZeroPattern
    b_expr: SqFreePoly
    a_expr: SqFreePoly
    residuals: tuple[tuple[int, SqFreePoly], ...]
    dof: int | None
    rank: int | None
    samples: int
    witness: AffineLine | None = field(default=None, compare=False)

    @property
    def key(self) -> str:
        return self.pattern.key

    @property
    def nonempty(self) -> bool:
        return self.dof is not None

    def to_json(self) -> dict:
        return {
            "pattern": self.key,
            "zeroed": list(self.pattern.zeroed),
            "pins": {f"b{i}": _frac(v) for i, v in self.pattern.pins},
            "value_equation": self.b_expr.to_json(),
            "slope_equation": self.a_expr.to_json(),
            "residuals": [{"power": k, "poly": r.to_json()} for k, r in self.residuals],
            "dof": self.dof,
            "jacobian_rank": self.rank,
            "accepted_samples": self.samples,
            "witness": None if self.witness is None else self.witness.to_json(),
        }


def _restriction(n: int, pattern: ZeroPattern) -> dict[int, Fraction]:
    fix = {i: Fraction(0) for i in pattern.zeroed}
    fix.update({n + i: v for i, v in pattern.pins})
    return fix


def branch_equations(p: SqFreePoly, pattern: ZeroPattern):
    """``(c_0, c_1, residuals)`` restricted to the pattern (variables kept)."""
    pattern.check(p.n)
    fix = _restriction(p.n, pattern)
    c = [ck.restrict(fix) for ck in coefficient_system(p)]
    residuals = tuple((k, ck) for k, ck in enumerate(c) if k >= 2 and not ck.is_zero())
    return c[0], c[1], residuals


def _np_eval(poly: SqFreePoly, x: np.ndarray) -> np.ndarray:
    out = np.zeros(x.shape[0])
    for mask, coeff in poly.terms.items():
        col = np.full(x.shape[0], float(coeff))
        for i in range(poly.n):
            if mask >> i & 1:
                col = col * x[:, i]
        out += col
    return out


def _constraint_rows(p: SqFreePoly, pattern: ZeroPattern, c0, c1, residuals):
    """Active constraints in ``2n + 2`` unknowns: ``a_1..a_n, b_1..b_n, a_{n+1}, b_{n+1}``."""
    n = p.n
    m = 2 * n + 2
    names = _names(n) + [f"a{n + 1}", f"b{n + 1}"]

    def lift(q: SqFreePoly) -> SqFreePoly:
        return SqFreePoly(m, q.terms, names)

    cons = [SqFreePoly.variable(m, i, names) for i in pattern.zeroed]
    cons += [SqFreePoly.variable(m, n + i, names) - v for i, v in pattern.pins]
    cons += [lift(r) for _, r in residuals]
    cons.append(SqFreePoly.variable(m, 2 * n + 1, names) - lift(c1))
    cons.append(SqFreePoly.variable(m, 2 * n + 2, names) - lift(c0))
    return cons


def _jacobian_rank(cons: list[SqFreePoly], point: Sequence[Fraction]) -> int:
    m = len(point)
    grads = [[g.partial(j) for j in range(1, m + 1)] for g in cons]
    return rank([[d.evaluate(point) for d in row] for row in grads])


def _sample_solutions(p: SqFreePoly, pattern: ZeroPattern, residuals, rng: np.random.Generator,
                      draws: int, wanted: int) -> list[tuple[Fraction, ...]]:
    """Grid points ``(a, b)`` in ``2n`` unknowns satisfying the branch exactly."""
    n = p.n
    free = [i for i in range(1, n + 1) if i not in pattern.zeroed]
    pins = dict(pattern.pins)
    a_grid = np.array([float(x) for x in DIRECTION_GRID])
    b_grid = np.array([float(x) for x in BASE_GRID])
    ia = rng.integers(0, len(a_grid), size=(draws, n))
    ib = rng.integers(0, len(b_grid), size=(draws, n))
    x = np.concatenate([a_grid[ia], b_grid[ib]], axis=1)
    for i in pattern.zeroed:
        x[:, i - 1] = 0.0
    for i, v in pins.items():
        x[:, n + i - 1] = float(v)
    ok = np.ones(draws, dtype=bool)
    for _, r in residuals:
        ok &= np.abs(_np_eval(r, x)) < 1e-9
    found: list[tuple[Fraction, ...]] = []
    seen = set()
    for row in np.flatnonzero(ok):
        a = [Fraction(0) if i + 1 in pattern.zeroed else DIRECTION_GRID[ia[row, i]] for i in range(n)]
        b = [pins.get(i + 1, BASE_GRID[ib[row, i]]) for i in range(n)]
        point = tuple(a + b)
        if point in seen:
            continue
        seen.add(point)
        if all(r.evaluate(point) == 0 for _, r in residuals):
            found.append(point)
            if len(found) >= wanted:
                break
    assert all(point[i - 1] != 0 for point in found for i in free)
    return found


def branch_for(p: SqFreePoly, pattern: ZeroPattern, *, seed: int = 0, draws: int = 200_000,
               wanted: int = 20) -> Branch:
    """Analyse one pattern: residual equations, sampled solutions and dof.

    ``dof`` is ``2n + 2`` minus the largest exact Jacobian rank of the active
    constraints (zero and pin equations, residuals and the two defining
    equations for ``a_{n+1}`` and ``b_{n+1}``) over up to ``wanted`` sampled
    solutions.  Taking the largest rank skips singular sample points.
    """
    n = p.n
    c0, c1, residuals = branch_equations(p, pattern)
    rng = np.random.default_rng(np.random.SeedSequence([seed, *pattern.zeroed, 0, *[i for i, _ in pattern.pins]]))
    points = _sample_solutions(p, pattern, residuals, rng, draws, wanted)
    if not points:
        return Branch(pattern, c0, c1, residuals, None, None, 0)
    cons = _constraint_rows(p, pattern, c0, c1, residuals)
    best, witness = -1, None
    for pt in points:
        full = pt + (c1.evaluate(pt), c0.evaluate(pt))
        r = _jacobian_rank(cons, full)
        if r > best:
            best, witness = r, pt
    line = AffineLine(witness[:n] + (c1.evaluate(witness),), witness[n:] + (c0.evaluate(witness),))
    return Branch(pattern, c0, c1, residuals, 2 * n + 2 - best, best, len(points), line)


def enumerate_branches(p: SqFreePoly | None = None, pins: Iterable[ZeroPattern] = DEFAULT_PINS, *,
                       seed: int = 0, draws: int = 200_000, wanted: int = 20) -> list[Branch]:
    """Every zero pattern of the line system with residuals and dof, in canonical order."""
    p = bridge_polynomial() if p is None else p
    return [branch_for(p, z, seed=seed, draws=draws, wanted=wanted) for z in zero_patterns(p.n, pins)]


def solve_directions(p: SqFreePoly, b: Sequence, pattern: ZeroPattern, *,
                     grid: Sequence = DIRECTION_GRID, limit: int | None = None) -> list[AffineLine]:
    """Lines through ``(b, p(b))`` whose direction has exactly the pattern's zeros.

    Free direction coordinates range over ``grid``; a candidate is kept when
    every residual vanishes exactly.  An empty result means no grid direction
    works, which includes the case where the residuals force ``a = 0``.
    """
    n = p.n
    b = [to_fraction(x) for x in b]
    if len(b) != n:
        raise ValueError(f"base point has {len(b)} coordinates, expected {n}")
    pattern.check(n)
    if not pattern.zeroed and n > 1:
        raise ValueError("the top coefficient a_1...a_n forces at least one zero direction coordinate")
    for i, v in pattern.pins:
        if b[i - 1] != v:
            raise ValueError(f"base point has b{i} = {b[i - 1]}, pattern requires {v}")
    c = coefficient_system(p)
    fix = {n + i + 1: b[i] for i in range(n)}
    fix.update({i: Fraction(0) for i in pattern.zeroed})
    c = [ck.restrict(fix) for ck in c]
    free = [i for i in range(1, n + 1) if i not in pattern.zeroed]
    grid = [to_fraction(g) for g in grid]
    out = []
    for values in product(grid, repeat=len(free)):
        a = [Fraction(0)] * n
        for i, v in zip(free, values):
            a[i - 1] = v
        point = a + b
        if any(ck.evaluate(point) for ck in c[2:]):
            continue
        line = AffineLine(tuple(a) + (c[1].evaluate(point),), tuple(b) + (c[0].evaluate(point),))
        if not verify_line(p, line):
            raise AssertionError(f"line {line} fails verification")
        out.append(line)
        if limit is not None and len(out) >= limit:
            break
    return out


# ---------------------------------------------------------------- probability windows

@dataclass(frozen=True)
class Window:
    """Closed interval of ``t``; ``None`` endpoints are infinite."""

    lo: Fraction | None
    hi: Fraction | None

    def __contains__(self, t) -> bool:
        t = to_fraction(t)
        return (self.lo is None or self.lo <= t) and (self.hi is None or t <= self.hi)

    def midpoint(self) -> Fraction:
        if self.lo is not None and self.hi is not None:
            return (self.lo + self.hi) / 2
        if self.lo is not None:
            return self.lo + 1
        if self.hi is not None:
            return self.hi - 1
        return Fraction(0)

    def __str__(self) -> str:
        lo = "-inf" if self.lo is None else _frac(self.lo)
        hi = "inf" if self.hi is None else _frac(self.hi)
        return f"[{lo}, {hi}]"

    def to_json(self) -> dict:
        return {"lo": None if self.lo is None else _frac(self.lo), "hi": None if self.hi is None else _frac(self.hi)}


def probability_window(line: AffineLine) -> Window | None:
    """Values of ``t`` for which every coordinate ``a_i t + b_i`` lies in ``[0, 1]``.

    Returns ``None`` when no such ``t`` exists.
    """
    lo: Fraction | None = None
    hi: Fraction | None = None
    for a, b in zip(line.a, line.b):
        if a == 0:
            if not 0 <= b <= 1:
                return None
            continue
        ends = sorted((-b / a, (1 - b) / a))
        lo = ends[0] if lo is None else max(lo, ends[0])
        hi = ends[1] if hi is None else min(hi, ends[1])
    if lo is not None and hi is not None and lo > hi:
        return None
    return Window(lo, hi)


# ---------------------------------------------------------------- report

def plausibility_report(branches: Sequence[Branch]) -> dict:
    """Rank branches by dof (descending, ties by pattern) and mark the maxima.

    Branches without sampled solutions are listed last with ``dof = None``.
    """
    filled = sorted((b for b in branches if b.nonempty), key=lambda b: (-b.dof, b.pattern))
    empty = sorted((b for b in branches if not b.nonempty), key=lambda b: b.pattern)
    max_dof = filled[0].dof if filled else None
    min_dof = filled[-1].dof if filled else None
    labels: dict[str, list[str]] = {}
    for label, key in CASE_LABELS.items():
        labels.setdefault(key, []).append(label)
    rows = [
        {
            "pattern": b.key,
            "dof": b.dof,
            "maximal": b.nonempty and b.dof == max_dof,
            "labels": labels.get(b.key, []),
        }
        for b in filled + empty
    ]
    return {"max_dof": max_dof, "min_dof_nonempty": min_dof, "branches": rows}
