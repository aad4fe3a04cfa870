"""Critical points, diagonal restrictions and level sets of reliability polynomials."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import factorial
from typing import Mapping, Sequence

from .linalg import inertia
from .roots import RealRoot, RootProfile, poly_image, real_roots, sturm_sequence, count_roots
from .sqfree_poly import DensePoly, SqFreePoly, to_fraction

__all__ = [
    "gradient",
    "hessian",
    "hessian_class",
    "verify_critical_family",
    "cube_extrema",
    "DiagonalPattern",
    "diagonal_patterns",
    "diagonal_count",
    "real_roots",
    "LevelProfile",
    "level_profile",
    "curve_samples",
    "CurveReport",
    "curve_report",
    "samples_csv",
    "level_contains_variety",
    "POSITIVE_DEFINITE",
    "NEGATIVE_DEFINITE",
    "INDEFINITE",
    "DEGENERATE",
]

POSITIVE_DEFINITE = "positive-definite"
NEGATIVE_DEFINITE = "negative-definite"
INDEFINITE = "indefinite"
DEGENERATE = "semidefinite/degenerate"

CUBE_LIMIT = 20


# ---------------------------------------------------------------- critical points

def gradient(p: SqFreePoly) -> list[SqFreePoly]:
    return [p.partial(i) for i in range(1, p.n + 1)]


def hessian(p: SqFreePoly, point: Sequence) -> list[list[Fraction]]:
    if len(point) != p.n:
        raise ValueError(f"point has length {len(point)}, expected {p.n}")
    grads = gradient(p)
    h = [[Fraction(0)] * p.n for _ in range(p.n)]
    for i in range(p.n):
        for j in range(i + 1, p.n):
            h[i][j] = h[j][i] = grads[i].partial(j + 1).evaluate(point)
    # multilinear: no variable appears squared, so the diagonal is zero
    return h


def hessian_class(p: SqFreePoly, point: Sequence) -> str:
    """Classify the Hessian at ``point`` by its exact inertia."""
    pos, neg, _ = inertia(hessian(p, point))
    if pos == p.n and p.n:
        return POSITIVE_DEFINITE
    if neg == p.n and p.n:
        return NEGATIVE_DEFINITE
    if pos and neg:
        return INDEFINITE
    return DEGENERATE


def _family_images(family: Sequence) -> list[DensePoly]:
    symbols = []
    for c in family:
        if isinstance(c, str):
            try:
                to_fraction(c)
            except (ValueError, ZeroDivisionError):
                if c not in symbols:
                    symbols.append(c)
    symbols = tuple(symbols) or ("s",)
    images = []
    for c in family:
        if isinstance(c, str) and c in symbols:
            images.append(DensePoly.variable(symbols, c))
        else:
            images.append(DensePoly.constant(symbols, to_fraction(c)))
    return images


def verify_critical_family(p: SqFreePoly, family: Sequence) -> bool:
    """True iff every gradient component vanishes identically on ``family``.

    ``family`` has one entry per variable: a rational, or a symbol name
    (e.g. ``"s"``) for a free parameter.  ``(0, 0, "s", 0, 0)`` is the line of
    points whose third coordinate is free.
    """
    if len(family) != p.n:
        raise ValueError(f"family has {len(family)} coordinates, expected {p.n}")
    if p.n == 0:
        return True
    images = _family_images(family)
    return all(g.compose(images).is_zero() for g in gradient(p))


def cube_extrema(p: SqFreePoly) -> tuple[tuple[Fraction, tuple[int, ...]], tuple[Fraction, tuple[int, ...]]]:
    """Exact min and max over ``[0, 1]**n`` with attaining vertices.

    A multilinear function is affine in each coordinate separately, so its
    extrema over the cube are attained at vertices.  Ties go to the first
    vertex in lexicographic order.
    """
    if p.n > CUBE_LIMIT:
        raise ValueError(f"vertex enumeration limited to n <= {CUBE_LIMIT} (got {p.n})")
    best_min = best_max = None
    for v in product((0, 1), repeat=p.n):
        val = p.evaluate(v)
        if best_min is None or val < best_min[0]:
            best_min = (val, v)
        if best_max is None or val > best_max[0]:
            best_max = (val, v)
    return best_min, best_max


# ---------------------------------------------------------------- diagonal restrictions

@dataclass(frozen=True)
class DiagonalPattern:
    """Assignment of components ``1..n`` to variable labels ``1..k``.

    ``assignment[i]`` is the label of component ``i + 1``.
    """

    assignment: tuple[int, ...]

    @property
    def k(self) -> int:
        return max(self.assignment, default=0)

    @property
    def block_sizes(self) -> tuple[int, ...]:
        return tuple(self.assignment.count(label) for label in range(1, self.k + 1))

    def blocks(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple(i + 1 for i, lab in enumerate(self.assignment) if lab == label)
            for label in range(1, self.k + 1)
        )

    def __str__(self) -> str:
        return "|".join("".join(str(i) for i in b) if max(b) < 10 else ",".join(map(str, b)) for b in self.blocks())

    @classmethod
    def parse(cls, text: str, n: int) -> DiagonalPattern:
        """Parse ``"1|2345"`` or ``"1,2|3,4,5"`` (blocks in label order)."""
        assignment = [0] * n
        for label, block in enumerate(text.split("|"), 1):
            items = block.split(",") if "," in block else list(block)
            for item in items:
                i = int(item)
                if not 1 <= i <= n or assignment[i - 1]:
                    raise ValueError(f"bad or repeated component {i} in pattern {text!r}")
                assignment[i - 1] = label
        if 0 in assignment:
            raise ValueError(f"pattern {text!r} does not cover all {n} components")
        return cls(tuple(assignment))

    def apply(self, p: SqFreePoly, var_names: Sequence[str] | None = None) -> DensePoly:
        return p.substitute_pattern(self.assignment, var_names)

    def lift(self, point: Sequence) -> tuple:
        """Point in component space from a point in label space."""
        return tuple(point[label - 1] for label in self.assignment)


def _ascending_compositions(n: int, k: int, smallest: int = 1):
    if k == 1:
        if n >= smallest:
            yield (n,)
        return
    for first in range(smallest, n // k + 1):
        for rest in _ascending_compositions(n - first, k - 1, first):
            yield (first,) + rest


def diagonal_patterns(n: int, k: int) -> list[DiagonalPattern]:
    """Surjections onto labels ``1..k`` whose block sizes do not decrease.

    This ordering convention gives 1, 15, 50, 60, 120 patterns for ``n = 5``.
    """
    if not 1 <= k <= n:
        raise ValueError(f"k must be in 1..{n}, got {k}")
    out = []
    for sizes in _ascending_compositions(n, k):
        for assignment in _assign(tuple(range(1, n + 1)), sizes):
            out.append(DiagonalPattern(assignment))
    out.sort(key=lambda d: (d.block_sizes, d.blocks()))
    return out


def _assign(components: tuple[int, ...], sizes: tuple[int, ...]):
    n = len(components)

    def rec(remaining: tuple[int, ...], label: int, acc: dict):
        if label > len(sizes):
            yield tuple(acc[c] for c in components)
            return
        for chosen in combinations(remaining, sizes[label - 1]):
            acc.update({c: label for c in chosen})
            left = tuple(c for c in remaining if c not in chosen)
            yield from rec(left, label + 1, acc)

    if sum(sizes) != n:
        return
    yield from rec(components, 1, {})


def diagonal_count(n: int, k: int) -> int:
    """Closed form of ``len(diagonal_patterns(n, k))``: multinomials over ascending sizes."""
    total = 0
    for sizes in _ascending_compositions(n, k):
        m = factorial(n)
        for s in sizes:
            m //= factorial(s)
        total += m
    return total


# ---------------------------------------------------------------- level profiles

_BELOW_MIN = "a < min y"
_AT_MIN = "a = min y"
_MIN_TO_ZERO = "min y < a < 0"
_AT_ZERO = "a = 0"
_ZERO_TO_MAX = "0 < a < max y"
_AT_MAX = "a = max y"
_ABOVE_MAX = "a > max y"


@dataclass(frozen=True)
class LevelProfile:
    """Root counts of ``u - a`` and where ``a`` sits among the extremal levels."""

    level: RealRoot
    negative: int
    zero: int
    positive: int
    case: str
    min_level: RealRoot | None
    max_level: RealRoot | None
    double_roots: tuple[RealRoot, ...]

    @property
    def counts(self) -> tuple[int, int, int]:
        return self.negative, self.zero, self.positive

    def to_json(self) -> dict:
        return {
            "level": self.level.to_json(),
            "counts": {"negative": self.negative, "zero": self.zero, "positive": self.positive},
            "case": self.case,
            "min_level": None if self.min_level is None else self.min_level.to_json(),
            "max_level": None if self.max_level is None else self.max_level.to_json(),
            "multiple_roots": [r.to_json() for r in self.double_roots],
        }


def _as_level(a) -> RealRoot:
    return a if isinstance(a, RealRoot) else RealRoot.rational(a)


def _poly_list(u) -> list[Fraction]:
    if isinstance(u, DensePoly):
        return u.coeffs()
    return [to_fraction(c) for c in u]


def critical_levels(u) -> list[tuple[RealRoot, RealRoot, str]]:
    """Critical points of ``u`` with their values and kind (min/max/flat)."""
    coeffs = _poly_list(u)
    d = [k * c for k, c in enumerate(coeffs)][1:]
    while d and not d[-1]:
        d.pop()
    if not d:
        return []
    crit = list(real_roots(d))
    values = [poly_image(coeffs, c) for c in crit]
    lead = coeffs[-1]
    deg = len(coeffs) - 1
    out = []
    for j, (c, v) in enumerate(zip(crit, values)):
        left = values[j - 1].compare(v) if j else -((-1) ** deg) * (1 if lead > 0 else -1)
        right = values[j + 1].compare(v) if j + 1 < len(values) else (1 if lead > 0 else -1)
        # left/right: sign of (neighbour value - this value), infinities via the leading term
        if left > 0 and right > 0:
            kind = "min"
        elif left < 0 and right < 0:
            kind = "max"
        else:
            kind = "flat"
        out.append((c, v, kind))
    return out


def level_profile(u, a) -> LevelProfile:
    """Count the real roots of ``u(x) = a`` by monotone pieces.

    ``a`` may be a rational or a :class:`RealRoot` (e.g. an exact critical
    value), so irrational levels are handled exactly.  Between consecutive
    breakpoints (critical points of ``u`` and ``0``) the polynomial is
    strictly monotone, so each piece holds a root iff ``a`` lies strictly
    between the piece's end values; a breakpoint at level ``a`` is a root
    whose multiplicity is one more than its multiplicity in ``u'``.

    The case label places ``a`` relative to ``min y`` (lowest local minimum
    value at a critical point ``x >= 0``), ``0`` and ``max y`` (highest local
    maximum value at a critical point ``x >= 0``).
    """
    coeffs = _poly_list(u)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    level = _as_level(a)
    if len(coeffs) <= 1:
        c = coeffs[0] if coeffs else Fraction(0)
        if level.compare(c) == 0:
            raise ValueError("constant polynomial equals the level everywhere")
        return LevelProfile(level, 0, 0, 0, "constant", None, None, ())
    crit = critical_levels(coeffs)
    zero = RealRoot.rational(0)
    points = [(c, v, c.multiplicity) for c, v, _ in crit]
    if not any(c.compare(zero) == 0 for c, _, _ in points):
        points.append((zero, RealRoot.rational(coeffs[0]), 0))
        points.sort(key=lambda t: float(t[0]))
        points = _sorted_exact(points)
    lead = 1 if coeffs[-1] > 0 else -1
    deg = len(coeffs) - 1
    # sign of u - a at each breakpoint, and at the two infinities
    signs = [v.compare(level) for _, v, _ in points]
    s_left = lead * (-1) ** deg
    s_right = lead
    neg = zer = pos = 0
    multiple = []

    def tally(where: int, m: int):
        nonlocal neg, zer, pos
        if where < 0:
            neg += m
        elif where > 0:
            pos += m
        else:
            zer += m

    for (c, _, mult), s in zip(points, signs):
        if s == 0:
            tally(c.sign(), mult + 1)
            if mult >= 1:
                multiple.append(RealRoot(c.poly, c.lo, c.hi, mult + 1))
    ext = [s_left] + signs + [s_right]
    locs = [None] + [c for c, _, _ in points] + [None]
    for j in range(len(ext) - 1):
        if ext[j] * ext[j + 1] < 0:
            right = locs[j + 1]
            left = locs[j]
            # piece lies left of 0 iff its right end is <= 0
            if right is not None and right.compare(zero) <= 0:
                tally(-1, 1)
            elif left is not None and left.compare(zero) >= 0:
                tally(1, 1)
            else:
                raise AssertionError("breakpoints must include 0")
    nonneg = [(v, kind) for (c, v, kind) in crit if c.compare(zero) >= 0]
    mins = [v for v, kind in nonneg if kind == "min"]
    maxs = [v for v, kind in nonneg if kind == "max"]
    min_level = _extreme(mins, -1)
    max_level = _extreme(maxs, 1)
    case = _classify(level, min_level, max_level)
    return LevelProfile(level, neg, zer, pos, case, min_level, max_level, tuple(multiple))


def _sorted_exact(points):
    out = []
    for pt in points:
        k = len(out)
        while k and out[k - 1][0].compare(pt[0]) > 0:
            k -= 1
        out.insert(k, pt)
    return out


def _extreme(values: list[RealRoot], direction: int) -> RealRoot | None:
    best = None
    for v in values:
        if best is None or v.compare(best) * direction > 0:
            best = v
    return best


def _classify(level: RealRoot, lo: RealRoot | None, hi: RealRoot | None) -> str:
    if lo is None or hi is None:
        return "unclassified"
    c_lo = level.compare(lo)
    if c_lo < 0:
        return _BELOW_MIN
    if c_lo == 0:
        return _AT_MIN
    c_zero = level.sign()
    if c_zero < 0:
        return _MIN_TO_ZERO
    if c_zero == 0:
        return _AT_ZERO
    c_hi = level.compare(hi)
    if c_hi < 0:
        return _ZERO_TO_MAX
    if c_hi == 0:
        return _AT_MAX
    return _ABOVE_MAX


# ---------------------------------------------------------------- curve shape

@dataclass(frozen=True)
class CurveReport:
    samples: tuple[tuple[Fraction, Fraction], ...]
    derivative_roots_open: int
    nondecreasing: bool
    inflection_points: int

    @property
    def sigmoid_like(self) -> bool:
        return self.nondecreasing and self.inflection_points > 0


def curve_samples(u: DensePoly, m: int, interval=(0, 1)) -> list[tuple[Fraction, Fraction]]:
    """``m`` equally spaced exact samples ``(x, u(x))`` over a closed interval."""
    if m < 2:
        raise ValueError("need at least two samples")
    lo, hi = (to_fraction(x) for x in interval)
    step = (hi - lo) / (m - 1)
    out = []
    for k in range(m):
        x = lo + k * step
        out.append((x, u.evaluate((x,))))
    return out


def _odd_roots_open(coeffs: list[Fraction], lo: Fraction, hi: Fraction) -> tuple[int, int]:
    """(distinct roots, odd-multiplicity roots) of a polynomial in open (lo, hi)."""
    if not any(coeffs):
        return 0, 0
    prof = real_roots(coeffs, (lo, hi))
    inside = [r for r in prof if r.compare(lo) > 0 and r.compare(hi) < 0]
    return len(inside), sum(1 for r in inside if r.multiplicity % 2)


def curve_report(u: DensePoly, m: int = 11, interval=(0, 1)) -> CurveReport:
    """Samples plus the exact shape checks: monotonicity and inflection.

    ``u`` is nondecreasing on the interval iff ``u'`` has no odd-multiplicity
    root inside and is non-negative at an interior point.  An inflection is
    an odd-multiplicity root of ``u''`` inside the interval.
    """
    lo, hi = (to_fraction(x) for x in interval)
    d1 = u.derivative()
    d2 = d1.derivative()
    c1 = d1.coeffs() if not d1.is_zero() else []
    c2 = d2.coeffs() if not d2.is_zero() else []
    n_roots, odd = _odd_roots_open(c1, lo, hi)
    if not c1:
        nondecreasing = True
    else:
        mid = (lo + hi) / 2
        # with no sign change inside, probe a point that is not a root
        probe = next(x for x in (mid, (lo + mid) / 2, (mid + hi) / 2, (3 * lo + mid) / 4) if d1.evaluate((x,)))
        nondecreasing = odd == 0 and d1.evaluate((probe,)) > 0
    _, inflections = _odd_roots_open(c2, lo, hi)
    return CurveReport(tuple(curve_samples(u, m, interval)), n_roots, nondecreasing, inflections)


def _render(x: Fraction, decimal: int | None) -> str:
    if decimal is not None:
        return f"{float(x):.{decimal}f}"
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def samples_csv(samples: Sequence[tuple[Fraction, Fraction]], decimal: int | None = None) -> str:
    """CSV with header ``x,y``; exact fractions unless ``decimal`` digits are requested."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "y"])
    for x, y in samples:
        w.writerow([_render(x, decimal), _render(y, decimal)])
    return buf.getvalue()


# ---------------------------------------------------------------- level sets

def level_contains_variety(p: SqFreePoly, c, constraints: Mapping[int, object]) -> bool:
    """Whether the linear variety ``{x_i = v_i}`` lies inside the level set ``p = c``."""
    return (p - to_fraction(c)).restrict(constraints).is_zero()
