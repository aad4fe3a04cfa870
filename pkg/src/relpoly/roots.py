"""Exact real-root isolation for univariate rational polynomials.

Polynomials are handled internally as lists of Fractions, constant term
first.  The pipeline is the classical one: square-free decomposition (Yun),
Sturm sequences for counting distinct roots in an interval, and bisection
down to isolating intervals.  A bisection midpoint that happens to be a root
is recorded exactly, and so is any rational root that survives refinement
(found by a rational-root-theorem probe on the final interval).

:class:`RealRoot` is a real algebraic number: a square-free defining
polynomial plus an isolating interval.  It supports exact comparison and
exact sign evaluation of other polynomials at the root, which is what the
level-set analysis needs when the level itself is irrational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Sequence

from .sqfree_poly import DensePoly, to_fraction

__all__ = [
    "RealRoot",
    "RootProfile",
    "real_roots",
    "squarefree_decomposition",
    "sturm_sequence",
    "count_roots",
    "poly_image",
    "DEFAULT_WIDTH",
]

DEFAULT_WIDTH = Fraction(1, 1 << 30)

Poly = list  # list[Fraction], constant term first


# ---------------------------------------------------------------- arithmetic

def _trim(p: Sequence[Fraction]) -> Poly:
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def _deg(p: Poly) -> int:
    return len(p) - 1


def _eval(p: Poly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _deriv(p: Poly) -> Poly:
    return _trim([k * c for k, c in enumerate(p)][1:])


def _sub(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return _trim([(p[k] if k < len(p) else 0) - (q[k] if k < len(q) else 0) for k in range(n)])


def _mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _trim(out)


def _divmod(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    dq = _deg(q)
    lead = q[-1]
    quot = [Fraction(0)] * max(len(p) - dq, 0)
    while len(r) - 1 >= dq and r:
        k = len(r) - 1 - dq
        c = r[-1] / lead
        quot[k] = c
        for i, b in enumerate(q):
            r[i + k] -= c * b
        r = _trim(r)
    return _trim(quot), r


def _monic(p: Poly) -> Poly:
    return [c / p[-1] for c in p] if p else []


def _gcd(p: Poly, q: Poly) -> Poly:
    p, q = _trim(p), _trim(q)
    while q:
        p, q = q, _divmod(p, q)[1]
    return _monic(p)


def _compose(p: Poly, q: Poly) -> Poly:
    """``p(q(x))``."""
    out: Poly = []
    for c in reversed(p):
        out = _mul(out, q)
        out = _sub(out, [-c]) if out else _trim([c])
    return out


def _as_list(u) -> Poly:
    if isinstance(u, DensePoly):
        return u.coeffs()
    return _trim([to_fraction(c) for c in u])


# ---------------------------------------------------------------- structure

def squarefree_decomposition(p: Sequence) -> list[tuple[Poly, int]]:
    """Yun's algorithm: ``p = c * prod f_k**k`` with pairwise coprime square-free ``f_k``.

    Returns ``[(f_k, k), ...]`` for the non-constant factors, each monic.
    """
    p = _as_list(p)
    if not p:
        raise ValueError("zero polynomial has no square-free decomposition")
    out = []
    if _deg(p) == 0:
        return out
    dp = _deriv(p)
    a = _gcd(p, dp)
    b = _divmod(p, a)[0]
    c = _divmod(dp, a)[0]
    d = _sub(c, _deriv(b))
    k = 1
    while _deg(b) > 0:
        a = _gcd(b, d)
        if _deg(a) > 0:
            out.append((_monic(a), k))
        b = _divmod(b, a)[0]
        c = _divmod(d, a)[0]
        d = _sub(c, _deriv(b))
        k += 1
    return out


def sturm_sequence(p: Sequence) -> list[Poly]:
    p = _as_list(p)
    seq = [p, _deriv(p)]
    while seq[-1]:
        r = _divmod(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append([-c for c in r])
    return [s for s in seq if s]


def _variations(signs: list[int]) -> int:
    signs = [s for s in signs if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _signs_at(seq: list[Poly], x) -> list[int]:
    if x == "-inf":
        return [_sign(s[-1]) * (-1) ** _deg(s) for s in seq]
    if x == "+inf":
        return [_sign(s[-1]) for s in seq]
    return [_sign(_eval(s, x)) for s in seq]


def count_roots(p: Sequence, lo=None, hi=None, *, seq: list[Poly] | None = None) -> int:
    """Number of distinct real roots of ``p`` in ``(lo, hi]``.

    ``None`` bounds mean infinity.  Works for any non-zero ``p``; the Sturm
    chain of a non-square-free polynomial still counts distinct roots.
    """
    if seq is None:
        seq = sturm_sequence(p)
    a = "-inf" if lo is None else to_fraction(lo)
    b = "+inf" if hi is None else to_fraction(hi)
    return _variations(_signs_at(seq, a)) - _variations(_signs_at(seq, b))


def _roots_open(p: Poly, lo: Fraction, hi: Fraction) -> int:
    """Distinct roots of ``p`` in the open interval ``(lo, hi)``."""
    return count_roots(p, lo, hi) - (0 if _eval(p, hi) else 1)


def _cauchy_bound(p: Poly) -> Fraction:
    lead = abs(p[-1])
    return 1 + max((abs(c) / lead for c in p[:-1]), default=Fraction(0))


def _divisors(n: int, limit: int = 10**12) -> list[int] | None:
    n = abs(n)
    if n == 0 or n > limit:
        return None
    small = [d for d in range(1, isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def _integer_coeffs(p: Poly) -> list[int]:
    den = 1
    for c in p:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in p]
    g = 0
    for c in ints:
        g = gcd(g, c)
    return [c // g for c in ints] if g else ints


# ---------------------------------------------------------------- algebraic numbers

@dataclass(frozen=True, eq=False)
class RealRoot:
    """A real algebraic number with a multiplicity tag.

    ``poly`` is square-free with exactly one root in the open interval
    ``(lo, hi)``, or ``lo == hi`` and the root is that rational exactly.
    ``multiplicity`` is the multiplicity in whatever polynomial produced it.
    """

    poly: tuple[Fraction, ...]
    lo: Fraction
    hi: Fraction
    multiplicity: int = 1

    @classmethod
    def rational(cls, value, multiplicity: int = 1) -> RealRoot:
        v = to_fraction(value)
        return cls((-v, Fraction(1)), v, v, multiplicity)

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def exact(self) -> Fraction | None:
        return self.lo if self.is_exact else None

    def __float__(self) -> float:
        return float((self.lo + self.hi) / 2)

    def sign(self) -> int:
        if self.is_exact:
            return _sign(self.lo)
        if self.lo >= 0:
            return 1
        if self.hi <= 0:
            return -1
        # interval straddles zero; zero itself is not the root unless poly(0) == 0
        if not _eval(list(self.poly), Fraction(0)):
            return 0
        return self.refine_until(lambda r: r.lo >= 0 or r.hi <= 0).sign()

    def _bisect(self) -> RealRoot:
        p = list(self.poly)
        m = (self.lo + self.hi) / 2
        fm = _eval(p, m)
        if not fm:
            return RealRoot(self.poly, m, m, self.multiplicity)
        if _sign(_eval(p, self.lo)) * _sign(fm) < 0:
            return RealRoot(self.poly, self.lo, m, self.multiplicity)
        return RealRoot(self.poly, m, self.hi, self.multiplicity)

    def refine(self, width=DEFAULT_WIDTH) -> RealRoot:
        width = to_fraction(width)
        r = self
        while not r.is_exact and r.hi - r.lo > width:
            r = r._bisect()
        return r

    def refine_until(self, done) -> RealRoot:
        r = self
        for _ in range(4096):
            if r.is_exact or done(r):
                return r
            r = r._bisect()
        raise RuntimeError("interval refinement did not terminate")

    def sign_of(self, q) -> int:
        """Exact sign of polynomial ``q`` evaluated at this number."""
        q = _as_list(q)
        if not q:
            return 0
        if self.is_exact:
            return _sign(_eval(q, self.lo))
        g = _gcd(list(self.poly), q)
        if _deg(g) > 0 and _roots_open(g, self.lo, self.hi):
            return 0
        seq = sturm_sequence(q)

        def clear(r: RealRoot) -> bool:
            return bool(_eval(q, r.lo)) and bool(_eval(q, r.hi)) and count_roots(q, r.lo, r.hi, seq=seq) == 0

        r = self.refine_until(clear)
        return _sign(_eval(q, r.lo))

    def compare(self, other: RealRoot | Fraction | int) -> int:
        """Exact sign of ``self - other``."""
        if not isinstance(other, RealRoot):
            other = RealRoot.rational(other)
        if other.is_exact:
            return self.sign_of([-other.lo, Fraction(1)])
        if self.is_exact:
            return -other.sign_of([-self.lo, Fraction(1)])
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo < hi:
            # a common root inside both isolating intervals is both numbers at once
            g = _gcd(list(self.poly), list(other.poly))
            if _deg(g) > 0 and _roots_open(g, lo, hi):
                return 0
        a, b = self, other
        for _ in range(4096):
            if a.hi <= b.lo:
                return -1
            if b.hi <= a.lo:
                return 1
            a, b = a._bisect(), b._bisect()
            if a.is_exact or b.is_exact:
                return a.compare(b)
        raise RuntimeError("comparison did not terminate")

    def __eq__(self, other) -> bool:
        if isinstance(other, (RealRoot, Fraction, int)):
            return self.compare(other) == 0
        return NotImplemented

    def __lt__(self, other) -> bool:
        return self.compare(other) < 0

    def __le__(self, other) -> bool:
        return self.compare(other) <= 0

    def __gt__(self, other) -> bool:
        return self.compare(other) > 0

    def __ge__(self, other) -> bool:
        return self.compare(other) >= 0

    def describe(self) -> str:
        if self.is_exact:
            v = self.lo
            return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
        poly = " ".join(str(c) for c in self.poly)
        return f"~{float(self):.12g} (root of [{poly}] near ({float(self.lo):.6g}, {float(self.hi):.6g}))"

    def to_json(self) -> dict:
        out = {"multiplicity": self.multiplicity, "approx": float(self)}
        if self.is_exact:
            out["exact"] = str(self.lo)
        else:
            out["interval"] = [str(self.lo), str(self.hi)]
            out["poly"] = [str(c) for c in self.poly]
        return out


def _interval_eval(p: Poly, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Enclosure of ``p`` over ``[lo, hi]`` by interval Horner evaluation."""
    a = b = Fraction(0)
    for c in reversed(p):
        prods = (a * lo, a * hi, b * lo, b * hi)
        a, b = min(prods) + c, max(prods) + c
    return a, b


def _companion(f: Poly) -> list[list[Fraction]]:
    f = _monic(f)
    d = _deg(f)
    m = [[Fraction(0)] * d for _ in range(d)]
    for i in range(1, d):
        m[i][i - 1] = Fraction(1)
    for i in range(d):
        m[i][d - 1] = -f[i]
    return m


def _matmul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def _charpoly(m) -> Poly:
    """Faddeev-LeVerrier; returns det(x I - m), constant term first."""
    n = len(m)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        for i in range(n):
            mk[i][i] += coeffs[n - k + 1]
        mk = _matmul(m, mk)
        coeffs[n - k] = -sum(mk[i][i] for i in range(n)) / k
    return coeffs


def poly_image(u, alpha: RealRoot) -> RealRoot:
    """The algebraic number ``u(alpha)``, exactly.

    The defining polynomial is the characteristic polynomial of
    multiplication by ``u`` in ``Q[x]/(f)`` (``f`` the defining polynomial of
    ``alpha``), reduced to its square-free part; the isolating interval comes
    from interval evaluation of ``u`` on shrinking enclosures of ``alpha``.
    """
    u = _as_list(u)
    if alpha.is_exact:
        return RealRoot.rational(_eval(u, alpha.lo) if u else 0, alpha.multiplicity)
    f = list(alpha.poly)
    cm = _companion(f)
    d = len(cm)
    acc = [[Fraction(0)] * d for _ in range(d)]
    for c in reversed(u):
        acc = _matmul(acc, cm)
        for i in range(d):
            acc[i][i] += c
    v = _charpoly(acc)
    v_sf = _divmod(v, _gcd(v, _deriv(v)))[0] if _deg(v) > 0 else v
    v_sf = _monic(v_sf)
    seq = sturm_sequence(v_sf)
    r = alpha
    for _ in range(4096):
        lo, hi = _interval_eval(u, r.lo, r.hi)
        if lo == hi:
            return RealRoot.rational(lo, alpha.multiplicity)
        if _eval(v_sf, lo) and _eval(v_sf, hi) and count_roots(v_sf, lo, hi, seq=seq) == 1:
            return RealRoot(tuple(v_sf), lo, hi, alpha.multiplicity)
        if r.is_exact:
            return RealRoot.rational(_eval(u, r.lo), alpha.multiplicity)
        r = r._bisect()
    raise RuntimeError("could not isolate polynomial image")


# ---------------------------------------------------------------- isolation

@dataclass(frozen=True)
class RootProfile:
    """Real roots with multiplicities, sorted ascending."""

    roots: tuple[RealRoot, ...]

    @property
    def counts(self) -> tuple[int, int, int]:
        """(negative, zero, positive) root tallies counted with multiplicity."""
        neg = zero = pos = 0
        for r in self.roots:
            s = r.sign()
            if s < 0:
                neg += r.multiplicity
            elif s > 0:
                pos += r.multiplicity
            else:
                zero += r.multiplicity
        return neg, zero, pos

    @property
    def negative(self) -> int:
        return self.counts[0]

    @property
    def zero(self) -> int:
        return self.counts[1]

    @property
    def positive(self) -> int:
        return self.counts[2]

    @property
    def total(self) -> int:
        return sum(r.multiplicity for r in self.roots)

    def __len__(self) -> int:
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def to_json(self) -> dict:
        neg, zero, pos = self.counts
        return {
            "roots": [r.to_json() for r in self.roots],
            "counts": {"negative": neg, "zero": zero, "positive": pos},
        }


def _isolate(f: Poly, lo: Fraction, hi: Fraction, out: list):
    """Isolate the roots of square-free ``f`` in open ``(lo, hi)``; f(lo), f(hi) != 0."""
    n = count_roots(f, lo, hi)
    if n == 0:
        return
    if n == 1:
        out.append((f, lo, hi))
        return
    m = (lo + hi) / 2
    if not _eval(f, m):
        out.append(([-m, Fraction(1)], m, m))
        g = _divmod(f, [-m, Fraction(1)])[0]
        _isolate(g, lo, m, out)
        _isolate(g, m, hi, out)
        return
    _isolate(f, lo, m, out)
    _isolate(f, m, hi, out)


def _rational_probe(f: Poly, lo: Fraction, hi: Fraction) -> Fraction | None:
    """Rational root of ``f`` in ``(lo, hi)`` if the rational root theorem finds one."""
    ints = _integer_coeffs(f)
    qs = _divisors(ints[-1])
    if qs is None:
        return None
    for q in qs:
        p_lo = -((-lo * q).__floor__())
        p_hi = (hi * q).__floor__()
        if p_hi - p_lo > 64:
            continue
        for p in range(p_lo, p_hi + 1):
            x = Fraction(p, q)
            if lo < x < hi and not _eval(f, x):
                return x
    return None


def real_roots(u, domain: tuple | None = None, *, width=DEFAULT_WIDTH) -> RootProfile:
    """Isolate the real roots of a univariate polynomial, with multiplicity.

    Parameters
    ----------
    u : DensePoly or sequence of rationals (constant term first)
    domain : (lo, hi), optional
        Closed interval to restrict to; ``None`` means the whole real line.
    width : rational
        Isolating intervals are refined below this width.

    Returns
    -------
    RootProfile
        Roots sorted ascending.  Rational roots are exact, the rest carry an
        isolating interval for their square-free factor.
    """
    p = _as_list(u)
    if not p:
        raise ValueError("the zero polynomial has infinitely many roots")
    width = to_fraction(width)
    found: list[RealRoot] = []
    for factor, mult in squarefree_decomposition(p):
        bound = _cauchy_bound(factor)
        if domain is None:
            lo, hi = -bound, bound
        else:
            lo, hi = (to_fraction(domain[0]), to_fraction(domain[1]))
            if lo > hi:
                raise ValueError("empty domain")
        f = factor
        for end in sorted({lo, hi}):
            if not _eval(f, end):
                found.append(RealRoot.rational(end, mult))
                f = _divmod(f, [-end, Fraction(1)])[0]
        pieces: list = []
        if lo < hi:
            _isolate(f, lo, hi, pieces)
        for g, a, b in pieces:
            if a == b:
                found.append(RealRoot.rational(a, mult))
                continue
            r = RealRoot(tuple(_monic(g)), a, b, mult).refine(width)
            if not r.is_exact:
                x = _rational_probe(list(r.poly), r.lo, r.hi)
                if x is not None:
                    r = RealRoot.rational(x, mult)
            found.append(r)
    return RootProfile(tuple(_separate(found)))


def _separate(roots: list[RealRoot]) -> list[RealRoot]:
    """Refine until intervals from different factors are pairwise disjoint, then sort."""
    roots = list(roots)
    changed = True
    while changed:
        changed = False
        for i in range(len(roots)):
            for j in range(i + 1, len(roots)):
                a, b = roots[i], roots[j]
                if a.lo < b.hi and b.lo < a.hi or (a.is_exact and b.lo < a.lo < b.hi) or (b.is_exact and a.lo < b.lo < a.hi):
                    if not a.is_exact:
                        roots[i] = a._bisect()
                    if not b.is_exact:
                        roots[j] = b._bisect()
                    changed = True
    roots.sort(key=lambda r: (r.lo, r.hi))
    return roots
