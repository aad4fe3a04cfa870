"""Exact polynomial algebra over the rationals.

Two polynomial types live here:

* :class:`SqFreePoly` -- square-free (multilinear) polynomials in indexed
  variables ``1..n``.  A monomial is stored as a bitmask over the variables,
  so square-freeness holds by construction.
* :class:`DensePoly` -- general polynomials with integer exponent vectors,
  used for the results of identifying variables (diagonal restrictions) and
  for univariate root work.

All coefficients are :class:`fractions.Fraction`; nothing in here touches
floating point.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

__all__ = [
    "SqFreePoly",
    "DensePoly",
    "to_fraction",
    "mul_idempotent",
    "evaluate",
    "partial",
    "substitute_pattern",
]


def to_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected on purpose: they would silently break exactness.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        return Fraction(int(value))
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected an exact rational, got {type(value).__name__}: {value!r}")


def _mask_vars(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _vars_mask(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << (i - 1)
    return mask


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _join_terms(pieces: list[tuple[Fraction, str]]) -> str:
    """Render ``[(coeff, monomial_text), ...]`` as ``a*X - b*Y + ...``."""
    if not pieces:
        return "0"
    out = []
    for k, (c, mono) in enumerate(pieces):
        mag = abs(c)
        if mono:
            body = mono if mag == 1 else f"{_format_coeff(mag)}*{mono}"
        else:
            body = _format_coeff(mag)
        if k == 0:
            out.append(f"-{body}" if c < 0 else body)
        else:
            out.append(f" - {body}" if c < 0 else f" + {body}")
    return "".join(out)


_TERM_RE = re.compile(r"\s*([+-])?\s*([^+-]+)")


def _split_terms(text: str) -> list[tuple[int, str]]:
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial text")
    pos = 0
    out = []
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot parse polynomial text near {text[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        out.append((sign, m.group(2).strip()))
        pos = m.end()
    return out


class SqFreePoly:
    """Multilinear polynomial with exact rational coefficients.

    Parameters
    ----------
    n : int
        Number of variables; variables are indexed ``1..n``.
    terms : mapping of int to rational, optional
        Bitmask (bit ``i-1`` set means variable ``i`` occurs) to coefficient.
        Zero coefficients are dropped.
    names : sequence of str, optional
        Display names for the variables.  Defaults to ``R1..Rn``.  Names do
        not take part in equality.
    """

    __slots__ = ("n", "terms", "names")

    def __init__(self, n: int, terms: Mapping[int, object] | None = None, names: Sequence[str] | None = None):
        if n < 0:
            raise ValueError("variable count must be non-negative")
        self.n = n
        limit = 1 << n
        clean: dict[int, Fraction] = {}
        for mask, c in (terms or {}).items():
            if mask < 0 or mask >= limit:
                raise ValueError(f"monomial mask {mask} uses variables beyond n={n}")
            c = to_fraction(c)
            if c:
                clean[mask] = c
        self.terms = clean
        if names is None:
            names = tuple(f"R{i}" for i in range(1, n + 1))
        elif len(names) != n:
            raise ValueError(f"expected {n} variable names, got {len(names)}")
        self.names = tuple(names)

    # construction helpers
    @classmethod
    def constant(cls, n: int, c=1, names=None) -> SqFreePoly:
        return cls(n, {0: c}, names)

    @classmethod
    def variable(cls, n: int, i: int, names=None) -> SqFreePoly:
        if not 1 <= i <= n:
            raise IndexError(f"variable index {i} out of range 1..{n}")
        return cls(n, {1 << (i - 1): 1}, names)

    @classmethod
    def monomial(cls, n: int, indices: Iterable[int], coeff=1, names=None) -> SqFreePoly:
        indices = list(indices)
        if len(set(indices)) != len(indices):
            raise ValueError("repeated variable in a square-free monomial")
        for i in indices:
            if not 1 <= i <= n:
                raise IndexError(f"variable index {i} out of range 1..{n}")
        return cls(n, {_vars_mask(indices): coeff}, names)

    def _like(self, terms) -> SqFreePoly:
        return SqFreePoly(self.n, terms, self.names)

    def _coerce(self, other) -> SqFreePoly:
        if isinstance(other, SqFreePoly):
            if other.n != self.n:
                raise ValueError(f"variable-count mismatch: {self.n} vs {other.n}")
            return other
        return SqFreePoly(self.n, {0: to_fraction(other)}, self.names)

    # ring operations
    def __add__(self, other) -> SqFreePoly:
        other = self._coerce(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return self._like(terms)

    __radd__ = __add__

    def __neg__(self) -> SqFreePoly:
        return self._like({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> SqFreePoly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> SqFreePoly:
        return self._coerce(other) - self

    def __mul__(self, other) -> SqFreePoly:
        """Ordinary product; fails if a product monomial would repeat a variable."""
        other = self._coerce(other)
        terms: dict[int, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                if m1 & m2:
                    raise ValueError(
                        "ordinary product is not square-free; use mul_idempotent for Boolean reduction"
                    )
                m = m1 | m2
                terms[m] = terms.get(m, 0) + c1 * c2
        return self._like(terms)

    __rmul__ = __mul__

    def mul_idempotent(self, other) -> SqFreePoly:
        """Product under the Boolean rule ``x_i**2 -> x_i``."""
        other = self._coerce(other)
        terms: dict[int, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 | m2
                terms[m] = terms.get(m, 0) + c1 * c2
        return self._like(terms)

    # comparison and inspection
    def __eq__(self, other) -> bool:
        if isinstance(other, SqFreePoly):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == ({0: Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"SqFreePoly({self.n}, {self.to_text()!r})"

    def __str__(self) -> str:
        return self.to_text()

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((m.bit_count() for m in self.terms), default=-1)

    def coeff(self, indices: Iterable[int]) -> Fraction:
        return self.terms.get(_vars_mask(indices), Fraction(0))

    def support(self) -> int:
        """Bitmask of variables that actually occur."""
        out = 0
        for m in self.terms:
            out |= m
        return out

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms in canonical order: total degree, then variable tuple."""
        items = [(_mask_vars(m), c) for m, c in self.terms.items()]
        items.sort(key=lambda t: (len(t[0]), t[0]))
        return items

    # calculus and evaluation
    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.n:
            raise ValueError(f"point has length {len(point)}, expected {self.n}")
        vals = [to_fraction(v) for v in point]
        total = Fraction(0)
        for m, c in self.terms.items():
            prod = c
            i = 0
            while m:
                if m & 1:
                    prod *= vals[i]
                    if not prod:
                        break
                m >>= 1
                i += 1
            total += prod
        return total

    def partial(self, i: int) -> SqFreePoly:
        if not 1 <= i <= self.n:
            raise IndexError(f"variable index {i} out of range 1..{self.n}")
        bit = 1 << (i - 1)
        return self._like({m & ~bit: c for m, c in self.terms.items() if m & bit})

    def restrict(self, assignment: Mapping[int, object]) -> SqFreePoly:
        """Fix some variables to rational values; the variable count is kept."""
        fixed = {}
        for i, v in assignment.items():
            if not 1 <= i <= self.n:
                raise IndexError(f"variable index {i} out of range 1..{self.n}")
            fixed[1 << (i - 1)] = to_fraction(v)
        fixed_mask = _vars_mask(assignment)
        terms: dict[int, Fraction] = {}
        for m, c in self.terms.items():
            hit = m & fixed_mask
            if hit:
                for bit, v in fixed.items():
                    if hit & bit:
                        c *= v
                if not c:
                    continue
            key = m & ~fixed_mask
            terms[key] = terms.get(key, 0) + c
        return self._like(terms)

    def compose(self, images: Sequence[DensePoly]) -> DensePoly:
        """Substitute a DensePoly for every variable (all over the same variables)."""
        if len(images) != self.n:
            raise ValueError(f"expected {self.n} images, got {len(images)}")
        if not images:
            raise ValueError("compose needs at least one image to fix the target variables")
        vars_ = images[0].vars
        if any(img.vars != vars_ for img in images):
            raise ValueError("all images must be over the same variables")
        result = DensePoly.zero(vars_)
        for m, c in self.terms.items():
            term = DensePoly.constant(vars_, c)
            for i in _mask_vars(m):
                term = term * images[i - 1]
            result = result + term
        return result

    def substitute_pattern(self, pattern: Mapping[int, int] | Sequence[int], var_names: Sequence[str] | None = None) -> DensePoly:
        """Identify variables: component ``i`` becomes target variable ``pattern[i]``.

        ``pattern`` is either a mapping ``{component: target}`` or a sequence
        whose ``k``-th entry is the target of component ``k+1``.  Targets are
        ``1..k``.
        """
        if not isinstance(pattern, Mapping):
            pattern = {i + 1: t for i, t in enumerate(pattern)}
        missing = [i for i in range(1, self.n + 1) if i not in pattern]
        if missing:
            raise ValueError(f"pattern does not assign variables {missing}")
        k = max(pattern.values(), default=0)
        if sorted(set(pattern.values())) != list(range(1, k + 1)):
            raise ValueError("pattern targets must be exactly 1..k")
        if var_names is None:
            var_names = _default_targets(k)
        terms: dict[tuple[int, ...], Fraction] = {}
        for m, c in self.terms.items():
            exps = [0] * k
            for i in _mask_vars(m):
                exps[pattern[i] - 1] += 1
            key = tuple(exps)
            terms[key] = terms.get(key, 0) + c
        return DensePoly(var_names, terms)

    # serialization
    def to_text(self) -> str:
        pieces = [(c, "*".join(self.names[i - 1] for i in vs)) for vs, c in self.sorted_terms()]
        return _join_terms(pieces)

    @classmethod
    def parse(cls, text: str, n: int, names: Sequence[str] | None = None) -> SqFreePoly:
        """Inverse of :meth:`to_text`."""
        if names is None:
            names = tuple(f"R{i}" for i in range(1, n + 1))
        index = {name: i + 1 for i, name in enumerate(names)}
        if text.strip() == "0":
            return cls(n, {}, names)
        terms: dict[int, Fraction] = {}
        for sign, body in _split_terms(text):
            coeff = Fraction(sign)
            mask = 0
            for factor in body.split("*"):
                factor = factor.strip()
                if factor in index:
                    bit = 1 << (index[factor] - 1)
                    if mask & bit:
                        raise ValueError(f"variable {factor} repeated in {body!r}")
                    mask |= bit
                else:
                    coeff *= Fraction(factor)
            terms[mask] = terms.get(mask, 0) + coeff
        return cls(n, terms, names)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "names": list(self.names),
            "terms": [{"coeff": _format_coeff(c), "vars": list(vs)} for vs, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> SqFreePoly:
        n = int(data["n"])
        terms: dict[int, Fraction] = {}
        for t in data["terms"]:
            vs = t["vars"]
            if len(set(vs)) != len(vs):
                raise ValueError(f"repeated variable in term {t!r}")
            mask = _vars_mask(vs)
            terms[mask] = terms.get(mask, 0) + Fraction(t["coeff"])
        return cls(n, terms, data.get("names"))


def _default_targets(k: int) -> tuple[str, ...]:
    base = ("x", "y", "z", "w", "v")
    if k <= len(base):
        return base[:k]
    return tuple(f"x{i}" for i in range(1, k + 1))


class DensePoly:
    """Polynomial with arbitrary non-negative integer exponents.

    ``terms`` maps exponent tuples (one entry per variable in ``vars``) to
    rational coefficients.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, vars: Sequence[str], terms: Mapping[tuple[int, ...], object] | None = None):
        self.vars = tuple(vars)
        nv = len(self.vars)
        clean: dict[tuple[int, ...], Fraction] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nv:
                raise ValueError(f"exponent vector {exps} does not match {nv} variables")
            if any(e < 0 for e in exps):
                raise ValueError("negative exponent")
            c = to_fraction(c)
            if c:
                clean[exps] = clean.get(exps, 0) + c
                if not clean[exps]:
                    del clean[exps]
        self.terms = clean

    @classmethod
    def zero(cls, vars: Sequence[str]) -> DensePoly:
        return cls(vars)

    @classmethod
    def constant(cls, vars: Sequence[str], c) -> DensePoly:
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def variable(cls, vars: Sequence[str], name: str) -> DensePoly:
        vars = tuple(vars)
        exps = tuple(1 if v == name else 0 for v in vars)
        if sum(exps) != 1:
            raise ValueError(f"unknown variable {name!r}")
        return cls(vars, {exps: 1})

    @classmethod
    def from_coeffs(cls, coeffs: Sequence, var: str = "x") -> DensePoly:
        """Univariate polynomial from coefficients, constant term first."""
        return cls((var,), {(k,): c for k, c in enumerate(coeffs)})

    def coeffs(self) -> list[Fraction]:
        """Univariate coefficient list, constant term first (``[]`` for zero)."""
        if len(self.vars) != 1:
            raise ValueError("coeffs() needs a univariate polynomial")
        deg = self.degree()
        out = [Fraction(0)] * (deg + 1)
        for (e,), c in self.terms.items():
            out[e] = c
        return out

    def _coerce(self, other) -> DensePoly:
        if isinstance(other, DensePoly):
            if other.vars != self.vars:
                raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")
            return other
        return DensePoly.constant(self.vars, to_fraction(other))

    def __add__(self, other) -> DensePoly:
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return DensePoly(self.vars, terms)

    __radd__ = __add__

    def __neg__(self) -> DensePoly:
        return DensePoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> DensePoly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> DensePoly:
        return self._coerce(other) - self

    def __mul__(self, other) -> DensePoly:
        other = self._coerce(other)
        terms: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return DensePoly(self.vars, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> DensePoly:
        if k < 0:
            raise ValueError("negative power")
        out = DensePoly.constant(self.vars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, DensePoly):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == DensePoly.constant(self.vars, other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.vars, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"DensePoly({self.vars}, {self.to_text()!r})"

    def __str__(self) -> str:
        return self.to_text()

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]))

    def evaluate(self, point: Sequence | Mapping) -> Fraction:
        if isinstance(point, Mapping):
            point = [point[v] for v in self.vars]
        if len(point) != len(self.vars):
            raise ValueError(f"point has length {len(point)}, expected {len(self.vars)}")
        vals = [to_fraction(v) for v in point]
        total = Fraction(0)
        for exps, c in self.terms.items():
            for v, e in zip(vals, exps):
                if e:
                    c *= v**e
            total += c
        return total

    def __call__(self, *point) -> Fraction:
        return self.evaluate(point)

    def derivative(self, var: str | None = None) -> DensePoly:
        if var is None:
            if len(self.vars) != 1:
                raise ValueError("derivative variable required for multivariate polynomials")
            var = self.vars[0]
        k = self.vars.index(var)
        terms: dict[tuple[int, ...], Fraction] = {}
        for exps, c in self.terms.items():
            if exps[k]:
                e = list(exps)
                e[k] -= 1
                terms[tuple(e)] = c * exps[k]
        return DensePoly(self.vars, terms)

    def substitute(self, values: Mapping[str, object]) -> DensePoly:
        """Fix some variables to rationals, keeping the variable list."""
        idx = {self.vars.index(v): to_fraction(x) for v, x in values.items()}
        terms: dict[tuple[int, ...], Fraction] = {}
        for exps, c in self.terms.items():
            e = list(exps)
            for k, x in idx.items():
                if e[k]:
                    c *= x ** e[k]
                    e[k] = 0
            key = tuple(e)
            terms[key] = terms.get(key, 0) + c
        return DensePoly(self.vars, terms)

    def to_text(self) -> str:
        pieces = []
        for exps, c in self.sorted_terms():
            factors = []
            for v, e in zip(self.vars, exps):
                if e == 1:
                    factors.append(v)
                elif e > 1:
                    factors.append(f"{v}^{e}")
            pieces.append((c, "*".join(factors)))
        return _join_terms(pieces)

    @classmethod
    def parse(cls, text: str, vars: Sequence[str]) -> DensePoly:
        vars = tuple(vars)
        index = {v: i for i, v in enumerate(vars)}
        if text.strip() == "0":
            return cls(vars)
        terms: dict[tuple[int, ...], Fraction] = {}
        for sign, body in _split_terms(text):
            coeff = Fraction(sign)
            exps = [0] * len(vars)
            for factor in body.split("*"):
                factor = factor.strip()
                name, _, power = factor.partition("^")
                if name in index:
                    exps[index[name]] += int(power) if power else 1
                else:
                    coeff *= Fraction(factor)
            key = tuple(exps)
            terms[key] = terms.get(key, 0) + coeff
        return cls(vars, terms)

    def to_json(self) -> dict:
        return {
            "vars": list(self.vars),
            "terms": [{"coeff": _format_coeff(c), "exps": list(e)} for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> DensePoly:
        vars = tuple(data["vars"])
        terms: dict[tuple[int, ...], Fraction] = {}
        for t in data["terms"]:
            key = tuple(t["exps"])
            terms[key] = terms.get(key, 0) + Fraction(t["coeff"])
        return cls(vars, terms)


# module-level spellings of the core operations

def mul_idempotent(p: SqFreePoly, q: SqFreePoly) -> SqFreePoly:
    return p.mul_idempotent(q)


def evaluate(p: SqFreePoly, point: Sequence) -> Fraction:
    return p.evaluate(point)


def partial(p: SqFreePoly, i: int) -> SqFreePoly:
    return p.partial(i)


def substitute_pattern(p: SqFreePoly, pattern, var_names=None) -> DensePoly:
    return p.substitute_pattern(pattern, var_names)
