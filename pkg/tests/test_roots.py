import random
from fractions import Fraction

import pytest
import sympy as sp

from relpoly.roots import RealRoot, count_roots, poly_image, real_roots, squarefree_decomposition, sturm_sequence
from relpoly.sqfree_poly import DensePoly

U = [0, 0, 2, 1, -3, 1]  # 2x^2 + x^3 - 3x^4 + x^5
X = sp.Symbol("x")


def sym(coeffs):
    return sum(sp.Rational(Fraction(c).numerator, Fraction(c).denominator) * X**k for k, c in enumerate(coeffs))


def shift(coeffs, a):
    out = list(coeffs)
    out[0] = out[0] - a
    return out


def sympy_counts(coeffs):
    """(negative, zero, positive) real roots with multiplicity, by sympy."""
    neg = zero = pos = 0
    for r, m in sp.roots(sp.Poly(sym(coeffs), X), filter=None, multiple=False).items():
        if not r.is_real:
            continue
        if r == 0:
            zero += m
        elif r > 0:
            pos += m
        else:
            neg += m
    return neg, zero, pos


def sympy_counts_numeric(coeffs):
    poly = sp.Poly(sym(coeffs), X)
    neg = zero = pos = 0
    for r in sp.real_roots(poly):
        if r == 0:
            zero += 1
        elif r > 0:
            pos += 1
        else:
            neg += 1
    return neg, zero, pos


def test_level_zero_factorisation():
    prof = real_roots(U)
    assert prof.counts == (1, 2, 2)
    exact = {r.exact: r.multiplicity for r in prof if r.is_exact}
    assert exact == {0: 2, 2: 1}
    golden = (1 + 5 ** 0.5) / 2
    approx = sorted(float(r) for r in prof if not r.is_exact)
    assert approx[0] == pytest.approx(1 - golden, abs=1e-9)
    assert approx[1] == pytest.approx(golden, abs=1e-9)


def test_level_one_double_root():
    prof = real_roots(shift(U, 1))
    assert prof.counts == (0, 0, 3)
    roots = list(prof)
    assert roots[0].exact == 1 and roots[0].multiplicity == 2
    assert float(roots[1]) > 1.8


def test_no_real_roots():
    assert real_roots([1, 0, 1]).total == 0


def test_zero_polynomial_rejected():
    with pytest.raises(ValueError):
        real_roots([0, 0])


def test_dense_input():
    u = DensePoly.from_coeffs(U)
    assert real_roots(u).counts == real_roots(U).counts


@pytest.mark.parametrize("seed", range(40))
def test_counts_match_sympy_on_random_products(seed):
    rng = random.Random(seed)
    poly = sp.Integer(1)
    for _ in range(rng.randint(1, 4)):
        r = sp.Rational(rng.randint(-6, 6), rng.randint(1, 3))
        poly *= (X - r) ** rng.randint(1, 3)
    if rng.random() < 0.5:
        poly *= X**2 - rng.randint(1, 5)
    if rng.random() < 0.5:
        poly *= X**2 + 1
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(sp.Poly(sp.expand(poly), X).all_coeffs())]
    assert real_roots(coeffs).counts == sympy_counts(coeffs)


@pytest.mark.parametrize("seed", range(40))
def test_distinct_counts_match_sympy_on_random_dense(seed):
    rng = random.Random(seed)
    coeffs = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(rng.randint(2, 8))]
    if coeffs[-1] == 0:
        coeffs[-1] = Fraction(1)
    prof = real_roots(coeffs)
    distinct = tuple(len([r for r in prof if r.sign() == s]) for s in (-1, 0, 1))
    assert distinct == sympy_counts_numeric(coeffs)


@pytest.mark.parametrize("seed", range(20))
def test_isolating_intervals_are_sound(seed):
    rng = random.Random(seed)
    coeffs = [Fraction(rng.randint(-9, 9)) for _ in range(rng.randint(3, 8))]
    coeffs[-1] = coeffs[-1] or Fraction(1)
    prof = real_roots(coeffs)
    roots = list(prof)
    for r in roots:
        if r.is_exact:
            assert sum(c * r.exact**k for k, c in enumerate(r.poly)) == 0
        else:
            lo = sum(c * r.lo**k for k, c in enumerate(r.poly))
            hi = sum(c * r.hi**k for k, c in enumerate(r.poly))
            assert lo * hi < 0
    for a, b in zip(roots, roots[1:]):
        assert a.hi < b.lo or (a.is_exact and a.exact < b.lo) or (b.is_exact and a.hi < b.exact)
    assert sum(r.multiplicity for r in roots) <= len(coeffs) - 1


def test_squarefree_decomposition():
    # (x - 1)^3 (x + 2)
    coeffs = [Fraction(int(c)) for c in reversed(sp.Poly(sp.expand((X - 1) ** 3 * (X + 2)), X).all_coeffs())]
    parts = squarefree_decomposition(coeffs)
    assert sorted((tuple(p), m) for p, m in parts) == [((-1, 1), 3), ((2, 1), 1)]


def test_sturm_count_intervals():
    seq = sturm_sequence([-2, 0, 1])
    assert count_roots([-2, 0, 1], seq=seq) == 2
    assert count_roots([-2, 0, 1], 0, 2, seq=seq) == 1
    assert count_roots([-2, 0, 1], Fraction(3, 2), 2, seq=seq) == 0


def test_domain_restriction_keeps_endpoint_roots():
    prof = real_roots([0, -1, 1], (0, 1))  # x^2 - x
    assert sorted(r.exact for r in prof) == [0, 1]


def test_compare_and_sign_of():
    sqrt2 = [r for r in real_roots([-2, 0, 1]) if r.sign() > 0][0]
    # sign of q(sqrt 2)
    assert sqrt2.sign_of([Fraction(-7, 5), 1]) == 1
    assert sqrt2.sign_of([Fraction(-3, 2), 1]) == -1
    assert sqrt2.sign_of([-2, 0, 1]) == 0
    assert sqrt2.compare(Fraction(141, 100)) == 1 and sqrt2.compare(Fraction(142, 100)) == -1
    other = [r for r in real_roots([-8, 0, 4]) if r.sign() > 0][0]
    assert sqrt2.compare(other) == 0 and sqrt2 == other
    cube = real_roots([-2, 0, 0, 1]).roots[0]
    assert cube < sqrt2 and not sqrt2 < cube
    assert RealRoot.rational(1) < sqrt2


def test_poly_image_matches_sympy():
    du = [0, 4, 3, -12, 5]  # u'(x)
    x0 = [r for r in real_roots(du) if float(r) > 1.5][0]
    m = poly_image(U, x0)
    exact = sp.nsimplify(sym(U).subs(X, (7 + sp.sqrt(129)) / 10))
    assert float(m) == pytest.approx(float(exact), abs=1e-12)
    assert tuple(m.poly) == (Fraction(32, 625), Fraction(-543, 3125), Fraction(-2742, 3125), 1)
    # the defining polynomial vanishes at the exact value
    assert sp.simplify(sym(m.poly).subs(X, exact)) == 0
