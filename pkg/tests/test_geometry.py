import random
from collections import Counter
from fractions import Fraction

import pytest

from helpers import rand_fraction
from relpoly.geometry import (
    DEGENERATE,
    INDEFINITE,
    DiagonalPattern,
    cube_extrema,
    curve_report,
    curve_samples,
    diagonal_count,
    diagonal_patterns,
    gradient,
    hessian,
    hessian_class,
    level_contains_variety,
    level_profile,
    samples_csv,
    verify_critical_family,
)
from relpoly.roots import RealRoot, real_roots
from relpoly.ruling import bridge_polynomial
from relpoly.sqfree_poly import DensePoly, SqFreePoly

P = bridge_polynomial()
U = DensePoly.from_coeffs([0, 0, 2, 1, -3, 1])
X_NAMES = ("x1", "x2", "x3", "x4", "x5")

# critical-point system as typed into a computer algebra session
GRADIENT_SYSTEM = [
    "x4 - x2*x3*x4 - x2*x4*x5 + x2*x3*x4*x5",
    "x5 + x3*x4 - x1*x3*x4 - x1*x4*x5 - x3*x4*x5 + x1*x3*x4*x5",
    "x2*x4 - x1*x2*x4 - x2*x4*x5 + x1*x2*x4*x5",
    "x1 + x2*x3 - x1*x2*x3 - x1*x2*x5 - x2*x3*x5 + x1*x2*x3*x5",
    "x2 - x1*x2*x4 - x2*x3*x4 + x1*x2*x3*x4",
]


def random_multilinear(rng, n):
    return SqFreePoly(n, {rng.randrange(1 << n): rng.randint(-5, 5) for _ in range(rng.randint(1, 8))})


# ---------------------------------------------------------------- gradient and critical points

def test_gradient_matches_critical_system():
    for g, text in zip(gradient(P), GRADIENT_SYSTEM):
        assert g == SqFreePoly.parse(text, 5, X_NAMES)


def test_gradient_trivial_cases():
    assert all(g.is_zero() for g in gradient(SqFreePoly.constant(3, 7)))
    r14 = SqFreePoly.monomial(5, [1, 4])
    assert gradient(r14)[0] == SqFreePoly.variable(5, 4)


def test_gradient_is_face_difference_at_random_points():
    rng = random.Random(3)
    grads = gradient(P)
    for _ in range(100):
        x = [rand_fraction(rng) for _ in range(5)]
        for i, g in enumerate(grads):
            hi, lo = list(x), list(x)
            hi[i], lo[i] = 1, 0
            assert g.evaluate(x) == P.evaluate(hi) - P.evaluate(lo)


def test_critical_family():
    assert verify_critical_family(P, (0, 0, "s", 0, 0))
    assert not verify_critical_family(P, (Fraction(1, 2),) * 5)
    assert verify_critical_family(SqFreePoly(5), ("s", "t", 0, 1, "s"))
    with pytest.raises(ValueError):
        verify_critical_family(P, (0, 0, "s"))


@pytest.mark.parametrize("s", [0, Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(3, 4), 1])
def test_saddle_along_critical_family(s):
    assert hessian_class(P, (0, 0, s, 0, 0)) == INDEFINITE


def test_saddle_for_every_s():
    # H[1][4] restricted to the family is the constant 1; with a zero diagonal
    # the principal minor on {1, 4} is -1, so the Hessian is indefinite for all s
    h14 = P.partial(1).partial(4).restrict({1: 0, 2: 0, 4: 0, 5: 0})
    assert h14 == SqFreePoly.constant(5, 1)


def test_hessian_entries():
    h = hessian(P, (0, 0, Fraction(1, 3), 0, 0))
    assert h[0][3] == h[3][0] == 1
    assert all(h[i][i] == 0 for i in range(5))


def test_hessian_simple_cases():
    assert hessian_class(SqFreePoly(3), (1, 2, 3)) == DEGENERATE
    assert hessian_class(SqFreePoly.monomial(2, [1, 2]), (0, 0)) == INDEFINITE


def test_multilinear_hessian_is_never_definite():
    rng = random.Random(5)
    seen = Counter()
    for _ in range(100):
        n = rng.randint(1, 6)
        p = random_multilinear(rng, n)
        cls = hessian_class(p, [rand_fraction(rng) for _ in range(n)])
        seen[cls] += 1
        assert cls in (INDEFINITE, DEGENERATE)
    assert seen[INDEFINITE] > 0


# ---------------------------------------------------------------- cube extrema

def test_cube_extrema_of_bridge():
    (lo, vlo), (hi, vhi) = cube_extrema(P)
    assert lo == 0 and P.evaluate(vlo) == 0
    assert hi == 1 and P.evaluate(vhi) == 1
    assert P.evaluate((1, 1, 1, 1, 1)) == 1


def test_constrained_minimum_witness():
    x1 = Fraction("0.0684438040345821397")
    x5 = Fraction("0.913400576368876061")
    witness = (x1, 0, 1, 0, x5)
    assert P.evaluate(witness) == 0
    # any x1 works once x2 = x4 = 0
    assert P.restrict({2: 0, 4: 0}).is_zero()


def test_cube_extrema_simple_and_guard():
    (lo, _), (hi, _) = cube_extrema(SqFreePoly.monomial(5, [1, 4]))
    assert (lo, hi) == (0, 1)
    with pytest.raises(ValueError):
        cube_extrema(SqFreePoly(21))


# ---------------------------------------------------------------- diagonal patterns

def test_diagonal_counts():
    assert [len(diagonal_patterns(5, k)) for k in range(1, 6)] == [1, 15, 50, 60, 120]
    assert [diagonal_count(5, k) for k in range(1, 6)] == [1, 15, 50, 60, 120]


def test_diagonal_shapes():
    assert Counter(d.block_sizes for d in diagonal_patterns(5, 2)) == {(1, 4): 5, (2, 3): 10}
    assert Counter(d.block_sizes for d in diagonal_patterns(5, 3)) == {(1, 1, 3): 20, (1, 2, 2): 30}
    assert Counter(d.block_sizes for d in diagonal_patterns(5, 4)) == {(1, 1, 1, 2): 60}


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_diagonal_patterns_distinct_and_valid(n):
    for k in range(1, n + 1):
        pats = diagonal_patterns(n, k)
        assert len(set(pats)) == len(pats) == diagonal_count(n, k)
        for d in pats:
            assert sorted(set(d.assignment)) == list(range(1, k + 1))
            assert list(d.block_sizes) == sorted(d.block_sizes)


def test_diagonal_range_check():
    with pytest.raises(ValueError):
        diagonal_patterns(5, 0)
    with pytest.raises(ValueError):
        diagonal_patterns(5, 6)


def test_named_diagonals():
    assert DiagonalPattern((1,) * 5).apply(P) == U
    p_xy = DiagonalPattern.parse("1|2345", 5).apply(P)
    q_xy = DiagonalPattern.parse("12|345", 5).apply(P)
    assert p_xy == DensePoly.parse("x*y - 2*x*y^3 + x*y^4 + y^2 + y^3 - y^4", ("x", "y"))
    assert q_xy == DensePoly.parse("x^2*y^3 - 2*x^2*y^2 - x*y^3 + x*y^2 + 2*x*y", ("x", "y"))


def test_pattern_text_round_trip():
    for d in diagonal_patterns(5, 3):
        assert DiagonalPattern.parse(str(d), 5) == d
    with pytest.raises(ValueError):
        DiagonalPattern.parse("12|3", 5)
    with pytest.raises(ValueError):
        DiagonalPattern.parse("12|23|45", 5)


def test_diagonal_evaluation_agrees_with_lift():
    rng = random.Random(9)
    for k in range(1, 6):
        by_shape = {}
        for d in diagonal_patterns(5, k):
            by_shape.setdefault(d.block_sizes, []).append(d)
        for shape, pats in by_shape.items():
            for _ in range(50):
                d = rng.choice(pats)
                pt = [rand_fraction(rng) for _ in range(k)]
                assert d.apply(P).evaluate(pt) == P.evaluate(d.lift(pt))


# ---------------------------------------------------------------- level profiles

def test_critical_values():
    prof = level_profile(U, 0)
    assert prof.max_level == 1
    assert float(prof.min_level) == pytest.approx(-0.29570533651, abs=1e-9)
    assert prof.min_level.poly == (Fraction(32, 625), Fraction(-543, 3125), Fraction(-2742, 3125), 1)


@pytest.mark.parametrize("a, counts, case", [
    (Fraction(-1, 10), (1, 0, 2), "min y < a < 0"),
    (0, (1, 2, 2), "a = 0"),
    (Fraction(1, 2), (0, 0, 3), "0 < a < max y"),
    (1, (0, 0, 3), "a = max y"),
    (2, (0, 0, 1), "a > max y"),
    (-1, (1, 0, 0), "a < min y"),
])
def test_level_cases(a, counts, case):
    prof = level_profile(U, a)
    assert prof.counts == counts
    assert prof.case == case


def test_level_at_exact_minimum():
    min_y = level_profile(U, 0).min_level
    prof = level_profile(U, min_y)
    assert prof.case == "a = min y"
    assert prof.positive == 2
    (double,) = prof.double_roots
    assert double.multiplicity == 2
    assert float(double) == pytest.approx((7 + 129 ** 0.5) / 10, abs=1e-9)


def test_level_at_max_has_double_root_at_one():
    prof = level_profile(U, 1)
    assert [r.exact for r in prof.double_roots] == [1]


def test_level_profile_agrees_with_root_isolation():
    rng = random.Random(2)
    for _ in range(100):
        a = Fraction(rng.randint(-1000, 2000), 1000)
        shifted = U - DensePoly.constant(U.vars, a)
        assert level_profile(U, a).counts == real_roots(shifted).counts


@pytest.mark.parametrize("seed", range(15))
def test_level_profile_on_random_polynomials(seed):
    rng = random.Random(seed)
    u = DensePoly.from_coeffs([rng.randint(-4, 4) for _ in range(rng.randint(2, 6))] + [rng.choice([-1, 1, 2])])
    for a in [Fraction(rng.randint(-8, 8), 3) for _ in range(5)]:
        shifted = u - DensePoly.constant(u.vars, a)
        assert level_profile(u, a).counts == real_roots(shifted).counts


def test_level_profile_accepts_real_root_level():
    level = RealRoot.rational(Fraction(1, 2))
    assert level_profile(U, level).counts == (0, 0, 3)


# ---------------------------------------------------------------- curve

def test_curve_samples_exact():
    assert curve_samples(U, 3) == [(0, 0), (Fraction(1, 2), Fraction(15, 32)), (1, 1)]
    with pytest.raises(ValueError):
        curve_samples(U, 1)


def test_curve_shape():
    rep = curve_report(U, 11)
    assert rep.nondecreasing and rep.derivative_roots_open == 0
    assert rep.inflection_points >= 1 and rep.sigmoid_like


def test_constant_curve():
    c = DensePoly.constant(("x",), Fraction(2, 3))
    rep = curve_report(c, 5)
    assert {y for _, y in rep.samples} == {Fraction(2, 3)}
    assert rep.nondecreasing and rep.inflection_points == 0


def test_decreasing_curve_flagged():
    rep = curve_report(DensePoly.from_coeffs([1, -1]), 3)
    assert not rep.nondecreasing


def test_samples_csv():
    text = samples_csv(curve_samples(U, 3))
    assert text.splitlines() == ["x,y", "0,0", "1/2,15/32", "1,1"]
    assert samples_csv(curve_samples(U, 3), decimal=3).splitlines()[2] == "0.500,0.469"


# ---------------------------------------------------------------- level sets

@pytest.mark.parametrize("fix", [{1: 0, 2: 0}, {2: 0, 4: 0}, {1: 0, 4: 0, 5: 0}])
def test_zero_level_contains_varieties(fix):
    assert level_contains_variety(P, 0, fix)


def test_zero_level_rejects_single_hyperplane():
    assert not level_contains_variety(P, 0, {1: 0})
    rest = P.restrict({1: 0})
    assert rest == SqFreePoly.parse("R2*R5 + R2*R3*R4 - R2*R3*R4*R5", 5)


def test_unit_level_variety():
    assert level_contains_variety(P, 1, {1: 1, 4: 1})
    assert not level_contains_variety(P, 1, {1: 1})
