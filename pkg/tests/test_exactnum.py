"""Tests for the exact scalar tower: intervals, algebraic reals, field
elements."""

import random
from fractions import Fraction

import pytest

from fractarith import poly
from fractarith.errors import DivByZeroInterval, DomainError, FractarithError
from fractarith.exactnum import (AlgebraicReal, FieldElement, Interval,
                                 IntervalUnion, fraction_pow_bounds,
                                 interval_op, rat_from_str, rat_to_str,
                                 refine, root_isolate, sign_at)

QSTAR = (1, -2, -1, 1)  # x^3 - x^2 - 2x + 1, constant first


def iv(lo, hi) -> Interval:
    return Interval(Fraction(lo), Fraction(hi))


# ---------------------------------------------------------------------------
# rational serialization
# ---------------------------------------------------------------------------

def test_rat_round_trip():
    for s in ("0", "2/3", "-7/4", "5", "-12"):
        assert rat_to_str(rat_from_str(s)) == s


def test_rat_parse_normalizes():
    assert rat_from_str("14490/94221") == Fraction(1610, 10469)
    assert rat_from_str("−2/4") == Fraction(-1, 2)


# ---------------------------------------------------------------------------
# interval operations
# ---------------------------------------------------------------------------

def test_interval_add_unit():
    assert interval_op("add", iv(0, 1), iv(0, 1)) == iv(0, 2)


def test_interval_div_cantor_block():
    # unit-scale block of the Cantor quotient
    assert interval_op("div", iv(Fraction(2, 3), 1), iv(Fraction(2, 3), 1)) == \
        iv(Fraction(2, 3), Fraction(3, 2))


def test_interval_mul_mixed_signs():
    assert interval_op("mul", iv(-1, 2), iv(3, 3)) == iv(-3, 6)


def test_interval_div_by_zero_interval():
    with pytest.raises(DivByZeroInterval):
        interval_op("div", iv(1, 2), iv(-1, 1))


def test_interval_pow_int():
    assert iv(-2, 3).pow_int(2) == iv(0, 9)
    assert iv(-2, -1).pow_int(2) == iv(1, 4)
    assert iv(-2, 3).pow_int(3) == iv(-8, 27)
    assert iv(2, 4).pow_int(-1) == iv(Fraction(1, 4), Fraction(1, 2))


def test_interval_pow_fractional_domain():
    with pytest.raises(DomainError):
        iv(0, 1).pow_rational(Fraction(1, 2))
    with pytest.raises(DomainError):
        iv(-1, 1).pow_rational(Fraction(1, 2))


def test_interval_pow_fractional_encloses():
    out = iv(2, 2).pow_rational(Fraction(1, 2))
    assert out.lo ** 2 <= 2 <= out.hi ** 2
    assert out.hi - out.lo <= Fraction(1, 2 ** 60)


def test_interval_op_dispatch_pow():
    assert interval_op("pow_rational", iv(2, 3), Fraction(2)) == iv(4, 9)
    out = interval_op("pow_rational", iv(2, 3), Fraction(1, 2))
    assert out.lo ** 2 <= 2 and 3 <= out.hi ** 2


def test_fraction_pow_bounds_exact_cases():
    lo, hi = fraction_pow_bounds(Fraction(4), Fraction(1, 2))
    assert lo == hi == 2
    lo, hi = fraction_pow_bounds(Fraction(27, 8), Fraction(2, 3))
    assert lo == hi == Fraction(9, 4)


def test_enclosure_soundness_bulk():
    # exact rational sample of each operand stays inside the interval result
    rng = random.Random(20240811)

    def rnd():
        return Fraction(rng.randint(-50, 50), rng.randint(1, 20))

    for op in ("add", "sub", "mul", "div"):
        for _ in range(25_000):
            a, b, c, d = sorted((rnd(), rnd())) + sorted((rnd(), rnd()))
            i, j = Interval(a, b), Interval(c, d)
            if op == "div" and j.contains_zero():
                continue
            x = a + (b - a) * Fraction(rng.randint(0, 8), 8)
            y = c + (d - c) * Fraction(rng.randint(0, 8), 8)
            fn = {"add": lambda: x + y, "sub": lambda: x - y,
                  "mul": lambda: x * y, "div": lambda: x / y}[op]
            assert interval_op(op, i, j).contains(fn())


# ---------------------------------------------------------------------------
# root isolation
# ---------------------------------------------------------------------------

def test_root_isolate_qstar_window():
    roots = root_isolate(QSTAR, (1, 2))
    assert len(roots) == 1
    enc = refine(roots[0], Fraction(1, 1000))
    assert Fraction(18, 10) <= enc.lo and enc.hi <= Fraction(181, 100)


def test_root_isolate_sqrt2():
    roots = root_isolate((-2, 0, 1), (1, 2))
    assert len(roots) == 1
    enc = refine(roots[0], Fraction(1, 10 ** 6))
    assert enc.lo <= Fraction(141_421_356, 10 ** 8) <= enc.hi + Fraction(1, 10 ** 6)


def test_root_isolate_no_real_roots():
    assert root_isolate((1, 0, 1), (-10, 10)) == []


def test_root_isolate_all_roots_of_cubic():
    # x^3 - x^2 - 2x + 1 has three real roots
    roots = root_isolate(QSTAR, (-10, 10))
    assert len(roots) == 3
    # pairwise disjoint isolating intervals, sorted
    for a, b in zip(roots, roots[1:]):
        assert a.hi < b.lo


def test_root_isolate_rational_root():
    # (x - 1/2)(x^2 - 2) over a window whose bisection lands on 1/2 exactly
    p = poly.mul(poly.make((Fraction(-1, 2), 1)), poly.make((-2, 0, 1)))
    roots = root_isolate(p, (-2, 3))
    assert len(roots) == 3
    exact = [r for r in roots if r.is_rational]
    assert len(exact) == 1 and exact[0].to_fraction() == Fraction(1, 2)
    for a, b in zip(roots, roots[1:]):
        assert a.hi < b.lo


def test_refine_nesting():
    r = root_isolate((-2, 0, 1), (1, 2))[0]
    outer = refine(r, Fraction(1, 1000))
    inner = refine(r, Fraction(1, 10 ** 6))
    assert outer.lo <= inner.lo and inner.hi <= outer.hi
    again = refine(r, Fraction(1, 10 ** 6))
    assert again == inner  # idempotent on repeat


def test_refine_monotone_random():
    rng = random.Random(7)
    for _ in range(20):
        c = rng.randint(2, 40)
        r = root_isolate((-c, 0, 1), (0, c))[0]
        prev = refine(r, Fraction(1, 10))
        for k in (100, 10_000, 10 ** 6):
            cur = refine(r, Fraction(1, k))
            assert prev.lo <= cur.lo and cur.hi <= prev.hi
            prev = cur


# ---------------------------------------------------------------------------
# exact signs at algebraic points
# ---------------------------------------------------------------------------

def test_sign_at_defining_polynomial():
    q = root_isolate(QSTAR, (1, 2))[0]
    assert sign_at(QSTAR, q) == 0


def test_sign_at_qstar_above_nine_fifths():
    q = root_isolate(QSTAR, (1, 2))[0]
    # independent bisection oracle: the defining cubic changes sign in
    # (9/5, 181/100), so the root exceeds 9/5
    p = poly.make(QSTAR)
    assert poly.eval_at(p, Fraction(9, 5)) < 0 < poly.eval_at(p, Fraction(181, 100))
    assert sign_at((Fraction(-9, 5), 1), q) == 1


def test_sign_at_sqrt2_below_three_halves():
    r = root_isolate((-2, 0, 1), (1, 2))[0]
    assert sign_at((Fraction(-3, 2), 1), r) == -1


def _independent_sign(expr, defining, window):
    """Sign oracle with no Sturm machinery: plain bisection on the defining
    polynomial, then endpoint evaluation with a Lipschitz error bound."""
    p = poly.make(defining)
    e = poly.make(expr)
    lo, hi = window
    for _ in range(220):
        mid = (lo + hi) / 2
        v = poly.eval_at(p, mid)
        if v == 0:
            lo = hi = mid
            break
        if (poly.eval_at(p, lo) > 0) != (v > 0):
            hi = mid
        else:
            lo = mid
    m = max(abs(lo), abs(hi), Fraction(1))
    lipschitz = sum(abs(c) * i * m ** (i - 1) for i, c in enumerate(e) if i)
    vlo = poly.eval_at(e, lo)
    slack = lipschitz * (hi - lo)
    if vlo - slack > 0:
        return 1
    if vlo + slack < 0:
        return -1
    return 0


def test_sign_at_agrees_with_independent_oracle():
    rng = random.Random(99)
    checked = 0
    while checked < 1000:
        defining = [Fraction(rng.randint(-9, 9)) for _ in range(4)]
        defining[3] = Fraction(rng.choice((1, 2, 3)))
        window = (Fraction(rng.randint(-6, 0)), Fraction(rng.randint(1, 7)))
        try:
            roots = root_isolate(defining, window)
        except FractarithError:
            continue
        if not roots:
            continue
        root = roots[0]
        expr = [Fraction(rng.randint(-9, 9)) for _ in range(rng.randint(1, 4))]
        want = _independent_sign(expr, root.poly, (root.lo, root.hi))
        if want == 0 and not root.is_rational:
            continue  # oracle margin too small to decide
        got = sign_at(expr, root)
        if want != 0:
            assert got == want
        checked += 1


# ---------------------------------------------------------------------------
# field elements
# ---------------------------------------------------------------------------

def test_field_element_arithmetic_identities():
    q = AlgebraicReal(QSTAR, Fraction(9, 5), Fraction(181, 100))
    x = FieldElement.generator(q)
    assert (x ** 3 - x ** 2 - 2 * x + 1).is_zero()
    # q^3 = q^2 + 2q - 1 reduces exactly
    assert x ** 3 == x ** 2 + 2 * x - 1
    inv = 1 / x
    assert (x * inv).to_fraction() == 1
    assert x > Fraction(9, 5)
    assert x < Fraction(181, 100)
    assert abs(-x) == x


def test_field_element_enclosure():
    q = AlgebraicReal(QSTAR, Fraction(9, 5), Fraction(181, 100))
    x = FieldElement.generator(q)
    lo, hi = (1 / (x * x)).enclosure(Fraction(1, 10 ** 9))
    assert hi - lo <= Fraction(1, 10 ** 9)
    # 1/qstar^2 = 0.3079785...
    assert Fraction(307978, 10 ** 6) <= lo and hi <= Fraction(307979, 10 ** 6)


def test_field_element_to_algebraic():
    q = AlgebraicReal(QSTAR, Fraction(9, 5), Fraction(181, 100))
    x = FieldElement.generator(q)
    lam = 1 / (x * x)
    alg = lam.to_algebraic()
    # the annihilating polynomial vanishes at lambda
    assert FieldElement.of(alg, alg.poly).is_zero()
    lo, hi = lam.enclosure(Fraction(1, 10 ** 6))
    assert alg.lo <= hi and lo <= alg.hi


def test_field_element_different_generators_rejected():
    a = AlgebraicReal((-2, 0, 1), 1, 2)
    b = AlgebraicReal((-3, 0, 1), 1, 2)
    with pytest.raises(FractarithError):
        FieldElement.generator(a) + FieldElement.generator(b)


def test_reducible_defining_polynomial_splits_on_inverse():
    # (x^2-2)(x-3) is squarefree but reducible; inverting (x-3) at sqrt2
    # must shrink the defining factor rather than fail
    p = poly.mul(poly.make((-2, 0, 1)), poly.make((-3, 1)))
    r = AlgebraicReal(p, 1, 2)
    x = FieldElement.generator(r)
    inv = 1 / (x - 3)  # nonzero at sqrt2
    assert ((x - 3) * inv).to_fraction() == 1
    assert (x * x - 2).is_zero()


# ---------------------------------------------------------------------------
# interval unions
# ---------------------------------------------------------------------------

def test_union_merges_touching():
    u = IntervalUnion.from_intervals([(0, 1), (1, 2), (3, 4)])
    assert u.to_obj() == [["0", "2"], ["3", "4"]]


def test_union_gaps():
    u = IntervalUnion.from_intervals([(0, Fraction(1, 3)), (Fraction(2, 3), 1)])
    gaps = u.gaps(iv(0, 1))
    assert len(gaps) == 1
    assert (gaps[0].lo, gaps[0].hi) == (Fraction(1, 3), Fraction(2, 3))


def test_union_gaps_empty_union():
    gaps = IntervalUnion.empty().gaps(iv(0, 1))
    assert len(gaps) == 1 and gaps[0] == iv(0, 1)


def test_union_contains_and_subset():
    u = IntervalUnion.from_intervals([(0, 1), (2, 3)])
    assert u.contains_point(Fraction(1, 2))
    assert not u.contains_point(Fraction(3, 2))
    assert u.contains_interval(iv(2, 3))
    assert not u.contains_interval(iv(1, 2))
    v = IntervalUnion.from_intervals([(0, Fraction(1, 2)), (2, 3)])
    assert v.is_subset(u)
    assert not u.is_subset(v)


def test_union_serialization_round_trip():
    u = IntervalUnion.from_intervals([(Fraction(-1, 3), 0), (Fraction(5, 7), 1)])
    assert IntervalUnion.from_obj(u.to_obj()) == u
