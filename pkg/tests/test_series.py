from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from tate.errors import AdmissibilityError, ParityError, PrecisionError, RingMismatchError
from tate.scalars import Nil, NilpotentRing
from tate.series import (
    ExponentParity,
    LaurentSeries,
    add,
    big_o,
    compose,
    derivative,
    galois,
    gen,
    invert_comp,
    invert_mul,
    log_derivative,
    monomial,
    mul,
    parity,
    residue,
    series,
    truncate_mt,
)
from tate.symplectic import dp

X = sympy.Symbol("x")
small_q = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def laurent(lo=-4, hi=5, max_size=5):
    return st.dictionaries(st.integers(lo, hi), small_q, max_size=max_size).map(lambda d: series(d))


def power_series_unit_x(max_size=3):
    """``a x + ...`` with ``a`` nonzero: an element of the power-series group."""
    lead = small_q.filter(bool)
    return st.tuples(lead, st.dictionaries(st.integers(2, 5), small_q, max_size=max_size)).map(
        lambda t: series({1: t[0], **t[1]})
    )


def to_sympy(f: LaurentSeries):
    terms = (sympy.Rational(a.numerator, a.denominator) * X ** sympy.Rational(d, 2) for d, a in f.items2())
    return sum(terms, sympy.S.Zero)


def sympy_coeffs(expr, lo, hi):
    """Coefficients of x^k, lo <= k < hi, of a rational function, via sympy.series."""
    s = sympy.series(expr, X, 0, hi).removeO()
    s = sympy.expand(s)
    return {k: sympy.Rational(s.coeff(X, k)) for k in range(lo, hi)}


def coeff_dict(f: LaurentSeries, lo, hi):
    return {k: sympy.Rational(Fraction(f.coefficient(k)).numerator, Fraction(f.coefficient(k)).denominator) for k in range(lo, hi)}


# -- examples ---------------------------------------------------------------


def test_add_examples():
    x = gen()
    assert (monomial(-1) + x) + (-monomial(-1)) == x
    f = monomial(2) + big_o(3)
    out = add(f, monomial(3))
    assert out.head2 == 6 and out.items2() == [(4, 1)]


def test_mul_examples():
    assert mul(monomial(-1), monomial(1)) == monomial(0)
    assert mul(1 + gen(), 1 - gen()) == 1 - monomial(2)
    assert mul(monomial(Fraction(1, 2)), monomial(Fraction(1, 2))) == gen()


def test_mul_head_rule():
    f = monomial(-1) + big_o(2)  # val -1, head 2
    g = monomial(1) + monomial(3) + big_o(4)
    assert mul(f, g).head2 == 2 * min(2 + 1, 4 - 1)


def test_derivative_examples():
    assert derivative(monomial(-1)) == -monomial(-2)
    assert derivative(dp(Fraction(1, 2))) == dp(Fraction(-1, 2))
    assert derivative(monomial(0, 7)).is_zero()


def test_residue_examples():
    assert residue(monomial(-1)) == 1 and residue(monomial(3)) == 0
    assert residue(derivative(monomial(-2, 5) + monomial(4, 7))) == 0
    with pytest.raises(PrecisionError):
        residue(monomial(-3) + big_o(-1))


def test_compose_examples():
    x = gen()
    assert compose(monomial(2), x + monomial(2)) == monomial(2) + 2 * monomial(3) + monomial(4)
    out = compose(monomial(-1), x + monomial(2), 4)
    assert out == series({-1: 1, 0: -1, 1: 1, 2: -1}, head=3)
    ring = NilpotentRing(2)
    g = LaurentSeries({2: 1, -2: ring.eps()}, ring=ring)
    assert compose(gen(ring), g) == g


def test_invert_mul_examples():
    assert invert_mul(1 + gen(), 4) == series({0: 1, 1: -1, 2: 1, 3: -1}, head=4)
    assert invert_mul(gen()) == monomial(-1)
    ring = NilpotentRing(2)
    got = invert_mul(LaurentSeries({0: Nil(2, [2, 1])}, ring=ring))
    assert got.coefficient(0) == Nil(2, [Fraction(1, 2), Fraction(-1, 4)])


def test_invert_comp_examples():
    assert invert_comp(gen() + monomial(2), 4) == series({1: 1, 2: -1, 3: 2, 4: -5}, head=5)
    assert invert_comp(gen()) == gen()
    ring = NilpotentRing(2)
    g = LaurentSeries({2: 1, -2: ring.eps()}, ring=ring)
    h = invert_comp(g, 6)
    assert h.agrees(LaurentSeries({2: 1, -2: -ring.eps()}, ring=ring))


def test_log_derivative_examples():
    assert log_derivative(gen()) == monomial(-1)
    assert log_derivative(1 + gen(), 3).agrees(series({0: 1, 1: -1, 2: 1}))
    f = series({0: 1, 1: 1, 2: Fraction(1, 2)})
    got = log_derivative(f, 3)
    want = sympy_coeffs(sympy.diff(1 + X + X**2 / 2, X) / (1 + X + X**2 / 2), 0, 3)
    assert coeff_dict(got, 0, 3) == want


def test_galois_and_parity():
    half = monomial(Fraction(1, 2))
    assert galois(half) == -half and galois(gen()) == gen()
    assert galois(dp(Fraction(1, 2)) + gen()) == -dp(Fraction(1, 2)) + gen()
    assert parity(monomial(Fraction(3, 2)) + monomial(Fraction(-1, 2))) is ExponentParity.ODD_HALF
    assert parity(monomial(2)) is ExponentParity.INTEGRAL
    assert parity(gen() + half) is ExponentParity.MIXED


def test_truncate_mt():
    assert truncate_mt(monomial(-3) + monomial(-1) + monomial(2)) == monomial(-1) + monomial(2)
    assert truncate_mt(monomial(-2)).is_zero()
    f = 1 + gen() + monomial(4)
    assert truncate_mt(f) == f
    with pytest.raises(ParityError):
        truncate_mt(monomial(Fraction(1, 2)))


def test_errors():
    with pytest.raises(RingMismatchError):
        mul(gen(NilpotentRing(3)), gen(NilpotentRing(2)))
    with pytest.raises(AdmissibilityError):
        compose(gen(), monomial(2))
    with pytest.raises(AdmissibilityError):
        compose(gen(), gen() + monomial(-1))  # 1 is not nilpotent


# -- properties -------------------------------------------------------------


@given(laurent(), laurent(), laurent())
def test_ring_axioms(f, g, h):
    assert mul(mul(f, g), h) == mul(f, mul(g, h))
    assert mul(f, g + h) == mul(f, g) + mul(f, h)
    assert mul(f, g) == mul(g, f)


@given(laurent(), laurent())
def test_mul_matches_sympy(f, g):
    assert to_sympy(mul(f, g)) - sympy.expand(to_sympy(f) * to_sympy(g)) == 0


@given(laurent(), laurent())
def test_residue_properties(f, g):
    assert residue(derivative(f)) == 0
    assert residue(mul(f, derivative(g))) == -residue(mul(derivative(f), g))


@given(laurent(-3, 3), power_series_unit_x())
def test_residue_substitution_invariance(f, g):
    assert residue(mul(compose(f, g, 8), derivative(g))) == residue(f)


@given(laurent(0, 4), power_series_unit_x())
def test_compose_matches_sympy(f, g):
    got = compose(f, g, 6)
    hi = 6 if got.is_exact() else got.head2 // 2
    want = sympy_coeffs(to_sympy(f).subs(X, to_sympy(g)), 0, hi)
    assert coeff_dict(got, 0, hi) == want


@settings(max_examples=25)
@given(power_series_unit_x())
def test_invert_comp_lagrange_oracle(g):
    """Coefficients of the inverse from Lagrange: [x^n] = (1/n) [x^(n-1)] (x/g)^n."""
    h = invert_comp(g, 6)
    ratio = sympy.cancel(X / to_sympy(g))
    for n in range(1, 7):
        want = sympy_coeffs(ratio**n, n - 1, n)[n - 1] / n
        got = h.coefficient(n)
        assert sympy.Rational(Fraction(got).numerator, Fraction(got).denominator) == want


@given(power_series_unit_x())
def test_invert_comp_round_trip(g):
    h = invert_comp(g, 8)
    assert compose(g, h, 8).agrees(gen())
    assert invert_comp(h, 6).agrees(g)


@given(laurent(-6, 6))
def test_galois_involution(f):
    half = LaurentSeries({2 * d + 1: a for d, a in f.coeffs2().items()})
    assert galois(galois(f + half)) == f + half
    assert galois(half) == -half


@st.composite
def nil_group(draw):
    ring = NilpotentRing(3)
    ints = st.integers(-3, 3)
    unit = draw(st.sampled_from([1, -1, 2]))
    terms = {
        2: Nil(3, [unit, draw(ints), draw(ints)]),
        4: Nil(3, [draw(ints), draw(ints), draw(ints)]),
        0: Nil(3, [0, draw(ints), draw(ints)]),
        -2: Nil(3, [0, draw(ints), draw(ints)]),
    }
    return LaurentSeries(terms, ring=ring)


@given(nil_group(), nil_group(), nil_group())
def test_nil_compose_associative(f, g, h):
    lhs = compose(compose(f, g, 14), h, 14)
    rhs = compose(f, compose(g, h, 14), 14)
    assert lhs.agrees(rhs) and min(lhs.head2, rhs.head2) >= 8


@given(nil_group())
def test_nil_invert_comp(g):
    h = invert_comp(g, 12)
    one = compose(g, h, 12)
    assert one.agrees(gen(g.ring)) and one.head2 >= 6
