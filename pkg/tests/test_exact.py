from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from bddlat.exact import INF, Magnitude, parse_p, parse_rational, radical_sign

small_q = st.fractions(min_value=0, max_value=5, max_denominator=12)
orders = st.sampled_from([F(1), F(3, 2), F(2), F(5, 2), F(3), F(4, 3), F(5)])


def mp_sign(terms, p):
    with mpmath.workdps(80):
        s = mpmath.fsum(mpmath.mpf(c.numerator) / c.denominator
                        * (mpmath.mpf(x.numerator) / x.denominator) ** (mpmath.mpf(p.numerator) / p.denominator)
                        for c, x in terms)
        if abs(s) < mpmath.mpf(10) ** -60:
            return 0
        return 1 if s > 0 else -1


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.fractions(-4, 4, max_denominator=6), small_q), min_size=1, max_size=5), orders)
def test_radical_sign_matches_high_precision(terms, p):
    assert radical_sign(terms, p) == mp_sign(terms, p)


def test_radical_sign_exact_cancellation():
    p = F(3, 2)
    assert radical_sign([(1, 8), (-8, 2)], p) == 0  # 8^(3/2) = 8 * 2^(3/2)
    assert radical_sign([(1, F(9, 4)), (F(-27, 8), 1)], p) == 0
    # same class after grouping, tiny positive remainder
    assert radical_sign([(1, 8), (F(-8 * 10**12 + 1, 10**12), 2)], p) == 1
    # distinct classes never cancel
    assert radical_sign([(1, 2), (1, 3), (-1, 5)], p) == -1


@settings(max_examples=100, deadline=None)
@given(st.lists(small_q, min_size=1, max_size=4), st.lists(small_q, min_size=1, max_size=4), orders)
def test_norm_comparison_antisymmetric(u, v, p):
    a, b = Magnitude.norm(u, p), Magnitude.norm(v, p)
    assert a.compare(b) == -b.compare(a)
    assert a.compare(a) == 0


@settings(max_examples=100, deadline=None)
@given(st.lists(st.fractions(-6, 6, max_denominator=8), min_size=1, max_size=5), orders)
def test_float_view_agrees(v, p):
    m = Magnitude.norm(v, p)
    ref = float(sum(abs(x) ** float(p) for x in v) ** (1 / float(p)))
    assert float(m) == pytest.approx(ref, rel=1e-12, abs=1e-300)


@settings(max_examples=100, deadline=None)
@given(small_q, small_q, orders)
def test_products_are_exact(a, b, p):
    assume(a > 0 and b > 0)
    ma, mb = Magnitude.rational(a, p), Magnitude.rational(b, p)
    assert (ma * mb).as_rational() == a * b
    assert (ma * b).compare(Magnitude.rational(a * b, p)) == 0


def test_as_rational():
    assert Magnitude.from_pth_power(F(9, 4), 2).as_rational() == F(3, 2)
    assert Magnitude.from_pth_power(3, 2).as_rational() is None
    assert Magnitude(F(3, 2), [(8, 1)]).as_rational() == 4  # 8^(2/3)
    assert Magnitude.norm([3, 4], 2).as_rational() == 5
    assert Magnitude.norm([F(-1, 2), F(1, 3)], INF).as_rational() == F(1, 2)


def test_pth_power_only_for_integer_p():
    assert Magnitude.norm([1, 1, 1], 3).pth_power() == 3
    with pytest.raises(ValueError):
        Magnitude.norm([1], F(3, 2)).pth_power()


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(st.fractions(0, 4, max_denominator=6), small_q), min_size=0, max_size=4), orders)
def test_json_round_trip(terms, p):
    m = Magnitude(p, terms)
    back = Magnitude.from_json(m.to_json(), p)
    assert back.compare(m) == 0


def test_magnitude_rejects_negative():
    with pytest.raises(ValueError):
        Magnitude(2, [(1, -1)])
    with pytest.raises(ValueError):
        Magnitude.rational(1, 2) * -1
    with pytest.raises(ValueError):
        Magnitude.rational(1, 2).compare(Magnitude.rational(1, 3))


def test_parse_helpers():
    assert parse_rational("3/4") == F(3, 4)
    assert parse_rational(0.1) == F(1, 10)
    assert parse_rational(" 0.125 ") == F(1, 8)
    assert parse_p("inf") == INF and parse_p("INF") == INF
    assert parse_p("1.5") == F(3, 2)
    with pytest.raises(ValueError):
        parse_p("0.5")
    with pytest.raises(ValueError):
        parse_p("1/1000")
    with pytest.raises(TypeError):
        parse_rational(object())
