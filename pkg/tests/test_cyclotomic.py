import cmath
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sctrace.arith_core import is_squarefree
from sctrace.cyclotomic import CycNumber, I, ShadowDivergence, e, format_cyc, root_of_unity, sqrt_squarefree

small = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def cyc(draw, max_conductor=120):
    L = draw(st.integers(1, max_conductor))
    z = CycNumber.zero()
    for _ in range(draw(st.integers(0, 4))):
        z = z + root_of_unity(L, draw(st.integers(0, L - 1))).scale(draw(small))
    return z


@given(cyc(), cyc())
def test_product_matches_floats(z1, z2):
    assert abs((z1 * z2).approx() - z1.approx() * z2.approx()) < 1e-9 * (1 + abs(z1.approx()) * abs(z2.approx()))


@given(cyc(), cyc())
def test_equals_refines_float_equality(z1, z2):
    assert z1.equals(z1)
    assert z1.equals(z2) == z2.equals(z1)
    if z1.equals(z2):
        assert abs(z1.approx() - z2.approx()) < 1e-9


@given(cyc(30))
def test_inverse(z):
    if not z.is_zero():
        assert (z * z.invert()).equals(1)


@pytest.mark.parametrize("m", [m for m in range(1, 31) if is_squarefree(m)])
def test_sqrt_squarefree(m):
    s = sqrt_squarefree(m)
    assert (s * s).equals(m)
    assert s.approx() == pytest.approx(m**0.5)


def test_roots_of_unity():
    assert e(Fraction(1, 4)).equals(I)
    assert (I * I).equals(-1)
    assert (e(Fraction(1, 3)) + e(Fraction(2, 3))).equals(-1)
    assert e(Fraction(1, 12)).approx() == pytest.approx(cmath.exp(2j * cmath.pi / 12))


def test_as_rational_and_format():
    z = sqrt_squarefree(3).scale(-31) + CycNumber.rational(-103)
    assert z.as_rational() is None
    assert format_cyc(z) == "-103-31*sqrt(3)"
    assert (I.scale(46) + CycNumber.rational(-30)).as_rational() is None
    assert CycNumber.rational(Fraction(7, 2)).as_rational() == Fraction(7, 2)


def test_shadow_divergence_detected():
    z = CycNumber.rational(3)
    z.shadow = 3.5
    with pytest.raises(ShadowDivergence):
        z.check_shadow()
