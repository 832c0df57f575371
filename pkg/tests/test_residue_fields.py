import random
from fractions import Fraction

import pytest

from sctrace.residue_fields import FiniteChar, Nebentypus, build_fp2, fp_dlog, parity, quadratic_character


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_generator_has_full_order(p):
    ctx = build_fp2(p)
    assert len(set(ctx.powers)) == p * p - 1


def test_modulus_override():
    ctx = build_fp2(11, (7, 2))
    assert ctx.modulus == (7, 2)
    with pytest.raises(ValueError):
        build_fp2(5, (0, 1))  # X^2 + 1 is not primitive over F_5


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_character_multiplicative(p):
    ctx = build_fp2(p)
    rng = random.Random(p)
    for m in range(0, ctx.order, 3):
        nu = FiniteChar(ctx, m)
        for _ in range(100):
            x, y = rng.choice(ctx.powers), rng.choice(ctx.powers)
            assert (nu.value(ctx.mul(x, y))).equals(nu.value(x) * nu.value(y))


@pytest.mark.parametrize("p", [3, 5, 7])
def test_conjugate_pair_agrees_on_base_field(p):
    ctx = build_fp2(p)
    for m in range(ctx.order):
        nu, mu = FiniteChar(ctx, m), FiniteChar(ctx, m).conjugate_partner()
        for u in range(1, p):
            x = ctx.elem(u)
            assert nu.value(x).equals(mu.value(x))
        assert nu.restriction_exponent() == mu.restriction_exponent()


def test_nebentypus_values():
    q3 = quadratic_character(27, 3)
    assert q3.local_exponent(3, 2) == Fraction(1, 2)
    assert q3.local_exponent(3, 1) == 0
    assert parity(q3) == -1
    assert parity(Nebentypus.trivial(125)) == 1
    assert q3.inverse() == q3
    with pytest.raises(ValueError):
        Nebentypus(8, {2: 1})


def test_dlog_roundtrip():
    for p in (5, 7, 13):
        g = next(u for u in range(2, p) if fp_dlog(p, u) == 1)
        for j in range(p - 1):
            assert fp_dlog(p, pow(g, j, p)) == j
