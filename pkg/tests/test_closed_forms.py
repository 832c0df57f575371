from fractions import Fraction

import pytest

from sctrace import closed_forms as cf
from sctrace.cyclotomic import I
from sctrace.local_data import enumerate_tuples, validate_tuple
from sctrace.orbital import GammaClass
from sctrace.residue_fields import Nebentypus, quadratic_character
from sctrace.trace_engine import bias_partition, dimension, global_orbital

from helpers import characters


def test_frozen_small_tables():
    assert [cf.dim_N8(k, 1) for k in range(4, 21, 2)] == [1, 0, 1, 1, 2, 1, 2, 2, 3]
    assert [cf.dim_N8(k, -1) for k in range(4, 21, 2)] == [0, 1, 1, 1, 1, 2, 2, 2, 2]
    assert [(cf.dim_N27(k, 1, 0), cf.dim_N27(k, -1, Fraction(1, 2))) for k in range(4, 13, 2)] == [(1, 0), (2, 2), (2, 2), (3, 4), (4, 3)]
    assert [cf.dim_new_8(k) for k in (4, 8, 12)] == [1, 2, 3]
    assert [cf.dim_new_27(k) for k in (4, 5, 6)] == [4, 5, 7]


def test_frozen_sums_and_biases():
    assert [cf.dimnew(T, k) for T, k in ((5, 4), (7, 6), (10, 4), (11, 12))] == [24, 120, 72, 1100]
    assert [cf.gross(T, k) for T, k in ((5, 4), (7, 6), (10, 4))] == [6, 20, 18]
    assert cf.pq_bias(5, 4) == {1: 14, -1: 10}
    assert cf.pq_bias(13, 16) == {1: 1266, -1: 1254}
    assert [cf.sbias(S, k) for S, k in ((7, 4), (11, 6), (23, 12), (13, 10))] == [3, -1, 25, 0]
    assert [cf.smin_dim(S, k) for S, k in ((7, 4), (11, 6), (23, 12), (2, 8), (3, 6))] == [5, 21, 223, 0, 0]


def test_class_numbers():
    assert [cf.h_of(n) for n in (1, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15)] == [1, 1, 1, 2, 2, 1, 2, 1, 2, 4, 2]


@pytest.mark.parametrize("T", [5, 7, 10, 11, 13, 14, 15])
def test_level_T3_dimension(T):
    tups = enumerate_tuples(1, T, Nebentypus.trivial(T**3))
    for k in range(4, 17, 2):
        for tup in tups:
            assert dimension(tup, k) == cf.dim_T3(tup, k)


@pytest.mark.parametrize("S", [2, 3, 5, 7, 11, 13, 23])
def test_level_S2_dimension(S):
    tups = enumerate_tuples(S, 1, Nebentypus.trivial(S * S))
    for k in range(4, 13):
        for tup in tups:
            if validate_tuple(tup, k):
                continue
            assert cf.dim_S2(tup, k).equals(dimension(tup, k))
        if k % 2 == 0:
            assert cf.smin_dim(S, k) == sum(dimension(t, k) for t in tups)


@pytest.mark.parametrize("S", [5, 7, 11, 13])
def test_level_S2_general_character(S):
    for neb in characters(S * S):
        for k in (4, 5, 6, 7):
            for tup in enumerate_tuples(S, 1, neb):
                if not validate_tuple(tup, k):
                    assert cf.dim_S2(tup, k).equals(dimension(tup, k))


def test_level27_sum():
    for k in range(3, 21):
        total = 0
        for neb in (Nebentypus.trivial(27), quadratic_character(27, 3)):
            for tup in enumerate_tuples(1, 3, neb):
                if not validate_tuple(tup, k):
                    total += cf.dim_N27(k, 1 if tup.reps[0].t == 1 else -1, tup.reps[0].zeta_exp)
        assert total == cf.dim_new_27(k)


@pytest.mark.parametrize("T", [3, 5, 6, 7, 10, 11, 13, 14, 15, 21, 22, 30])
def test_elliptic_terms_general_character(T):
    for neb in characters(T**3, 1):
        for tup in enumerate_tuples(1, T, neb)[:24]:
            for k in (4, 6, 8):
                assert global_orbital(GammaClass(1, T, 0), tup, k, 1).equals(cf.phi_e1(tup, k))
                if neb.is_trivial:
                    assert global_orbital(GammaClass(1, T, 0), tup, k, 1).equals(cf.phi_e1_trivial(tup, k))
                if T % 2 == 0:
                    assert global_orbital(GammaClass(1, T // 2, 0), tup, k, 1).equals(cf.phi_e2(tup, k))


def test_e2_sign_with_nonreal_zeta2():
    """zeta_2 = +-i separates eps-bar*zeta_2 from eps-bar/zeta_2."""
    seen = 0
    for T in (10, 14, 22, 30):
        for neb in characters(T**3, 1):
            for tup in enumerate_tuples(1, T, neb):
                z2 = tup.rep_at(2).zeta
                if z2.as_rational() is not None:
                    continue
                val = global_orbital(GammaClass(1, T // 2, 0), tup, 4, 1)
                assert val.equals(cf.phi_e2(tup, 4))
                if not val.is_zero():
                    assert not val.equals(cf.phi_e2(tup, 4) * z2.invert() * z2.invert())
                    seen += 1
    assert seen


@pytest.mark.parametrize("k", range(4, 30, 2))
def test_level8_terms(k):
    for tup in enumerate_tuples(1, 2, Nebentypus.trivial(8)):
        zeta = 1 if tup.reps[0].zeta_exp == 0 else -1
        assert global_orbital(GammaClass(1, 2, 1), tup, k, 1).equals(cf.phi_2T(k, zeta))
        assert global_orbital(GammaClass(1, 1, 0), tup, k, 1).equals(cf.phi_e2(tup, k))


@pytest.mark.parametrize("k", range(3, 30))
def test_level27_terms(k):
    for neb in (Nebentypus.trivial(27), quadratic_character(27, 3)):
        for tup in enumerate_tuples(1, 3, neb):
            if validate_tuple(tup, k):
                continue
            rep = tup.reps[0]
            assert global_orbital(GammaClass(1, 1, 1), tup, k, 1).equals(cf.phi_g3a(k, rep.t))
            assert global_orbital(GammaClass(1, 3, 1), tup, k, 1).equals(cf.phi_g3b(k, rep.t, rep.zeta_exp))


@pytest.mark.parametrize("S", [2, 3, 5, 6, 7, 10, 11, 13, 15, 23])
def test_sbias_by_summation(S):
    for k in range(4, 13, 2):
        part = bias_partition(S, 1, k, Nebentypus.trivial(S * S))
        delta = part.get(Fraction(0), 0) - part.get(Fraction(1, 2), 0)
        assert delta == cf.sbias(S, k)
        sign = cf.sbias_predicted_sign(S, k)
        if sign is not None:
            assert (delta > 0) - (delta < 0) == sign


def test_exceptional_vanishing():
    assert cf.sbias_predicted_sign(2, 8) is None and cf.sbias_predicted_sign(3, 6) is None
    for S, k in ((2, 8), (3, 6)):
        assert sum(dimension(t, k) for t in enumerate_tuples(S, 1, Nebentypus.trivial(S * S))) == 0


@pytest.mark.parametrize("T", [5, 7, 10, 11, 13])
def test_pq_by_summation(T):
    for k in range(4, 17, 2):
        part = bias_partition(1, T, k, Nebentypus.trivial(T**3))
        assert {1: part.get(Fraction(0), 0), -1: part.get(Fraction(1, 2), 0)} == cf.pq_bias(T, k)


def test_identity_families():
    assert all(cf.identity_nonintegral(2, k) for k in range(4, 41, 2))
    assert not cf.identity_nonintegral(3, 4)
    assert cf.identity_nonintegral(6, 4) and cf.identity_nonintegral(10, 4)
    assert not cf.identity_nonintegral(14, 4)


def test_g3b_uses_i_power():
    assert cf.phi_g3b(5, 2, Fraction(1, 4)).equals((I**5 * I).scale(cf.g6(5)))
