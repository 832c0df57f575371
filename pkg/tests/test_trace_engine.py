import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import sctrace.orbital as orbital
from sctrace.arith_core import is_square_in_Qp, valuation
from sctrace.cyclotomic import CycNumber, I, format_cyc, sqrt_squarefree
from sctrace.local_data import enumerate_tuples, validate_tuple
from sctrace.orbital import GammaClass
from sctrace.residue_fields import Nebentypus, quadratic_character
from sctrace.trace_engine import (
    CSV_HEADER,
    InvalidTuple,
    bias_partition,
    dimension,
    global_orbital,
    glist_table,
    main_term,
    relevant_gammas,
    trace_hecke,
)

from helpers import characters


def level27():
    return {tup.label: tup for tup in enumerate_tuples(1, 3, quadratic_character(27, 3))}


@pytest.mark.parametrize(
    "label, tr4, tr7, dim",
    [
        ("3:t=-1,zeta=-i", 16, 71, 1),
        ("3:t=-1,zeta=i", -76, 34, 2),
        ("3:t=1,zeta=+1", 7, -19, 1),
        ("3:t=1,zeta=-1", 7, -19, 1),
    ],
)
def test_level27_traces(label, tr4, tr7, dim):
    tup = level27()[label]
    assert trace_hecke(tup, 5, 4).total.equals(tr4)
    assert trace_hecke(tup, 5, 7).total.equals(tr7)
    assert dimension(tup, 5) == dim


def test_level968_extremes():
    tups = {tup.label: tup for tup in enumerate_tuples(11, 2, Nebentypus.trivial(968), {11: (7, 2)})}
    root3 = sqrt_squarefree(3).scale(31)
    assert trace_hecke(tups["2:t=1,zeta=+1;11:nu10"], 6, 7).total.equals(CycNumber.rational(-103) - root3)
    assert trace_hecke(tups["2:t=1,zeta=+1;11:nu50"], 6, 7).total.equals(CycNumber.rational(-103) + root3)
    assert sum(dimension(t, 6) for t in tups.values()) == 62


@pytest.mark.parametrize("T", [1, 2, 3, 5, 6, 7, 10, 15, 30])
def test_relevant_gammas_at_n1(T):
    for S in (1, 5, 7):
        if S * T == 1 or T % S == 0:
            continue
        neb = Nebentypus.trivial(S * S * T**3)
        for tup in enumerate_tuples(S, T, neb)[:6]:
            for k in (4, 6, 8):
                found = {(g.M, g.r) for g, _ in relevant_gammas(tup, 1, k)}
                assert found <= glist_table(T)


def test_rejects_bad_input():
    tup = level27()["3:t=1,zeta=+1"]
    with pytest.raises(InvalidTuple):
        trace_hecke(tup, 4, 1)
    with pytest.raises(ValueError):
        trace_hecke(tup, 5, 3)
    with pytest.raises(ValueError):
        trace_hecke(tup, 5, 0)


@given(st.sampled_from([5, 7, 11]), st.sampled_from([3, 5, 7, 9, 11, 13]), st.data())
def test_odd_weight_keeps_only_identity(T, k, data):
    neb = data.draw(st.sampled_from(characters(T**3, -1)))
    for tup in enumerate_tuples(1, T, neb):
        assert relevant_gammas(tup, 1, k) == []
        assert dimension(tup, k) == main_term(tup, k)


LEVELS = [(1, 2), (1, 3), (1, 5), (1, 6), (1, 7), (2, 1), (3, 1), (5, 1), (7, 1), (2, 3), (3, 2), (5, 2), (2, 5), (6, 1)]


@given(st.sampled_from(LEVELS), st.integers(3, 16), st.data())
def test_dimension_is_nonnegative_integer(level, k, data):
    S, T = level
    neb = data.draw(st.sampled_from(characters(S * S * T**3)))
    for tup in enumerate_tuples(S, T, neb):
        if validate_tuple(tup, k):
            continue
        report = trace_hecke(tup, k, 1)
        assert report.rationalized.denominator == 1 and report.rationalized >= 0
        assert abs(report.total_float - report.total.approx()) < 1e-9 * (1 + abs(report.total_float))


def test_global_orbital_hyperbolic_is_zero():
    tup = enumerate_tuples(1, 7, Nebentypus.trivial(343))[0]
    gamma = GammaClass(1, 1, 1)
    assert is_square_in_Qp(gamma.delta, 7)
    assert global_orbital(gamma, tup, 4, 1).is_zero()


def test_unramified_sum_needs_top_layer(monkeypatch):
    """Dropping the n = v_p(Delta) layer of the counts breaks integrality at level 27."""
    full = orbital.n_gamma_table
    monkeypatch.setattr(orbital, "n_gamma_table", lambda g, p: {n: c for n, c in full(g, p).items() if n < valuation(g.delta, p)})
    values = [trace_hecke(tup, 5, 1).total.as_rational() for tup in level27().values()]
    assert any(v.denominator != 1 for v in values)


def test_report_serialization():
    report = trace_hecke(level27()["3:t=-1,zeta=i"], 5, 4)
    obj = json.loads(json.dumps(report.to_json()))
    assert obj["total_string"] == "-76"
    assert obj["level"] == 27 and obj["n"] == 4
    assert len(report.csv_row()) == len(CSV_HEADER)
    assert {g["M"] for g in obj["gamma_terms"]} <= {1, 3}


def test_complex_trace():
    tup = level27()["3:t=-1,zeta=i"]
    q = trace_hecke(tup, 5, 4).identity_term
    assert q.equals(Fraction(-4, 3))
    assert format_cyc(I.scale(46) + CycNumber.rational(-30)) == "-30+46*i"


def test_bias_partition():
    assert bias_partition(7, 1, 4, Nebentypus.trivial(49)) == {Fraction(0): 4, Fraction(1, 2): 1}
    with pytest.raises(ValueError):
        bias_partition(7, 1, 5, Nebentypus(49, {7: 1}))
