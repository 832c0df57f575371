"""The acceptance suite: each check returns a CheckResult with timing."""
import itertools
import random
import time
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction

from . import closed_forms as cf
from .arith_core import is_square_in_Qp, prime_divisors, valuation
from .cyclotomic import CycNumber, I, ShadowDivergence, format_cyc, sqrt_squarefree
from .local_data import enumerate_tuples, validate_tuple
from .lmfdb_interface import compare, engine_records, fetch_orbits
from .orbital import GammaClass, NotElliptic, count_N_gamma, lattice_orbital_oracle, phi_ell
from .residue_fields import Nebentypus, parity, quadratic_character
from .trace_engine import (
    InternalConsistencyError,
    bias_partition,
    dimension,
    identity_term,
    main_term,
    relevant_gammas,
    trace_hecke,
)

MODULUS_11 = (7, 2)


@dataclass
class CheckResult:
    number: str
    title: str
    passed: bool
    detail: str
    seconds: float
    limit: float = None

    @property
    def line(self):
        state = "PASS" if self.passed else "FAIL"
        budget = "" if self.limit is None else " (limit %gs)" % self.limit
        return "criterion %s: %s  %s [%.2fs%s] %s" % (self.number, state, self.title, self.seconds, budget, self.detail)


def _run(number, title, limit, fn):
    start = time.perf_counter()
    try:
        failures, detail = fn()
    except (InternalConsistencyError, ShadowDivergence, NotElliptic) as exc:
        failures, detail = ["%s: %s" % (type(exc).__name__, exc)], ""
    seconds = time.perf_counter() - start
    if limit is not None and seconds > limit:
        failures = list(failures) + ["took %.2fs" % seconds]
    text = detail if not failures else "; ".join(str(f) for f in failures[:5])
    return CheckResult(number, title, not failures, text, seconds, limit)


def _sign(exp):
    return 1 if Fraction(exp) % 1 == 0 else -1


def _t(rep):
    return 1 if rep.t == 1 else -1


# 1

def level27_expected(t, zeta):
    """Closed forms for tr T_4 and tr T_7 at level 27, weight 5, quadratic character."""
    tr4 = CycNumber.rational(Fraction(37 * t - 23, 2))
    tr7 = CycNumber.rational(Fraction(67 - 143 * t, 4))
    if t == -1:
        tr4 = tr4 + (I * zeta).scale(46)
        tr7 = tr7 + (I * zeta).scale(Fraction(37, 2))
    return tr4, tr7


def check_level27():
    failures = []
    seen = {}
    for tup in enumerate_tuples(1, 3, quadratic_character(27, 3)):
        rep = tup.reps[0]
        tr4, tr7 = trace_hecke(tup, 5, 4).total, trace_hecke(tup, 5, 7).total
        e4, e7 = level27_expected(_t(rep), rep.zeta)
        if not (tr4.equals(e4) and tr7.equals(e7)):
            failures.append("%s: got (%s, %s)" % (tup.label, format_cyc(tr4), format_cyc(tr7)))
        seen[tup.label] = format_cyc(tr4)
    if seen.get("3:t=-1,zeta=-i") != "16" or seen.get("3:t=-1,zeta=i") != "-76":
        failures.append("LMFDB rows: %s" % seen)
    return failures, "4 tuples, T_4 and T_7 exact"


# 2

EPS11 = {10: 1, 20: -1, 30: 1, 40: -1, 50: 1}
X11 = {10: 1, 20: 1, 30: -2, 40: 1, 50: 1}
Y11 = {10: (0, 1), 20: (-1, 0), 30: (0, 0), 40: (1, 0), 50: (0, -1)}  # a + b sqrt(3)


def level968_expected(zeta, m):
    a, b = Y11[m]
    rational = -98 * zeta * EPS11[m] - 5 * zeta * X11[m] - 31 * a
    return CycNumber.rational(rational) + sqrt_squarefree(3).scale(-31 * b)


def check_level968():
    failures = []
    count = 0
    for tup in enumerate_tuples(11, 2, Nebentypus.trivial(968), {11: MODULUS_11}):
        zeta = _sign(tup.rep_at(2).zeta_exp)
        m = tup.rep_at(11).m
        tr7 = trace_hecke(tup, 6, 7).total
        if not tr7.equals(level968_expected(zeta, m)):
            failures.append("%s: %s" % (tup.label, format_cyc(tr7)))
        count += 1
    if count != 10:
        failures.append("expected 10 tuples, found %d" % count)
    return failures, "10 tuples, T_7 exact in Q(sqrt 3)"


# 3

def dim211_expected(zeta, m):
    if (zeta, m) in ((1, 40), (-1, 20)):
        return 7
    return 6


def check_dimension_tables():
    failures = []
    for k in range(4, 41, 2):
        for tup in enumerate_tuples(1, 2, Nebentypus.trivial(8)):
            zeta = _sign(tup.reps[0].zeta_exp)
            if dimension(tup, k) != cf.dim_N8(k, zeta):
                failures.append("N=8 k=%d zeta=%d" % (k, zeta))
    cases = 0
    for k in range(3, 41):
        for neb in (Nebentypus.trivial(27), quadratic_character(27, 3)):
            for tup in enumerate_tuples(1, 3, neb):
                if validate_tuple(tup, k):
                    continue
                rep = tup.reps[0]
                cases += 1
                if dimension(tup, k) != cf.dim_N27(k, _t(rep), rep.zeta_exp):
                    failures.append("N=27 k=%d %s %s" % (k, neb.label(), tup.label))
    for tup in enumerate_tuples(11, 2, Nebentypus.trivial(968), {11: MODULUS_11}):
        zeta = _sign(tup.rep_at(2).zeta_exp)
        if dimension(tup, 6) != dim211_expected(zeta, tup.rep_at(11).m):
            failures.append("N=968 %s" % tup.label)
    return failures, "N=8: 38 weights x 2; N=27: %d cases; N=968: 10 tuples" % cases


# 4

def _all_dims(T, k):
    return {tup: dimension(tup, k) for tup in enumerate_tuples(1, T, Nebentypus.trivial(T**3))}


def check_global_sums():
    failures = []
    for T in (2, 3, 5, 6, 7, 10, 11):
        for k in range(4, 21, 2):
            total = sum(_all_dims(T, k).values())
            if T == 2:
                expected = cf.dim_new_8(k)
            elif T == 3:
                expected = cf.dim_new_27(k)
            else:
                expected = cf.dimnew(T, k)
            if total != expected:
                failures.append("T=%d k=%d: %s != %s" % (T, k, total, expected))
    failures.extend(gross_failures((5, 6, 7, 10, 11)))
    return failures, "dimnew on T in {2,3,5,6,7,10,11}; Gross sums on T in {5,6,7,10,11}"


def gross_failures(levels):
    failures = []
    for T in levels:
        for k in range(4, 21, 2):
            by_t = defaultdict(int)
            for tup, d in _all_dims(T, k).items():
                by_t[tuple(rep.t for rep in tup.reps)] += d
            for ts, total in sorted(by_t.items()):
                if total != cf.gross(T, k):
                    failures.append("T=%d k=%d t=%s: %s != %s" % (T, k, ts, total, cf.gross(T, k)))
    return failures


def check_gross_small_levels():
    """Gross sums at T = 2, 3, where the right-hand side is not an integer."""
    failures = gross_failures((2, 3))
    return failures, "Gross sums on T in {2,3}"


# 5

S_GRID = (2, 3, 5, 7, 11, 13, 23)


def check_closed_form_oracle():
    failures = []
    for T in (5, 7, 10, 11, 13, 14, 15):
        tups = enumerate_tuples(1, T, Nebentypus.trivial(T**3))
        for k in range(4, 17, 2):
            for tup in tups:
                if dimension(tup, k) != cf.dim_T3(tup, k):
                    failures.append("T=%d k=%d %s" % (T, k, tup.label))
    for S in S_GRID:
        neb = Nebentypus.trivial(S * S)
        tups = enumerate_tuples(S, 1, neb)
        for k in range(4, 13):
            for tup in tups:
                if validate_tuple(tup, k):
                    continue
                d = dimension(tup, k)
                ms = {rep.p: rep.m for rep in tup.reps}
                if not cf.dim_S2(tup, k).equals(d) or (k % 2 == 0 and cf.dim_S2_trivial(S, ms, k) != d):
                    failures.append("S=%d k=%d %s" % (S, k, tup.label))
        for k in range(4, 13, 2):
            dims = [dimension(tup, k) for tup in tups]
            if sum(dims) != cf.smin_dim(S, k):
                failures.append("Smin S=%d k=%d" % (S, k))
            part = bias_partition(S, 1, k, neb)
            delta = part.get(Fraction(0), 0) - part.get(Fraction(1, 2), 0)
            if delta != cf.sbias(S, k):
                failures.append("Sbias S=%d k=%d: %s != %s" % (S, k, delta, cf.sbias(S, k)))
            sign = cf.sbias_predicted_sign(S, k)
            if sign is not None and (delta > 0) - (delta < 0) != sign:
                failures.append("Sbias sign S=%d k=%d" % (S, k))
    for S, k in ((2, 8), (3, 6)):
        if sum(dimension(tup, k) for tup in enumerate_tuples(S, 1, Nebentypus.trivial(S * S))) != 0:
            failures.append("S^min_%d(%d^2) != 0" % (k, S))
    return failures, "T^3 grid x 7 weights; S^2 grid x 9 weights; Smin, Sbias, sign and zero cases"


# 6

def check_pq_bias():
    failures = []
    for T in (5, 7, 10, 11, 13):
        for k in range(4, 17, 2):
            part = bias_partition(1, T, k, Nebentypus.trivial(T**3))
            expected = cf.pq_bias(T, k)
            got = {1: part.get(Fraction(0), 0), -1: part.get(Fraction(1, 2), 0)}
            if got != expected:
                failures.append("T=%d k=%d: %s != %s" % (T, k, got, expected))
    return failures, "T in {5,7,10,11,13}, k in 4..16, both signs"


# 7

def random_elliptic(rng, count, primes=(2, 3, 5, 7, 11, 13), max_val=6):
    """Deterministic sample of (gamma, l) with gamma elliptic at l and v_l(Delta) <= max_val."""
    out = []
    while len(out) < count:
        ell = rng.choice(primes)
        det = rng.randint(1, 400)
        bound = int((4 * det) ** 0.5)
        trace = rng.randint(-bound, bound)
        if trace * trace >= 4 * det:
            continue
        gamma = GammaClass(det, 1, trace)
        if valuation(gamma.delta, ell) > max_val or is_square_in_Qp(gamma.delta, ell):
            continue
        out.append((gamma, ell))
    return out


def check_properties(seed=20240611):
    rng = random.Random(seed)
    failures = []
    sample = random_elliptic(rng, 240)
    for gamma, ell in sample:
        if phi_ell(gamma, ell) != lattice_orbital_oracle(gamma, ell):
            failures.append("(a) %s at %d" % (gamma, ell))
    checked_b = 0
    for gamma, p in random_elliptic(rng, 120, max_val=5):
        for n in range(1, valuation(gamma.delta, p) + 2):
            mod = p ** (n + 1)
            direct = sum(1 for b in range(mod) if (b * b - gamma.trace * b + gamma.det) % p**n == 0)
            if sum(count_N_gamma(gamma, p, c, n) for c in range(p)) != direct:
                failures.append("(b) %s p=%d n=%d" % (gamma, p, n))
            checked_b += 1
    for T in (5, 7, 11):
        for k in (3, 5, 7, 9, 11):
            for neb in _odd_characters(T**3):
                for tup in enumerate_tuples(1, T, neb):
                    if relevant_gammas(tup, 1, k) or dimension(tup, k) != main_term(tup, k):
                        failures.append("(c) T=%d k=%d %s" % (T, k, tup.label))
    dims = 0
    for S, T in ((1, 2), (1, 3), (1, 5), (1, 6), (1, 10), (2, 1), (3, 1), (5, 1), (6, 1), (2, 3), (3, 2), (5, 2)):
        N = S * S * T**3
        for neb in _all_characters(N):
            for k in range(3, 13):
                for tup in enumerate_tuples(S, T, neb):
                    if validate_tuple(tup, k):
                        continue
                    dimension(tup, k)
                    dims += 1
    shadow = _shadow_checks()
    failures.extend(shadow)
    fam = 0
    for T, ks in ((2, range(4, 41, 2)), (3, [k for k in range(3, 41) if k % 3 != 1])):
        fam += _nonintegral_family(T, ks, failures)
    for p in (3, 5, 11, 13, 19):
        fam += _nonintegral_family(2 * p, range(4, 17, 2), failures)
    detail = "(a) %d gamma (b) %d counts (d) %d dims (e) shadows (f) %d family cases" % (len(sample), checked_b, dims, fam)
    return failures, detail


def _odd_characters(N):
    return [neb for neb in _all_characters(N) if parity(neb) == -1]


def _all_characters(N):
    primes = [p for p in prime_divisors(N) if p > 2]
    return [Nebentypus(N, dict(zip(primes, exps))) for exps in itertools.product(*[range(p - 1) for p in primes])]


def _nonintegral_family(T, ks, failures):
    count = 0
    for k in ks:
        if not cf.identity_nonintegral(T, k):
            failures.append("(f) T=%d k=%d not in the family" % (T, k))
            continue
        for neb in _all_characters(T**3):
            for tup in enumerate_tuples(1, T, neb):
                if validate_tuple(tup, k):
                    continue
                ident = identity_term(tup, k, 1).as_rational()
                elliptic = dimension(tup, k) - ident
                if ident.denominator == 1 or elliptic == 0:
                    failures.append("(f) T=%d k=%d %s" % (T, k, tup.label))
                count += 1
    return count


def _shadow_checks():
    failures = []
    reports = [trace_hecke(tup, 5, n) for tup in enumerate_tuples(1, 3, quadratic_character(27, 3)) for n in (1, 4, 7)]
    reports += [trace_hecke(tup, 6, n) for tup in enumerate_tuples(11, 2, Nebentypus.trivial(968), {11: MODULUS_11}) for n in (1, 7)]
    for r in reports:
        exact = r.total.approx()
        if abs(exact - r.total_float) > 1e-9 * (1 + abs(exact)):
            failures.append("(e) %s n=%d" % (r.tuple.label, r.n))
    return failures


# 8

def check_lmfdb_fixtures():
    failures = []
    cases = [
        (1, 3, 5, quadratic_character(27, 3), "b", (4, 7), None),
        (11, 2, 6, Nebentypus.trivial(968), "a", (7,), {11: MODULUS_11}),
    ]
    for S, T, k, neb, char, ns, moduli in cases:
        N = S * S * T**3
        orbits = fetch_orbits(N, k, char, offline=True)
        result = compare(engine_records(S, T, k, neb, ns, moduli), orbits)
        if not result.consistent or result.mismatches:
            failures.append("%d.%d.%s: %s" % (N, k, char, "; ".join(result.summary_lines())))
    return failures, "27.5.b and 968.6.a consistent offline"


CHECKS = [
    ("1", "level 27 traces", 1.0, check_level27),
    ("2", "level 968 traces", 5.0, check_level968),
    ("3", "dimension tables", 10.0, check_dimension_tables),
    ("4", "global consistency sums", 60.0, check_global_sums),
    ("4g", "Gross sums at T=2,3", None, check_gross_small_levels),
    ("5", "engine vs closed forms", 300.0, check_closed_form_oracle),
    ("6", "root-number bias at T^3", None, check_pq_bias),
    ("7", "property suite", None, check_properties),
    ("8", "LMFDB fixtures", None, check_lmfdb_fixtures),
]


def run_check(number):
    for num, title, limit, fn in CHECKS:
        if num == number:
            return _run(num, title, limit, fn)
    raise KeyError(number)


def run_all():
    return [_run(num, title, limit, fn) for num, title, limit, fn in CHECKS]
