"""Global assembly of the trace of T_n on S_k(sigma) from local orbital integrals."""
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .arith_core import divisors, is_perfect_square, is_square_in_Qp, legendre, prime_divisors
from .cyclotomic import CycNumber, e, format_cyc, sqrt_rational
from .local_data import DepthZero, enumerate_tuples, format_root_of_unity, global_root_number, validate_tuple
from .orbital import (
    GammaClass,
    double_root,
    measure_factor,
    phi_ell,
    phi_infty,
    phi_p_depth_zero,
    phi_p_simple_ramified,
    phi_p_simple_unramified,
    ramified_primes,
)


class InvalidTuple(ValueError):
    def __init__(self, problems):
        super().__init__("; ".join(problems))
        self.problems = problems


class InternalConsistencyError(AssertionError):
    """A computed quantity violates a hard structural invariant."""


def _check_inputs(tup, k, n):
    if k <= 2:
        raise ValueError("weight must exceed 2")
    if n < 1:
        raise ValueError("n must be positive")
    if math.gcd(n, tup.N) != 1:
        raise ValueError("n=%d shares a factor with the level %d" % (n, tup.N))


# relevant gamma

def _survives(gamma, tup, k):
    if gamma.r == 0 and k % 2:
        return False
    for p in prime_divisors(tup.N):
        if is_square_in_Qp(gamma.delta, p):
            return False
    for p in prime_divisors(tup.T):
        t = tup.rep_at(p).t
        if gamma.M % p == 0:
            # -p t / (n M) must be a square mod p
            if p != 2 and legendre(-t * pow(gamma.det // p, -1, p), p) != 1:
                return False
        elif not double_root(gamma, p):
            return False
    return True


def relevant_gammas(tup, n, k):
    """[(gamma, weight)] over M | T and r >= 0 with r^2 M < 4n, after the vanishing filters."""
    _check_inputs(tup, k, n)
    out = []
    for M in divisors(tup.T):
        r = 0
        while r * r * M < 4 * n:
            gamma = GammaClass(n, M, r)
            if _survives(gamma, tup, k):
                out.append((gamma, Fraction(1, 2) if r == 0 else Fraction(1)))
            r += 1
    if n == 1:
        allowed = glist_table(tup.T)
        extra = [str(g) for g, _ in out if (g.M, g.r) not in allowed]
        if extra:
            raise InternalConsistencyError("relevant gamma outside the n=1 table: %s" % extra)
    return out


def glist_table(T):
    """{(M, r)} of the gamma that can contribute for n = 1 at T^3."""
    if T == 1:
        return {(1, 0), (1, 1)}
    if T == 2:
        return {(2, 0), (1, 0), (2, 1)}
    if T == 3:
        return {(3, 0), (3, 1), (1, 1)}
    if T % 2 == 0:
        return {(T, 0), (T // 2, 0)}
    return {(T, 0)}


# identity term

def omega_prime(neb, u):
    return e(neb.omega_prime_exponent(u)) if neb.N > 1 else CycNumber.one()


def main_term(tup, k):
    """(k-1)/12 times the product of formal degrees."""
    total = Fraction(k - 1, 12)
    for p in prime_divisors(tup.S):
        total *= p - 1
    for p in prime_divisors(tup.T):
        total *= Fraction(p * p - 1, 2)
    return total


def identity_term(tup, k, n):
    _check_inputs(tup, k, n)
    if not is_perfect_square(n):
        return CycNumber.zero()
    root = math.isqrt(n)
    return omega_prime(tup.neb, root).conj().scale(main_term(tup, k))


# global orbital integrals

@dataclass
class GammaTerm:
    gamma: GammaClass
    weight: Fraction
    measure: Fraction
    phi_infty: CycNumber
    local: dict
    unramified: dict
    product: CycNumber

    def to_json(self):
        return {
            "gamma": str(self.gamma),
            "M": self.gamma.M,
            "r": self.gamma.r,
            "delta": self.gamma.delta,
            "weight": str(self.weight),
            "measure": str(self.measure),
            "phi_infty": self.phi_infty.to_json(),
            "local": {str(p): v.to_json() for p, v in self.local.items()},
            "unramified": {str(l): v for l, v in self.unramified.items()},
            "product": self.product.to_json(),
        }


def local_factor(gamma, tup, p):
    rep = tup.rep_at(p)
    if isinstance(rep, DepthZero):
        return phi_p_depth_zero(gamma, rep, tup.neb)
    if gamma.M % p == 0:
        return phi_p_simple_ramified(gamma, rep, tup.neb)
    return phi_p_simple_unramified(gamma, rep, tup.neb)


def gamma_term(gamma, weight, tup, k):
    measure = measure_factor(gamma)
    inf = phi_infty(gamma, k)
    local = {p: local_factor(gamma, tup, p) for p in sorted(prime_divisors(tup.N))}
    unram = {l: phi_ell(gamma, l, tup.N) for l in ramified_primes(gamma, tup.N)}
    product = inf.scale(measure)
    for v in local.values():
        product = product * v
    for v in unram.values():
        product = product.scale(v)
    return GammaTerm(gamma, weight, measure, inf, local, unram, product)


def global_orbital(gamma, tup, k, n):
    """Phi(gamma, f) = m Phi_inf prod_{p|N} Phi_p prod_{l|Delta, l not | N} Phi_l."""
    _check_inputs(tup, k, n)
    if gamma.n != n:
        raise ValueError("gamma has n=%d, expected %d" % (gamma.n, n))
    if any(is_square_in_Qp(gamma.delta, p) for p in prime_divisors(tup.N)):
        # supercuspidal coefficients have vanishing hyperbolic orbital integrals
        return CycNumber.zero()
    return gamma_term(gamma, Fraction(1), tup, k).product


# trace

def n_power(n, k):
    """n^{k/2 - 1} exactly."""
    if k % 2 == 0:
        return CycNumber.rational(Fraction(n) ** ((k - 2) // 2))
    return sqrt_rational(n).scale(Fraction(n) ** ((k - 3) // 2))


@dataclass
class TraceReport:
    k: int
    n: int
    tuple: object
    identity_term: CycNumber
    gamma_terms: list = field(default_factory=list)
    total: CycNumber = None
    total_float: complex = 0j
    rationalized: Fraction = None

    def to_json(self):
        return {
            "level": self.tuple.N,
            "weight": self.k,
            "n": self.n,
            "tuple": self.tuple.to_json(self.k),
            "label": self.tuple.label,
            "identity_term": self.identity_term.to_json(),
            "gamma_terms": [g.to_json() for g in self.gamma_terms],
            "total": self.total.to_json(),
            "total_string": format_cyc(self.total),
            "total_float": [self.total_float.real, self.total_float.imag],
            "rationalized": None if self.rationalized is None else str(self.rationalized),
        }

    def csv_row(self):
        return [
            self.tuple.N,
            self.k,
            self.tuple.label,
            self.n,
            format_cyc(self.total),
            "%.12g%+.12gj" % (self.total_float.real, self.total_float.imag),
        ]


CSV_HEADER = ["level", "weight", "tuple", "n", "trace_exact", "trace_float"]


def trace_hecke(tup, k, n=1):
    problems = validate_tuple(tup, k)
    if problems:
        raise InvalidTuple(problems)
    ident = identity_term(tup, k, n)
    terms = [gamma_term(g, w, tup, k) for g, w in relevant_gammas(tup, n, k)]
    inner = ident
    for t in terms:
        inner = inner + t.product.scale(t.weight)
    total = n_power(n, k) * inner
    total_float = total.check_shadow()
    return TraceReport(k, n, tup, ident, terms, total, total_float, total.as_rational())


def dimension(tup, k):
    report = trace_hecke(tup, k, 1)
    q = report.rationalized
    if q is None or q.denominator != 1 or q < 0:
        raise InternalConsistencyError(
            "dimension for %s at k=%d is %s, not a nonnegative integer" % (tup.label, k, format_cyc(report.total))
        )
    return int(q)


def root_number_key(eps):
    """Root number as an exponent in Q/Z."""
    for j in range(4):
        if eps == e(Fraction(j, 4)):
            return Fraction(j, 4)
    for d in range(1, 25):
        for j in range(d):
            if eps == e(Fraction(j, d)):
                return Fraction(j, d)
    raise InternalConsistencyError("root number %s is not a root of unity of small order" % format_cyc(eps))


def bias_partition(S, T, k, neb, moduli=None):
    """{root number exponent: total dimension} over all tuples at S^2 T^3."""
    totals = {}
    for tup in enumerate_tuples(S, T, neb, moduli):
        if validate_tuple(tup, k):
            continue
        eps = global_root_number(k, tup)
        if eps is None:
            raise ValueError("root number unavailable for %s (depth-zero component with nontrivial character)" % tup.label)
        key = root_number_key(eps)
        totals[key] = totals.get(key, 0) + dimension(tup, k)
    return dict(sorted(totals.items()))


def format_partition(totals):
    return {format_root_of_unity(x): d for x, d in totals.items()}
