"""Closed-form dimension, bias and orbital-integral formulas.

Each function works from the representation parameters alone (t, zeta, m) and
never calls the trace engine, so the two can be compared against each other.
Root numbers and characters of F_{p^2}^* are handled through exponents:
nu_m(g) = e(m / (p^2 - 1)) for a generator g, so nu_m(g^j) = e(j m / (p^2 - 1)).
"""
import math
from fractions import Fraction
from itertools import product

from sympy.functions.combinatorial.numbers import kronecker_symbol

from .arith_core import is_squarefree, legendre, mobius, omega, prime_divisors
from .cyclotomic import CycNumber, I, e


def _primes(n):
    return prime_divisors(n)


def _cond(flag, value):
    """A subscripted constant: value if flag holds, else 1."""
    return value if flag else 1


# class numbers via the analytic class number formula

def field_discriminant(n):
    """Discriminant of Q(sqrt(-n)) for squarefree n >= 1."""
    if not is_squarefree(n):
        raise ValueError("%d is not squarefree" % n)
    return -n if n % 4 == 3 else -4 * n


def class_number_analytic(d):
    """h(d) = -(w / 2|d|) sum_{0<a<|d|} (d/a) a for a negative fundamental discriminant d."""
    if d >= 0:
        raise ValueError("need a negative discriminant")
    w = {-3: 6, -4: 4}.get(d, 2)
    s = sum(kronecker_symbol(d, a) * a for a in range(1, -d))
    h = Fraction(-w * s, 2 * -d)
    assert h.denominator == 1 and h > 0
    return int(h)


def h_of(n):
    """Class number of Q(sqrt(-n)), n squarefree."""
    return class_number_analytic(field_discriminant(n))


# small constants

def b_T(T):
    if T % 2 == 0:
        return Fraction(1, 4)
    if T % 4 == 1:
        return Fraction(1, 2)
    return Fraction(1) if T % 8 == 7 else Fraction(2)


def j_M(M):
    if M % 4 == 1:
        return Fraction(1, 4)
    return Fraction(-3, 2) if M % 8 == 3 else Fraction(0)


def c_T(T):
    if T % 4 in (1, 2):
        return Fraction(1, 2)
    return Fraction(1) if T % 8 == 7 else Fraction(2)


def w_T(T):
    return 2 * b_T(T)


def z_M(M):
    if M % 4 == 1:
        return Fraction(1, 2)
    return Fraction(-3) if M % 8 == 3 else Fraction(0)


def g8(k):
    if k % 2:
        raise ValueError("k must be even")
    return -1 if k % 8 in (0, 2) else 1


def g6(k):
    return {1: Fraction(0), 0: Fraction(-1, 6), 2: Fraction(-1, 6), 3: Fraction(1, 2), 4: Fraction(1, 3), 5: Fraction(-1, 2)}[k % 6]


def c3(k):
    return Fraction(1, 3) + k // 3 - Fraction(k, 3)


def b_k(k):
    if k % 6 == 0:
        return 1
    return -1 if k % 6 == 2 else 0


def D4(S):
    return 0 if any(p % 4 == 1 for p in _primes(S)) else 1


def D3(S):
    return 0 if any(p % 3 == 1 for p in _primes(S)) else 1


def B_nu(p, m):
    """B(nu_m) = -2 if the order of nu_m divides (p+1)/3, else 1 (p = 2 mod 3)."""
    if p % 3 != 2:
        raise ValueError("B is defined for p = 2 mod 3")
    if p == 2:
        return 1
    order = (p * p - 1) // math.gcd(m, p * p - 1)
    return -2 if ((p + 1) % 3 == 0 and ((p + 1) // 3) % order == 0) else 1


def depth_zero_root_number(p, m):
    """Root number of the depth-zero supercuspidal with trivial central character from nu_m."""
    if p == 2:
        return -1
    r = (p * p - 1) // math.gcd(m, p * p - 1)
    return -((-1) ** ((p + 1) // r))


# level T^3

def _simple_params(tup):
    return {rep.p: (rep.t, rep.zeta_exp) for rep in tup.reps}


def _real_sign(x):
    """+1 or -1 from a zeta exponent in {0, 1/2}."""
    x = Fraction(x) % 1
    if x == 0:
        return 1
    if x == Fraction(1, 2):
        return -1
    raise ValueError("expected a real root number, got exponent %s" % x)


def delta_i(i, T, ts):
    """Delta_1 or Delta_2 of the t-tuple."""
    if i == 2 and T % 2:
        return 0
    for p in _primes(T):
        if p == 2:
            continue
        inv = pow(T // p, -1, p)
        val = (-(2 ** (i - 1)) * ts[p] * inv) % p
        if legendre(val, p) != 1:
            return 0
    return 1


def dim_T3(tup, k):
    """Dimension at T^3, T > 3, trivial central characters."""
    T = tup.T
    if tup.S != 1 or T <= 3:
        raise ValueError("dim_T3 needs S = 1 and T > 3")
    main = Fraction(k - 1, 12)
    for p in _primes(T):
        main *= Fraction(p * p - 1, 2)
    if k % 2:
        return main
    params = _simple_params(tup)
    ts = {p: t for p, (t, _) in params.items()}
    eps = (-1) ** (k // 2)
    for _, z in params.values():
        eps *= _real_sign(z)
    total = main + delta_i(1, T, ts) * eps * b_T(T) * h_of(T)
    if T % 2 == 0:
        M = T // 2
        zeta2 = _real_sign(params[2][1])
        total += Fraction(delta_i(2, T, ts) * eps * j_M(M) * h_of(M), zeta2 * _cond(M == 3, 3))
    return total


def dim_N8(k, zeta):
    """zeta = +1 or -1."""
    if k % 2:
        return 0
    if k % 8 in (0, 2):
        return k // 8
    eps = (-1) ** (k // 2) * zeta
    return k // 8 + (1 + eps) // 2


def dim_N27(k, t, zeta_exp):
    """t = +1 or -1, zeta = e(zeta_exp) with zeta^2 = omega_3(t)."""
    t = 1 if t % 3 == 1 else -1
    if t == 1 or k % 6 == 1:
        return k // 3
    eps_exp = (Fraction(k, 4) + Fraction(zeta_exp)) % 1
    eps = _real_sign(eps_exp)
    a = k % 6
    if a in (0, 3):
        return k // 3 + (eps - 1) // 2
    if a == 2:
        return k // 3 + (eps + 1) // 2
    if a == 4:
        return k // 3 + eps
    return k // 3 + (1 - eps) // 2


def dim_new_8(k):
    return k // 4


def dim_new_27(k):
    return k - 1 + k // 3


def dimnew(T, k):
    total = Fraction(k - 1, 12)
    for p in _primes(T):
        total *= (p - 1) ** 2 * (p + 1)
    return total


def gross(T, k):
    total = Fraction(k - 1, 12)
    for p in _primes(T):
        total *= p * p - 1
    return total


def pq_bias(T, k):
    """{+1: |H^+|, -1: |H^-|} at level T^3, T > 3 squarefree, k even."""
    half = dimnew(T, k) / 2
    phi = math.prod(p - 1 for p in _primes(T))
    diff = c_T(T) * h_of(T) * phi / 2
    return {1: half + diff, -1: half - diff}


def identity_nonintegral(T, k):
    """True exactly in the families where (k-1)/12 prod (p^2-1)/2 is not an integer (S = n = 1)."""
    if T == 2:
        return k % 8 != 1
    if T == 3:
        return k % 3 != 1
    if T % 2 == 0 and k % 2 == 0:
        odd = T // 2
        return odd > 1 and is_squarefree(odd) and len(_primes(odd)) == 1 and odd % 8 in (3, 5)
    return False


# global orbital integrals at T^3

def _y_sum(neb, mod, targets):
    """sum of omega'(y) over y mod `mod` with y^2 = targets[p] mod p (odd p) and y odd."""
    primes = _primes(mod) if mod > 1 else []
    choices = []
    for p in primes:
        if p == 2:
            choices.append([(2, 1)])
        else:
            choices.append([(p, y) for y in range(1, p) if (y * y - targets[p]) % p == 0])
    total = CycNumber.zero()
    for combo in product(*choices):
        y = _crt(combo)
        # omega' has conductor dividing `mod`, so only the components at p | mod matter
        total = total + e(sum((neb.local_exponent(p, y) for p in primes), Fraction(0)))
    return total


def _crt(pairs):
    y, m = 0, 1
    for p, r in pairs:
        # solve y' = y mod m, y' = r mod p
        s = ((r - y) * pow(m, -1, p)) % p
        y, m = y + m * s, m * p
    return y if y else 1


def _eps(tup, k):
    exp = Fraction(k, 4) + sum((rep.zeta_exp for rep in tup.reps), Fraction(0))
    return e(exp)


def phi_e1(tup, k):
    """Phi([[0,-T],[1,0]]) at T^3, k even, arbitrary nebentypus of conductor dividing T."""
    T = tup.T
    if k % 2:
        return CycNumber.zero()
    targets = {}
    for rep in tup.reps:
        if rep.p != 2:
            targets[rep.p] = (-rep.t * pow(T // rep.p, -1, rep.p)) % rep.p
            if legendre(targets[rep.p], rep.p) != 1:
                return CycNumber.zero()
    const = Fraction(_cond(T % 8 == 7, 2) * _cond(T % 8 == 3, 4) * h_of(T), _cond(T == 3, 3) * 2 ** omega(T))
    return (_eps(tup, k).conj() * _y_sum(tup.neb, T, targets)).scale(const)


def phi_e1_trivial(tup, k):
    """Trivial central character form: eps h(-T) w_T / 3_{T=3}."""
    if k % 2:
        return Fraction(0)
    for rep in tup.reps:
        if rep.p != 2 and legendre(-rep.t * pow(tup.T // rep.p, -1, rep.p), rep.p) != 1:
            return Fraction(0)
    eps = _real_sign(Fraction(k, 4) + sum((r.zeta_exp for r in tup.reps), Fraction(0)))
    return eps * h_of(tup.T) * w_T(tup.T) / _cond(tup.T == 3, 3)


def phi_e2(tup, k):
    """Phi([[0,-M],[1,0]]) at T^3 with T = 2M, k even."""
    T = tup.T
    if T % 2 or k % 2:
        raise ValueError("e2 needs T even and k even")
    M = T // 2
    targets = {}
    for rep in tup.reps:
        if rep.p != 2:
            targets[rep.p] = (-rep.t * pow(M // rep.p, -1, rep.p)) % rep.p
            if legendre(targets[rep.p], rep.p) != 1:
                return CycNumber.zero()
    zeta2 = e(tup.rep_at(2).zeta_exp)
    const = Fraction(h_of(M)) * z_M(M) / (_cond(M == 1, 2) * _cond(M == 3, 3) * 2 ** omega(M))
    # eps-bar * zeta_2 (the same as eps-bar / zeta_2 whenever zeta_2 = +-1)
    return (_eps(tup, k).conj() * zeta2 * _y_sum(tup.neb, M, targets)).scale(const)


def phi_2T(k, zeta):
    """Phi([[0,-2],[1,2]]) at level 8, zeta = +1 or -1."""
    eps = (-1) ** (k // 2) * zeta
    return Fraction(eps * g8(k), 4)


def phi_g3a(k, t):
    t = 1 if t % 3 == 1 else -1
    return Fraction(t, _cond(t == -1, 2)) * c3(k)


def phi_g3b(k, t, zeta_exp):
    t = 1 if t % 3 == 1 else -1
    if t == 1:
        return CycNumber.zero()
    return (I**k * e(zeta_exp)).scale(g6(k))


# level S^2

def _nu_bar_sum(p, m, j_num, j_den):
    """-conj(nu(x)) - conj(nu^p(x)) for x = g^{(p^2-1) j_num / j_den}."""
    a = Fraction(m * j_num, j_den)
    return -(e(-a)) - e(-a * p)


def _A1(S, k, ms):
    if k % 2:
        return CycNumber.zero()
    out = CycNumber.rational(Fraction((-1) ** (S + 1 + k // 2), 4))
    for p in _primes(S):
        if p == 2:
            continue
        if p % 4 != 3:
            return CycNumber.zero()
        # alpha = g^{(p^2-1)/4}
        out = out * _nu_bar_sum(p, ms[p], 1, 4)
    return out


def _A2(S, k, ms, neb):
    if k % 3 == 1:
        return CycNumber.zero()
    sign = -1 if k % 6 in (2, 3) else 1
    out = CycNumber.rational(Fraction(sign, 3))
    for p in _primes(S):
        if p == 3:
            out = -(out * neb.local_value(3, -1))
            continue
        if p % 3 != 2:
            return CycNumber.zero()
        # beta has order 6 (order 3 when p = 2)
        out = out * (_nu_bar_sum(p, ms[p], 1, 3) if p == 2 else _nu_bar_sum(p, ms[p], 1, 6))
    return out


def dim_S2(tup, k):
    """Dimension at S^2 with arbitrary nebentypus of conductor dividing S."""
    S = tup.S
    if tup.T != 1:
        raise ValueError("dim_S2 needs T = 1")
    ms = {rep.p: rep.m for rep in tup.reps}
    main = Fraction(k - 1, 12) * math.prod(p - 1 for p in _primes(S))
    return _A1(S, k, ms) + _A2(S, k, ms, tup.neb) + CycNumber.rational(main)


def dim_S2_trivial(S, ms, k):
    """Trivial-character form; ms = {p: m} with nu_m the character at p."""
    if k % 2:
        raise ValueError("k must be even")
    eps = (-1) ** (k // 2)
    for p in _primes(S):
        eps *= depth_zero_root_number(p, ms[p])
    odd = [p for p in _primes(S) if p != 2]
    total = Fraction(k - 1, 12) * math.prod(p - 1 for p in _primes(S))
    total += D4(S) * Fraction(eps, 4) * 2 ** len(odd)
    if D3(S):
        prod_b = math.prod(B_nu(p, ms[p]) for p in _primes(S) if p != 3)
        total += Fraction(b_k(k) * (-1) ** (S % 3 == 0), 3) * prod_b
    return total


def bias_terms(S):
    """(B^+, B^-, |H^+|, |H^-|) for squarefree S > 1."""
    return B_plus_minus(S) + H_plus_minus(S)


def B_plus_minus(S):
    if not D3(S):
        raise ValueError("B(S) is stated for D3(S) = 1")
    if S % 2 == 0:
        if S == 2:
            return (0, 1)
        bp, bm = B_plus_minus(S // 2)
        return (bm, bp)
    if S % 3 == 0:
        return (1, 0) if S == 3 else B_plus_minus(S // 3)
    ps = _primes(S)
    w = len(ps)
    if any(p % 12 == 5 for p in ps):
        plus = 2 ** (w - 1)
    else:
        plus = 2**w if w % 2 == 0 else 0
    return (plus, 2**w - plus)


def H_plus_minus(S):
    base = Fraction(1, 2) * math.prod(Fraction(p - 1, 2) for p in _primes(S) if p != 2)
    if not D4(S):
        return (base, base)
    d = Fraction((-1) ** (S % 2 == 0), 2)
    return (base + d, base - d)


def omega0(Sp):
    if Sp == 1:
        return 1
    ps = _primes(Sp)
    if any(p % 12 == 5 for p in ps):
        return 0
    return 2 ** len(ps)


def sbias(S, k):
    """dim S_k^min(S^2)^+ - dim S_k^min(S^2)^-, k even."""
    if k % 2:
        raise ValueError("k must be even")
    ps = _primes(S)
    phi = math.prod(p - 1 for p in ps)
    dm = D4(S) * (-1) ** (k // 2 + (S % 2 == 0)) * Fraction(k - 1, 12) * phi
    da1 = Fraction(D4(S), 4) * phi
    da2 = Fraction(0)
    if k % 6 in (0, 2):
        sp = S // math.gcd(S, 6)
        da2 = Fraction(D3(S), 3) * (-1) ** (k % 12 in (6, 8)) * mobius(S) * omega0(sp)
    return dm + da1 + da2


def sbias_predicted_sign(S, k):
    """Sign of the S^2 bias from the vanishing/sign statements; None where only exceptions apply."""
    d4, d3 = D4(S), D3(S)
    if (d4 == 0 and d3 == 0) or any(p % 12 == 5 for p in _primes(S)) or (d4 == 0 and k % 6 == 4):
        return 0
    if d4 == 0:
        return (-1) ** (k % 12 in (6, 8)) * mobius(S)
    if k == 4:
        return 1 if S % 2 else 0
    if (S, k) in ((2, 8), (3, 6)):
        return None
    return (-1) ** ((S % 2 == 0) + k // 2)


def smin_dim(S, k):
    if k % 2:
        raise ValueError("k must be even")
    odd = [p for p in _primes(S) if p != 2]
    sp = S // math.gcd(S, 6)
    total = Fraction(k - 1, 12) * math.prod(Fraction((p - 1) ** 2, 2) for p in odd)
    total += Fraction(D4(S), 4) * (-1) ** ((S % 2 == 0) + k // 2) * 2 ** len(odd)
    total += Fraction(D3(S) * b_k(k), 3) * (-1) ** (S % 3 == 0) * 2 ** len(_primes(sp))
    return total

