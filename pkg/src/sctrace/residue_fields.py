"""Finite fields F_p and F_{p^2}, their characters, and the nebentypus.

Character values are handled as exponents x in Q/Z (the value being e(x));
``cyclotomic.e`` turns them into exact numbers.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .arith_core import factorize, is_prime, primitive_root
from .cyclotomic import e

MAX_FP2_PRIME = 500


class Fp2Context:
    """F_{p^2} = F_p[X]/(X^2 + a X + b) with a fixed generator t = class of X.

    Elements are encoded as integers u + v*p for u + v*X.
    """

    def __init__(self, p, modulus=None):
        if not is_prime(p):
            raise ValueError("%r is not prime" % (p,))
        if p > MAX_FP2_PRIME:
            raise ValueError("F_{p^2} tables are limited to p <= %d" % MAX_FP2_PRIME)
        self.p = p
        self.order = p * p - 1
        if modulus is None:
            modulus = _default_modulus(p)
        a, b = modulus[0] % p, modulus[1] % p
        self.modulus = (a, b)
        powers = _powers_of_root(p, a, b)
        if powers is None:
            raise ValueError("X^2 + %dX + %d is not primitive over F_%d" % (a, b, p))
        self.powers = powers
        self.dlog_table = {x: j for j, x in enumerate(powers)}

    def __repr__(self):
        return "Fp2Context(p=%d, modulus=X^2+%dX+%d)" % (self.p, self.modulus[0], self.modulus[1])

    # element helpers

    def elem(self, u, v=0):
        return (u % self.p) + (v % self.p) * self.p

    def parts(self, x):
        return x % self.p, x // self.p

    def mul(self, x, y):
        return _mul(self.p, self.modulus, x, y)

    def pow(self, x, n):
        return self.powers[(self.dlog(x) * n) % self.order]

    def gen_pow(self, j):
        return self.powers[j % self.order]

    def dlog(self, x):
        if x == 0:
            raise ValueError("0 has no discrete logarithm")
        return self.dlog_table[x]

    def frobenius(self, x):
        return self.powers[(self.dlog(x) * self.p) % self.order]

    def min_poly(self, x):
        """(trace, norm) of x over F_p, i.e. min poly X^2 - trace X + norm when x is not in F_p."""
        xp = self.frobenius(x)
        tr = (self.parts(x)[0] + self.parts(xp)[0]) % self.p
        nm = self.parts(self.mul(x, xp))[0]
        return tr, nm

    def in_base_field(self, x):
        return x < self.p

    def roots_of(self, trace, norm):
        """Roots in F_{p^2} minus F_p of X^2 - trace X + norm (empty if it splits mod p)."""
        p = self.p
        trace %= p
        norm %= p
        out = []
        if p == 2:
            cands = range(p, p * p)
        else:
            disc = (trace * trace - 4 * norm) % p
            if disc == 0 or pow(disc, (p - 1) // 2, p) == 1:
                return []
            j = self.dlog(self.elem(disc))
            s = self.powers[j // 2]
            half = pow(2, -1, p)
            su, sv = self.parts(s)
            cands = [self.elem(half * (trace + su), half * sv), self.elem(half * (trace - su), -half * sv)]
        for x in cands:
            if x >= p and self.min_poly(x) == (trace, norm):
                out.append(x)
        return sorted(out, key=self.dlog)


def _mul(p, modulus, x, y):
    a, b = modulus
    u1, v1 = x % p, x // p
    u2, v2 = y % p, y // p
    # (u1 + v1 X)(u2 + v2 X), X^2 = -a X - b
    vv = v1 * v2
    u = (u1 * u2 - b * vv) % p
    v = (u1 * v2 + v1 * u2 - a * vv) % p
    return u + v * p


def _is_irreducible(p, a, b):
    return all((x * x + a * x + b) % p for x in range(p))


def _powers_of_root(p, a, b):
    if not _is_irreducible(p, a, b):
        return None
    order = p * p - 1
    t = p  # the class of X
    powers = [1]
    x = 1
    for _ in range(order - 1):
        x = _mul(p, (a, b), x, t)
        if x == 1:
            return None
        powers.append(x)
    return powers


@lru_cache(maxsize=None)
def _default_modulus(p):
    for a in range(p):
        for b in range(1, p):
            if _powers_of_root(p, a, b) is not None:
                return (a, b)
    raise AssertionError("no primitive quadratic over F_%d" % p)


_CONTEXTS = {}


def build_fp2(p, modulus=None):
    """Cached F_{p^2} context; ``modulus`` is (a, b) for X^2 + aX + b."""
    key = (p, None if modulus is None else (modulus[0] % p, modulus[1] % p))
    if key not in _CONTEXTS:
        _CONTEXTS[key] = Fp2Context(p, modulus)
    return _CONTEXTS[key]


@dataclass(frozen=True)
class FiniteChar:
    """nu_m on F_{p^2}^*, defined by nu_m(t) = e(m / (p^2 - 1))."""

    ctx: Fp2Context = field(compare=False)
    m: int

    def __post_init__(self):
        object.__setattr__(self, "m", self.m % self.ctx.order)

    @property
    def p(self):
        return self.ctx.p

    def exponent(self, x):
        return Fraction(self.m * self.ctx.dlog(x), self.ctx.order)

    def value(self, x):
        return e(self.exponent(x))

    def conjugate_partner(self):
        return FiniteChar(self.ctx, self.m * self.p)

    def restriction_exponent(self):
        """nu restricted to F_p^* sends t^(p+1) to e(m / (p - 1))."""
        return Fraction(self.m, self.p - 1) % 1


def char_value(nu, x):
    if x == 0:
        raise ValueError("characters are evaluated on nonzero elements")
    return nu.value(x)


def char_order(nu):
    return nu.ctx.order // gcd(nu.m, nu.ctx.order)


def is_primitive(nu):
    return nu.m % (nu.p + 1) != 0


@lru_cache(maxsize=None)
def fp_dlog_table(p):
    """dlog with respect to the smallest primitive root of p."""
    g = primitive_root(p)
    table = {}
    x = 1
    for j in range(p - 1):
        table[x] = j
        x = x * g % p
    return table


def fp_dlog(p, u):
    u %= p
    if u == 0:
        raise ValueError("0 has no discrete logarithm mod %d" % p)
    return fp_dlog_table(p)[u]


class Nebentypus:
    """Dirichlet character of level N and conductor dividing the product of primes of N.

    ``exponents[p] = a`` means the local character chi_p(g_p) = e(a/(p-1)) on the
    smallest primitive root g_p mod p.
    """

    def __init__(self, N, exponents=None):
        self.N = N
        self.primes = [p for p, _ in factorize(N)] if N > 1 else []
        exponents = dict(exponents or {})
        for p in exponents:
            if p not in self.primes:
                raise ValueError("nebentypus exponent given at %d which does not divide %d" % (p, N))
        if exponents.get(2, 0):
            raise ValueError("the local character at 2 must be trivial")
        self.exponents = {p: exponents.get(p, 0) % (p - 1) if p > 2 else 0 for p in self.primes}

    def __eq__(self, other):
        return isinstance(other, Nebentypus) and (self.N, self.exponents) == (other.N, other.exponents)

    def __hash__(self):
        return hash((self.N, tuple(sorted(self.exponents.items()))))

    def __repr__(self):
        nz = {p: a for p, a in self.exponents.items() if a}
        return "Nebentypus(N=%d, %s)" % (self.N, nz or "trivial")

    @classmethod
    def trivial(cls, N):
        return cls(N, {})

    @property
    def is_trivial(self):
        return not any(self.exponents.values())

    def inverse(self):
        return Nebentypus(self.N, {p: -a for p, a in self.exponents.items()})

    def local_exponent(self, p, u):
        """Exponent of chi_p(u) for u a unit mod p."""
        if p == 2:
            if u % 2 == 0:
                raise ValueError("not a unit mod 2")
            return Fraction(0)
        return Fraction(self.exponents[p] * fp_dlog(p, u), p - 1) % 1

    def local_value(self, p, u):
        return e(self.local_exponent(p, u))

    def is_locally_trivial(self, p):
        return self.exponents[p] == 0

    def local_order(self, p):
        return 1 if p == 2 else (p - 1) // gcd(self.exponents[p], p - 1)

    def omega_p_at_p_exponent(self, p):
        """Exponent of omega_p(p) = prod over other l | N of chi_l(p^-1)."""
        if p not in self.primes:
            raise ValueError("%d does not divide the level %d" % (p, self.N))
        total = Fraction(0)
        for l in self.primes:
            if l != p:
                total -= self.local_exponent(l, p)
        return total % 1

    def omega_prime_exponent(self, u):
        if gcd(u, self.N) != 1:
            raise ValueError("%d is not coprime to the level %d" % (u, self.N))
        return sum((self.local_exponent(p, u) for p in self.primes), Fraction(0)) % 1

    def label(self):
        nz = ["%d:%d" % (p, a) for p, a in sorted(self.exponents.items()) if a]
        return ",".join(nz) if nz else "trivial"


def omega_p_at_p(neb, p):
    return e(neb.omega_p_at_p_exponent(p))


def eval_omega_prime(neb, u):
    return e(neb.omega_prime_exponent(u))


def parity(neb):
    """omega'(-1) as +1 or -1."""
    return 1 if neb.omega_prime_exponent(-1) == 0 else -1


def quadratic_character(N, p):
    """The Nebentypus of level N whose only nontrivial component is the quadratic character mod p."""
    if p == 2:
        raise ValueError("no quadratic character of conductor 2")
    return Nebentypus(N, {p: (p - 1) // 2})
