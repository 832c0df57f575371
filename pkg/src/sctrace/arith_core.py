"""Integer and imaginary quadratic arithmetic.

Factorization and primality are delegated to sympy; everything specific to
binary quadratic forms and local squareness lives here.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

from sympy import factorint, isprime
from sympy.ntheory import primitive_root as _sympy_primitive_root
from sympy.ntheory.residue_ntheory import sqrt_mod as _sympy_sqrt_mod


def factorize(n):
    """Return the factorization of ``n`` as a sorted list of (prime, exponent)."""
    if n < 1:
        raise ValueError("factorize expects a positive integer, got %r" % (n,))
    return sorted(factorint(n).items())


def prime_divisors(n):
    return [p for p, _ in factorize(abs(n))] if n else []


def divisors(n):
    """Positive divisors of n in increasing order."""
    out = [1]
    for p, a in factorize(n):
        out = [d * p**j for d in out for j in range(a + 1)]
    return sorted(out)


def is_prime(n):
    return n > 1 and bool(isprime(n))


def is_squarefree(n):
    return n >= 1 and all(e == 1 for _, e in factorize(n))


def omega(n):
    """Number of distinct primes dividing ``n``."""
    return len(prime_divisors(n))


def mobius(n):
    f = factorize(n)
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


def valuation(n, p):
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _require_prime(p):
    if not is_prime(p):
        raise ValueError("%r is not prime" % (p,))


def legendre(a, p):
    """Legendre symbol (a|p); for p = 2 this is 0 or 1 (every odd unit is a square mod 2)."""
    _require_prime(p)
    a %= p
    if a == 0:
        return 0
    if p == 2:
        return 1
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def sqrt_mod_p(a, p):
    """Smallest square root of ``a`` mod ``p``, or None if ``a`` is a non-residue.

    Returns 0 for a divisible by p.
    """
    _require_prime(p)
    a %= p
    if a == 0:
        return 0
    roots = _sympy_sqrt_mod(a, p, all_roots=True)
    return min(roots) if roots else None


@lru_cache(maxsize=None)
def primitive_root(p):
    """Smallest generator of (Z/p)^*; 1 for p = 2."""
    _require_prime(p)
    return 1 if p == 2 else int(_sympy_primitive_root(p))


def is_square_in_Qp(d, p):
    """True iff the nonzero integer ``d`` is a square in Q_p."""
    if d == 0:
        raise ValueError("d must be nonzero")
    v = valuation(d, p)
    if v % 2:
        return False
    u = d // p**v
    if p == 2:
        return u % 8 == 1
    return legendre(u, p) == 1


def is_fundamental_discriminant(d):
    if d == 1 or d == 0:
        return False
    if d % 4 == 1:
        return is_squarefree(abs(d))
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and is_squarefree(abs(m))
    return False


def fundamental_discriminant(delta):
    """Write a negative discriminant as delta = b^2 * d_E; return (d_E, b)."""
    if delta >= 0 or delta % 4 not in (0, 1):
        raise ValueError("expected a negative discriminant = 0,1 mod 4, got %r" % (delta,))
    f = 1
    core = -1
    for p, e in factorize(-delta):
        f *= p ** (e // 2)
        if e % 2:
            core *= p
    # delta = f^2 * core with core squarefree and negative
    if core % 4 == 1:
        return core, f
    return 4 * core, f // 2


def unit_count(d_E):
    """Number of roots of unity in the imaginary quadratic field of discriminant d_E."""
    if d_E == -3:
        return 6
    if d_E == -4:
        return 4
    return 2


@lru_cache(maxsize=None)
def class_number(d_E):
    """Class number by counting reduced primitive forms of discriminant d_E < 0."""
    if d_E >= 0 or not is_fundamental_discriminant(d_E):
        raise ValueError("%r is not a negative fundamental discriminant" % (d_E,))
    D = -d_E
    h = 0
    a = 1
    while 3 * a * a <= D:
        for b in range(-a + 1, a + 1):
            if (b - d_E) % 2:
                continue
            num = b * b + D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, abs(b)), c) != 1:
                continue
            h += 1
        a += 1
    return h


@dataclass(frozen=True)
class QuadFieldData:
    delta: int
    d_E: int
    b: int
    h: int
    w: int
    omega_dE: int

    @property
    def measure(self):
        """The global measure constant 2h / (w * 2^omega(d_E))."""
        return Fraction(2 * self.h, self.w * 2**self.omega_dE)


@lru_cache(maxsize=None)
def quad_field_data(delta):
    d_E, b = fundamental_discriminant(delta)
    return QuadFieldData(delta, d_E, b, class_number(d_E), unit_count(d_E), omega(-d_E))


def is_perfect_square(n):
    return n >= 0 and isqrt(n) ** 2 == n


def squarefree_decomposition(n):
    """Write n >= 1 as a^2 * m with m squarefree; return (a, m)."""
    a, m = 1, 1
    for p, e in factorize(n):
        a *= p ** (e // 2)
        if e % 2:
            m *= p
    return a, m


def inverse_mod(a, m):
    return pow(a, -1, m)
