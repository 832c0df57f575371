"""Local orbital integrals of the test functions and the global measure factor.

gamma = [[0, -nM], [1, rM]] throughout.  Every evaluator returns an exact value
(CycNumber, or an int for the unramified places l not dividing N).
"""
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

from .arith_core import (
    inverse_mod,
    is_square_in_Qp,
    prime_divisors,
    quad_field_data,
    sqrt_mod_p,
    valuation,
)
from .cyclotomic import CycNumber, e, sqrt_rational
from .local_data import DepthZero, Simple


class NotElliptic(ValueError):
    """gamma is hyperbolic at a place where the evaluator needs it elliptic."""


@dataclass(frozen=True)
class GammaClass:
    n: int
    M: int
    r: int

    def __post_init__(self):
        if self.delta >= 0:
            raise NotElliptic("gamma(n=%d, M=%d, r=%d) is not elliptic over R" % (self.n, self.M, self.r))

    @property
    def trace(self):
        return self.r * self.M

    @property
    def det(self):
        return self.n * self.M

    @property
    def delta(self):
        return self.trace**2 - 4 * self.det

    @cached_property
    def quad(self):
        return quad_field_data(self.delta)

    @property
    def matrix(self):
        return ((0, -self.det), (1, self.trace))

    def __str__(self):
        return "[[0,%d],[1,%d]]" % (-self.det, self.trace)

    def char_poly_value(self, x):
        return x * x - self.trace * x + self.det


# archimedean place

def lucas_v(trace, det, j):
    """V_j with V_1 = 1, V_2 = trace, V_j = trace V_{j-1} - det V_{j-2} (V_0 = 0)."""
    a, b = 0, 1
    for _ in range(j - 1):
        a, b = b, trace * b - det * a
    return b if j >= 1 else 0


def phi_infty(gamma, k):
    """-sin((k-1) theta) / sin(theta) = -V_{k-1} / det^{(k-2)/2}, exactly."""
    if k <= 2:
        raise ValueError("weight must exceed 2")
    v = lucas_v(gamma.trace, gamma.det, k - 1)
    if k % 2 == 0:
        return CycNumber.rational(Fraction(-v, gamma.det ** ((k - 2) // 2)))
    # det^{(k-2)/2} = det^{(k-3)/2} * sqrt(det)
    return sqrt_rational(gamma.det).invert().scale(Fraction(-v, gamma.det ** ((k - 3) // 2)))


# places l not dividing N

def phi_ell(gamma, ell, N=None):
    """Orbital integral of the Hecke test function at l not dividing N."""
    if N is not None and N % ell == 0:
        raise ValueError("%d divides the level" % ell)
    v = valuation(gamma.delta, ell)
    if is_square_in_Qp(gamma.delta, ell):
        return ell ** (v // 2)
    q = gamma.quad
    e_ram = 2 if q.d_E % ell == 0 else 1
    total = Fraction(1)
    for j in range(1, valuation(q.b, ell) + 1 if q.b % ell == 0 else 1):
        total += ell**j * (1 + Fraction(2 - e_ram, ell))
    out = e_ram * total
    assert out.denominator == 1
    return int(out)


def measure_factor(gamma):
    """2 h(E) / (w_E 2^omega(d_E))."""
    return gamma.quad.measure


# simple supercuspidals

def phi_p_simple_ramified(gamma, rep, neb):
    """p | M: the ramified component of the support."""
    p = rep.p
    if not isinstance(rep, Simple):
        raise TypeError("expected a simple supercuspidal")
    if gamma.M % p:
        raise ValueError("%d does not divide M=%d" % (p, gamma.M))
    u = gamma.det // p
    v = gamma.trace // p
    y = sqrt_mod_p(-rep.t * inverse_mod(u, p), p)
    if y is None:
        return CycNumber.zero()
    zbar = e(-rep.zeta_exp)
    term = e(Fraction(-y * v, p)) * e(neb.local_exponent(p, y))
    if p != 2:
        term = term + e(Fraction(y * v, p)) * e(neb.local_exponent(p, -y))
    return zbar * term


@lru_cache(maxsize=None)
def _n_gamma_counts(trace, det, p, n):
    """Counts N(c, n) for c mod p, as a tuple indexed by c."""
    mod = p ** (n + 1)
    pn = p**n
    counts = [0] * p
    for b in range(mod):
        val = (b * b - trace * b + det) % mod
        if val % pn == 0:
            counts[val // pn] += 1
    return tuple(counts)


def count_N_gamma(gamma, p, c, n):
    """#{b mod p^{n+1} : P_gamma(b) = c p^n mod p^{n+1}}."""
    if n < 1:
        raise ValueError("n must be positive")
    mod = p ** (n + 1)
    return _n_gamma_counts(gamma.trace % mod, gamma.det % mod, p, n)[c % p]


def n_gamma_table(gamma, p):
    """{n: counts} for every n >= 1 with some N(c, n) nonzero."""
    if is_square_in_Qp(gamma.delta, p):
        raise NotElliptic("%s is hyperbolic at p=%d" % (gamma, p))
    table = {}
    n = 1
    cap = valuation(gamma.delta, p) + 4
    while True:
        counts = tuple(count_N_gamma(gamma, p, c, n) for c in range(p))
        if not any(counts):
            return table
        if n > cap:
            raise AssertionError("N_gamma does not terminate for %s at p=%d" % (gamma, p))
        table[n] = counts
        n += 1


def double_root(gamma, p):
    """z with P_gamma = (X - z)^2 mod p, or None."""
    if p == 2:
        return gamma.det % 2 if gamma.trace % 2 == 0 else None
    if gamma.delta % p:
        return None
    return gamma.trace * inverse_mod(2, p) % p


def phi_p_simple_unramified(gamma, rep, neb):
    """p | T/M: the unramified component of the support."""
    p = rep.p
    if not isinstance(rep, Simple):
        raise TypeError("expected a simple supercuspidal")
    if gamma.M % p == 0:
        raise ValueError("%d divides M=%d" % (p, gamma.M))
    z = double_root(gamma, p)
    if not z:
        return CycNumber.zero()
    zinv = inverse_mod(z, p)
    total = CycNumber.zero()
    for n, counts in n_gamma_table(gamma, p).items():
        for c, count in enumerate(counts):
            if not count:
                continue
            ksum = CycNumber.zero()
            for y in range(1, p):
                x = y * c * zinv
                if n == 1:
                    x -= rep.t * inverse_mod(y * z, p)
                ksum = ksum + e(Fraction(x % p, p))
            total = total + ksum.scale(count)
    return (e(-neb.local_exponent(p, z)) * total).scale(Fraction(1, p))


# depth zero

def phi_p_depth_zero(gamma, rep, neb):
    """p | S: trace of the cuspidal type integrated over the class of gamma."""
    p = rep.p
    if not isinstance(rep, DepthZero):
        raise TypeError("expected a depth-zero supercuspidal")
    z = double_root(gamma, p)
    if z is not None:
        if z == 0:
            raise ValueError("gamma is not a unit at p=%d" % p)
        wbar = e(-neb.local_exponent(p, z))
        s = 0
        for counts in n_gamma_table(gamma, p).values():
            s += (p - 1) * counts[0] - sum(counts[1:])
        return -wbar + wbar.scale(Fraction(s, p))
    ctx = rep.nu.ctx
    roots = ctx.roots_of(gamma.trace, gamma.det)
    if not roots:
        raise NotElliptic("%s is split at p=%d" % (gamma, p))
    x = roots[0]
    return -(rep.nu.value(x).conj()) - rep.nu.value(ctx.frobenius(x)).conj()


# brute-force lattice count

def _canonical_vertex(ell, a, b, c):
    """Normalize the lattice with basis [[l^a, b], [0, l^c]] up to homothety."""
    b %= ell**a
    s = min(a, c, valuation(b, ell) if b else a)
    a, c = a - s, c - s
    return a, (b // ell**s) % ell**a, c


def _fixes(gamma, ell, vertex):
    a, b, c = vertex
    pa, pc = ell**a, ell**c
    # B^{-1} gamma B with B = [[pa, b], [0, pc]]
    (g11, g12), (g21, g22) = gamma.matrix
    m11 = g11 * pa
    m12 = g11 * b + g12 * pc
    m21 = g21 * pa
    m22 = g21 * b + g22 * pc
    # B^{-1} = [[1/pa, -b/(pa pc)], [0, 1/pc]]
    entries = (
        Fraction(m11, pa) - Fraction(b * m21, pa * pc),
        Fraction(m12, pa) - Fraction(b * m22, pa * pc),
        Fraction(m21, pc),
        Fraction(m22, pc),
    )
    return all(x.denominator % ell for x in entries)


def lattice_orbital_oracle(gamma, ell, depth_cap=None):
    """Number of homothety classes of lattices in Q_l^2 preserved by gamma.

    Walks the tree of lattice classes from Z_l^2, only through fixed vertices
    (the fixed set of an elliptic element is connected).
    """
    if is_square_in_Qp(gamma.delta, ell):
        raise NotElliptic("%s is hyperbolic at %d" % (gamma, ell))
    if depth_cap is None:
        depth_cap = valuation(gamma.delta, ell) + 1
    root = (0, 0, 0)
    seen = {root}
    queue = deque([(root, 0)])
    while queue:
        (a, b, c), d = queue.popleft()
        if d >= depth_cap:
            continue
        nbrs = [_canonical_vertex(ell, a + 1, b + ell**a * j, c) for j in range(ell)]
        nbrs.append(_canonical_vertex(ell, a, ell * b, c + 1))
        for w in nbrs:
            if w not in seen and _fixes(gamma, ell, w):
                seen.add(w)
                queue.append((w, d + 1))
    return len(seen)


def ramified_primes(gamma, N):
    """Primes l | Delta_gamma with l not dividing N, in increasing order."""
    return [l for l in prime_divisors(gamma.delta) if N % l]

