"""Exact arithmetic in cyclotomic fields Q(zeta_L).

A CycNumber stores a polynomial in zeta_L reduced modulo zeta_L^L - 1, so that
products are cyclic convolutions.  Reduction modulo the cyclotomic polynomial
happens only when a canonical form is needed (equality, rationality tests).
Every value also carries a complex "shadow" that is propagated through the
arithmetic and compared with the exact value on demand.
"""
import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd

from sympy import cyclotomic_poly
from sympy.abc import x as _x

from .arith_core import factorize, is_squarefree

MAX_CONDUCTOR = 10**5
SHADOW_TOLERANCE = 1e-9


class ConductorTooLarge(ArithmeticError):
    pass


class ShadowDivergence(ArithmeticError):
    pass


def _lcm(a, b):
    return a * b // gcd(a, b)


@lru_cache(maxsize=None)
def _unit_circle(L):
    return [cmath.exp(2j * cmath.pi * j / L) for j in range(L)]


@lru_cache(maxsize=None)
def cyclotomic_coeffs(L):
    """Coefficients of the L-th cyclotomic polynomial, constant term first."""
    return tuple(int(c) for c in reversed(cyclotomic_poly(L, _x, polys=True).all_coeffs()))


def _check_conductor(L):
    if L > MAX_CONDUCTOR:
        raise ConductorTooLarge("ambient conductor %d exceeds cap %d" % (L, MAX_CONDUCTOR))


class CycNumber:
    __slots__ = ("L", "terms", "shadow", "_reduced")

    def __init__(self, L, terms, shadow=None):
        _check_conductor(L)
        self.L = L
        merged = {}
        for j, c in terms.items():
            if c:
                k = j % L
                merged[k] = merged.get(k, 0) + Fraction(c)
        self.terms = {j: c for j, c in merged.items() if c}
        self.shadow = self._exact_float() if shadow is None else complex(shadow)
        self._reduced = None

    # construction

    @classmethod
    def rational(cls, q):
        q = Fraction(q)
        return cls(1, {0: q} if q else {}, complex(float(q)))

    @classmethod
    def zero(cls):
        return cls(1, {}, 0j)

    @classmethod
    def one(cls):
        return cls.rational(1)

    # representation helpers

    def _exact_float(self):
        circle = _unit_circle(self.L)
        return sum((float(c) * circle[j] for j, c in self.terms.items()), 0j)

    @property
    def coeffs(self):
        """Dense coefficient list of length L (representative modulo zeta^L - 1)."""
        out = [Fraction(0)] * self.L
        for j, c in self.terms.items():
            out[j] = c
        return out

    def lift(self, L2):
        """The same number viewed in Q(zeta_{L2}) for a multiple L2 of L."""
        if L2 == self.L:
            return self
        if L2 % self.L:
            raise ValueError("%d does not divide %d" % (self.L, L2))
        s = L2 // self.L
        return CycNumber(L2, {j * s: c for j, c in self.terms.items()}, self.shadow)

    def _common(self, other):
        if not isinstance(other, CycNumber):
            other = CycNumber.rational(other)
        L = _lcm(self.L, other.L)
        return self.lift(L), other.lift(L), L

    # field operations

    def __add__(self, other):
        a, b, L = self._common(other)
        terms = dict(a.terms)
        for j, c in b.terms.items():
            terms[j] = terms.get(j, 0) + c
        return CycNumber(L, terms, a.shadow + b.shadow)

    __radd__ = __add__

    def __neg__(self):
        return CycNumber(self.L, {j: -c for j, c in self.terms.items()}, -self.shadow)

    def __sub__(self, other):
        return self + (-other if isinstance(other, CycNumber) else CycNumber.rational(-Fraction(other)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, CycNumber):
            return self.scale(other)
        a, b, L = self._common(other)
        terms = {}
        for i, c in a.terms.items():
            for j, d in b.terms.items():
                k = (i + j) % L
                terms[k] = terms.get(k, 0) + c * d
        return CycNumber(L, terms, a.shadow * b.shadow)

    __rmul__ = __mul__

    def scale(self, q):
        q = Fraction(q)
        return CycNumber(self.L, {j: c * q for j, c in self.terms.items()}, self.shadow * float(q))

    def conj(self):
        return CycNumber(self.L, {(-j) % self.L: c for j, c in self.terms.items()}, self.shadow.conjugate())

    def __pow__(self, e):
        if e < 0:
            return self.invert() ** (-e)
        result = CycNumber.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def invert(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        q = self.as_rational()
        if q is not None:
            return CycNumber.rational(1 / q)
        phi = [Fraction(c) for c in cyclotomic_coeffs(self.L)]
        inv = _poly_inverse_mod(self.reduced(), phi)
        return CycNumber(self.L, dict(enumerate(inv)), 1 / self.shadow)

    def __truediv__(self, other):
        if not isinstance(other, CycNumber):
            return self.scale(1 / Fraction(other))
        return self * other.invert()

    def __rtruediv__(self, other):
        return self.invert() * other

    # canonical forms

    def reduced(self):
        """Coefficients modulo the L-th cyclotomic polynomial (length phi(L))."""
        if self._reduced is None:
            phi = cyclotomic_coeffs(self.L)
            deg = len(phi) - 1
            poly = self.coeffs
            for i in range(len(poly) - 1, deg - 1, -1):
                c = poly[i]
                if c:
                    shift = i - deg
                    for k, pk in enumerate(phi):
                        if pk:
                            poly[shift + k] -= c * pk
            self._reduced = tuple(poly[:deg])
        return self._reduced

    def is_zero(self):
        return not any(self.reduced())

    def as_rational(self):
        r = self.reduced()
        if any(r[1:]):
            return None
        return r[0] if r else Fraction(0)

    def equals(self, other):
        a, b, _ = self._common(other)
        return (a - b).is_zero()

    def __eq__(self, other):
        if isinstance(other, (CycNumber, int, Fraction)):
            return self.equals(other)
        return NotImplemented

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    __hash__ = None

    def approx(self):
        return self._exact_float()

    def check_shadow(self, tol=SHADOW_TOLERANCE):
        exact = self.approx()
        if abs(exact - self.shadow) > tol * (1 + abs(exact)):
            raise ShadowDivergence("exact value %r disagrees with float shadow %r" % (exact, self.shadow))
        return exact

    def __repr__(self):
        return "CycNumber(%s)" % self.to_string()

    def to_string(self):
        return format_cyc(self)

    def to_json(self):
        return {"L": self.L, "coeffs": [str(c) for c in self.coeffs], "float": [self.shadow.real, self.shadow.imag]}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["L"], {j: Fraction(c) for j, c in enumerate(obj["coeffs"])})


def _poly_trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(_poly_trim(a)) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] -= c * bi
    return q, a


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    return _poly_trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def _poly_inverse_mod(a, m):
    """Inverse of polynomial a modulo the irreducible m, by extended Euclid."""
    r0, r1 = _poly_trim(list(m)), _poly_trim(list(a))
    s0, s1 = [], [Fraction(1)]
    while len(r1) > 1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, _poly_trim(r)
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    c = r1[0]
    inv = [x / c for x in s1]
    _, rem = _poly_divmod(inv, m) if len(inv) >= len(m) else (None, inv)
    return _poly_trim(rem)


def root_of_unity(L, j):
    """e(j/L) as an exact cyclotomic number."""
    if L < 1:
        raise ValueError("L must be positive")
    return CycNumber(L, {j % L: 1})


def e(x):
    """e(x) = exp(2 pi i x) for rational x."""
    x = Fraction(x)
    return root_of_unity(x.denominator, x.numerator)


I = root_of_unity(4, 1)


@lru_cache(maxsize=None)
def _sqrt_prime(q):
    if q == 2:
        return root_of_unity(8, 1) + root_of_unity(8, 7)
    g = CycNumber(q, {a: (1 if pow(a, (q - 1) // 2, q) == 1 else -1) for a in range(1, q)})
    # g^2 = q if q = 1 mod 4, and -q otherwise
    return g if q % 4 == 1 else g * root_of_unity(4, 3)


@lru_cache(maxsize=None)
def sqrt_squarefree(m):
    """Positive square root of a squarefree integer m >= 1, exactly."""
    if m < 1 or not is_squarefree(m):
        raise ValueError("sqrt_squarefree expects a squarefree positive integer, got %r" % (m,))
    z = CycNumber.one()
    for p, _ in factorize(m) if m > 1 else []:
        z = z * _sqrt_prime(p)
    if z.approx().real < 0:
        z = -z
    return z


def sqrt_rational(q):
    """Positive square root of a positive rational, exactly."""
    from .arith_core import squarefree_decomposition

    q = Fraction(q)
    if q <= 0:
        raise ValueError("sqrt_rational expects a positive rational")
    # sqrt(n/d) = sqrt(n d) / d
    a, m = squarefree_decomposition(q.numerator * q.denominator)
    return sqrt_squarefree(m).scale(Fraction(a, q.denominator))


def approx(z):
    return z.approx() if isinstance(z, CycNumber) else complex(float(z))


def as_rational(z):
    return z.as_rational() if isinstance(z, CycNumber) else Fraction(z)


def equals(a, b):
    if not isinstance(a, CycNumber):
        a = CycNumber.rational(a)
    return a.equals(b)


def _fmt_ab(a, b, name):
    parts = []
    if a:
        parts.append(str(a))
    if b:
        coef = "" if abs(b) == 1 else str(abs(b)) + "*"
        sign = "-" if b < 0 else ("+" if parts else "")
        parts.append("%s%s%s" % (sign, coef, name))
    return "".join(parts) if parts else "0"


def format_cyc(z):
    """Human-readable exact form: rational, a+b*i, a+b*sqrt(d), or a sum of e(j/L)."""
    q = z.as_rational()
    if q is not None:
        return str(q)
    for s in _quadratic_forms(z):
        return s
    terms = []
    for j, c in sorted(z.terms.items()):
        f = Fraction(j, z.L)
        terms.append("e(%s)" % f if c == 1 else "%s*e(%s)" % (c, f))
    return " + ".join(terms)


def _quadratic_forms(z):
    """Yield at most one a + b*w representation with w in a small family."""
    L = z.L
    ws = [(I, "i")]
    for d in range(2, 4 * L + 1):
        if (4 * L) % d == 0 and is_squarefree(d):
            s = sqrt_squarefree(d)
            if (4 * L) % s.L == 0 or L % s.L == 0:
                ws.append((s, "sqrt(%d)" % d))
                ws.append((s * I, "i*sqrt(%d)" % d))
    for w, name in ws:
        # z = a + b w with a rational and b rational iff z - conj-like projection works;
        # solve using the reduced representation of w.
        sol = _solve_ab(z, w)
        if sol is not None:
            yield _fmt_ab(sol[0], sol[1], name)
            return


def _solve_ab(z, w):
    zr = list(z.lift(_lcm(z.L, w.L)).reduced())
    wr = list(w.lift(_lcm(z.L, w.L)).reduced())
    # find b from a nonconstant coordinate of w
    idx = next((i for i in range(1, len(wr)) if wr[i]), None)
    if idx is None:
        return None
    b = zr[idx] / wr[idx]
    a = zr[0] - b * wr[0]
    if (CycNumber.rational(a) + w * b).equals(z):
        return a, b
    return None
