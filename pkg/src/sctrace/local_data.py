"""Local supercuspidal parameters at p | N and tuples of them.

A depth-zero representation at p | S is given by a primitive character nu_m of
F_{p^2}^* (one representative per pair {nu_m, nu_{pm}}).  A simple
supercuspidal at p | T is given by t in F_p^* and a square root zeta of
omega_p(t p).  Root numbers zeta are stored as exponents in Q/Z.
"""
import itertools
from dataclasses import dataclass
from fractions import Fraction

from .arith_core import factorize, is_squarefree, prime_divisors
from .cyclotomic import CycNumber, I, e
from .residue_fields import FiniteChar, Nebentypus, build_fp2, char_order, is_primitive, parity


@dataclass(frozen=True)
class DepthZero:
    p: int
    nu: FiniteChar

    kind = "depth_zero"
    conductor_exponent = 2

    @property
    def m(self):
        return self.nu.m

    @property
    def formal_degree(self):
        return self.p - 1

    @property
    def label(self):
        return "nu%d" % self.m

    def to_json(self):
        return {"p": self.p, "kind": self.kind, "m": self.m, "modulus": list(self.nu.ctx.modulus)}


@dataclass(frozen=True)
class Simple:
    p: int
    t: int
    zeta_exp: Fraction

    kind = "simple"
    conductor_exponent = 3

    def __post_init__(self):
        object.__setattr__(self, "t", self.t % self.p)
        object.__setattr__(self, "zeta_exp", Fraction(self.zeta_exp) % 1)

    @property
    def zeta(self):
        return e(self.zeta_exp)

    @property
    def formal_degree(self):
        return Fraction(self.p * self.p - 1, 2)

    @property
    def label(self):
        return "t=%d,zeta=%s" % (signed_residue(self.t, self.p), format_root_of_unity(self.zeta_exp))

    def to_json(self):
        return {
            "p": self.p,
            "kind": self.kind,
            "t": self.t,
            "zeta_num": self.zeta_exp.numerator,
            "zeta_den": self.zeta_exp.denominator,
        }


def signed_residue(a, p):
    """Representative of a mod p in (-p/2, p/2]."""
    a %= p
    return a - p if 2 * a > p else a


_NAMED_ROOTS = {Fraction(0): "+1", Fraction(1, 2): "-1", Fraction(1, 4): "i", Fraction(3, 4): "-i"}


def format_root_of_unity(x):
    x = Fraction(x) % 1
    return _NAMED_ROOTS.get(x, "e(%s)" % x)


def parse_root_of_unity(text):
    """Inverse of format_root_of_unity; also accepts '1' and 'e(a/b)'."""
    s = text.strip().replace(" ", "")
    named = {"+1": 0, "1": 0, "-1": Fraction(1, 2), "i": Fraction(1, 4), "+i": Fraction(1, 4), "-i": Fraction(3, 4)}
    if s in named:
        return Fraction(named[s])
    if s.startswith("e(") and s.endswith(")"):
        return Fraction(s[2:-1]) % 1
    raise ValueError("cannot parse root of unity %r (use +1, -1, i, -i or e(a/b))" % text)


# central character data

def zeta_square_exponent(neb, p, t):
    """Exponent of omega_p(t p) = omega_p(t) * omega_p(p)."""
    return (neb.local_exponent(p, t) + neb.omega_p_at_p_exponent(p)) % 1


def restriction_matches(nu, neb):
    """True iff nu restricted to F_p^* equals omega_p."""
    p = nu.p
    if p == 2:
        return True
    # t^(p+1) generates F_p^*; compare both characters there
    base = nu.ctx.parts(nu.ctx.gen_pow(p + 1))[0]
    return nu.restriction_exponent() == neb.local_exponent(p, base)


# enumeration

def enumerate_depth_zero(p, neb, modulus=None):
    """One DepthZero per conjugate pair {nu, nu^p} of primitive characters restricting to omega_p."""
    ctx = build_fp2(p, modulus)
    order = ctx.order
    reps = []
    for m in range(order):
        nu = FiniteChar(ctx, m)
        if not is_primitive(nu) or not restriction_matches(nu, neb):
            continue
        if (m * p) % order < m:
            continue
        reps.append(DepthZero(p, nu))
    return reps


def enumerate_simple(p, neb):
    reps = []
    for t in range(1, p):
        w = zeta_square_exponent(neb, p, t)
        for branch in (0, 1):
            reps.append(Simple(p, t, w / 2 + Fraction(branch, 2)))
    return reps


def zeta_branch(rep, neb):
    """0 if zeta = e(w/2) for w in [0,1) the exponent of omega_p(t p), else 1."""
    w = zeta_square_exponent(neb, rep.p, rep.t)
    return 0 if rep.zeta_exp == w / 2 else 1


# root numbers

def root_number(rep, neb):
    """Local root number as a CycNumber, or None when unavailable."""
    if isinstance(rep, Simple):
        return rep.zeta
    p = rep.p
    if p != 2 and not neb.is_locally_trivial(p):
        return None
    if p == 2:
        return CycNumber.rational(-1)
    r = char_order(rep.nu)
    return CycNumber.rational(-((-1) ** ((p + 1) // r)))


def global_root_number(k, tup):
    """i^k times the product of local root numbers, or None if one is unavailable."""
    total = I**k
    for rep in tup.reps:
        eps = root_number(rep, tup.neb)
        if eps is None:
            return None
        total = total * eps
    return total


def count_by_root_number(q, epsilon):
    """Number of depth-zero supercuspidals with trivial central character and root number epsilon."""
    if epsilon not in (1, -1):
        raise ValueError("epsilon must be +1 or -1")
    if q % 2 == 0:
        return 0 if epsilon == 1 else q // 2
    if q % 4 == 1:
        return (q - 1) // 4
    return (q + 1) // 4 if epsilon == 1 else (q - 3) // 4


# tuples

class LevelError(ValueError):
    pass


def split_level(N):
    """Write N = S^2 T^3 with S, T squarefree and coprime; return (S, T)."""
    S = T = 1
    for p, a in factorize(N):
        if a == 2:
            S *= p
        elif a == 3:
            T *= p
        else:
            raise LevelError("level %d has p^%d with p=%d; only exponents 2 and 3 are supported" % (N, a, p))
    return S, T


def check_shape(S, T):
    if S < 1 or T < 1 or not is_squarefree(S) or not is_squarefree(T):
        raise LevelError("S and T must be squarefree positive integers")
    if S * T == 1:
        raise LevelError("need S*T > 1")
    if any(T % p == 0 for p in prime_divisors(S)):
        raise LevelError("S and T must be coprime")


@dataclass(frozen=True)
class SigmaTuple:
    S: int
    T: int
    reps: tuple
    neb: Nebentypus

    @property
    def N(self):
        return self.S**2 * self.T**3

    def rep_at(self, p):
        for rep in self.reps:
            if rep.p == p:
                return rep
        raise KeyError(p)

    @property
    def label(self):
        return ";".join("%d:%s" % (rep.p, rep.label) for rep in self.reps)

    def to_json(self, k=None):
        obj = {
            "level": self.N,
            "S": self.S,
            "T": self.T,
            "neb": {str(p): a for p, a in sorted(self.neb.exponents.items()) if a},
            "reps": [rep.to_json() for rep in self.reps],
        }
        if k is not None:
            obj["weight"] = k
        return obj


def make_tuple(S, T, neb, reps):
    check_shape(S, T)
    if neb.N != S**2 * T**3:
        raise LevelError("nebentypus has modulus %d, expected %d" % (neb.N, S**2 * T**3))
    return SigmaTuple(S, T, tuple(sorted(reps, key=lambda r: r.p)), neb)


def tuple_from_json(obj):
    S, T = obj["S"], obj["T"]
    neb = Nebentypus(S**2 * T**3, {int(p): a for p, a in obj.get("neb", {}).items()})
    reps = []
    for r in obj["reps"]:
        if r["kind"] == "simple":
            reps.append(Simple(r["p"], r["t"], Fraction(r["zeta_num"], r["zeta_den"])))
        else:
            ctx = build_fp2(r["p"], tuple(r["modulus"]) if "modulus" in r else None)
            reps.append(DepthZero(r["p"], FiniteChar(ctx, r["m"])))
    return make_tuple(S, T, neb, reps)


def enumerate_tuples(S, T, neb, moduli=None):
    """All tuples at level S^2 T^3 compatible with neb, in a deterministic order."""
    check_shape(S, T)
    moduli = moduli or {}
    local = []
    for p in sorted(prime_divisors(S) + prime_divisors(T)):
        if S % p == 0:
            local.append(enumerate_depth_zero(p, neb, moduli.get(p)))
        else:
            local.append(enumerate_simple(p, neb))
    return [make_tuple(S, T, neb, combo) for combo in itertools.product(*local)]


def validate_tuple(tup, k):
    """List of violated constraints (empty when the tuple is admissible at weight k)."""
    problems = []
    try:
        check_shape(tup.S, tup.T)
    except LevelError as exc:
        return ["shape: %s" % exc]
    if k <= 2:
        problems.append("weight: k must exceed 2")
    if tup.N in (4, 8) and k % 2:
        problems.append("k2N2: no admissible nebentypus at level %d for odd k" % tup.N)
    elif parity(tup.neb) != (-1) ** k:
        problems.append("parity: omega'(-1) = %d but (-1)^k = %d" % (parity(tup.neb), (-1) ** k))
    if 2 in tup.neb.exponents and tup.neb.exponents[2]:
        problems.append("nebentypus: character at 2 must be trivial")
    primes = sorted(prime_divisors(tup.S) + prime_divisors(tup.T))
    if sorted(rep.p for rep in tup.reps) != primes:
        problems.append("reps: need exactly one representation at each of %s" % primes)
        return problems
    for rep in tup.reps:
        p = rep.p
        if tup.S % p == 0:
            if not isinstance(rep, DepthZero):
                problems.append("reps: p=%d divides S and needs a depth-zero representation" % p)
            elif not is_primitive(rep.nu):
                problems.append("reps: nu_%d at p=%d is not primitive" % (rep.m, p))
            elif not restriction_matches(rep.nu, tup.neb):
                problems.append("central character: nu_%d at p=%d does not restrict to omega_p" % (rep.m, p))
        else:
            if not isinstance(rep, Simple):
                problems.append("reps: p=%d divides T and needs a simple supercuspidal" % p)
            elif rep.t % p == 0:
                problems.append("reps: t must be a unit mod %d" % p)
            elif (2 * rep.zeta_exp - zeta_square_exponent(tup.neb, p, rep.t)) % 1:
                problems.append("central character: zeta^2 != omega_p(t p) at p=%d" % p)
    return problems
