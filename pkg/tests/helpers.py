import itertools

from sctrace.arith_core import prime_divisors
from sctrace.residue_fields import Nebentypus, parity


def characters(N, sign=None):
    """Every nebentypus of modulus N (trivial at 2), optionally of a given parity."""
    primes = [p for p in prime_divisors(N) if p > 2]
    out = []
    for exps in itertools.product(*[range(p - 1) for p in primes]):
        neb = Nebentypus(N, dict(zip(primes, exps)))
        if sign is None or parity(neb) == sign:
            out.append(neb)
    return out
