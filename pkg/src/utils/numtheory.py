"""Integer arithmetic helpers on top of gmpy2."""

import logging
from functools import reduce

import gmpy2
from sympy import sieve

from config import settings
from utils.errors import DomainError

logger = logging.getLogger(__name__)


def int_sqrt(n: int) -> tuple[int, bool]:
    """Floor square root of n and whether it is exact."""
    if n < 0:
        raise DomainError(f"int_sqrt of negative value {n}")
    root, rem = gmpy2.isqrt_rem(gmpy2.mpz(n))
    return int(root), rem == 0


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> int:
    """Unique x in [0, lcm(m1, m2)) with x = r1 mod m1 and x = r2 mod m2."""
    if m1 < 1 or m2 < 1:
        raise DomainError(f"CRT moduli must be positive, got {m1} and {m2}")
    g, p, _ = gmpy2.gcdext(m1, m2)
    diff = r2 - r1
    if diff % g:
        raise DomainError(f"Incompatible residues {r1} mod {m1} and {r2} mod {m2}")
    step = m2 // g
    k = (diff // g) * p % step
    modulus = m1 // g * m2
    return int((r1 + k * m1) % modulus)


def lcm_range(n: int) -> int:
    """lcm(1, 2, ..., n)."""
    if n < 1:
        raise DomainError(f"lcm_range needs n >= 1, got {n}")
    return int(reduce(gmpy2.lcm, range(1, n + 1), gmpy2.mpz(1)))


def powmod(base: int, exponent: int, modulus: int) -> int:
    return int(gmpy2.powmod(base, exponent, modulus))


def invmod(value: int, modulus: int) -> int:
    """Inverse of value modulo modulus; ZeroDivisionError when it does not exist."""
    return int(gmpy2.invert(value, modulus))


def jacobi(a: int, n: int) -> int:
    if n <= 0 or n % 2 == 0:
        raise DomainError(f"Jacobi symbol needs an odd positive modulus, got {n}")
    return int(gmpy2.jacobi(a, n))


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with settings.miller_rabin_rounds rounds."""
    if n < 2:
        return False
    return bool(gmpy2.is_prime(n, settings.miller_rabin_rounds))


def primes_up_to(bound: int) -> list[int]:
    if bound < 2:
        return []
    return [int(p) for p in sieve.primerange(2, bound + 1)]


def prime_power_exponent(p: int, bound: int) -> int:
    """Largest e with p**e <= bound."""
    e, power = 0, p
    while power <= bound:
        e += 1
        power *= p
    return e
