"""
Generic order-finding attacks on unknown-order groups.

bsgs_order is the square-root baseline. primorial_steps first strips every
small prime power from the target, finds the order of what remains with a
baby/giant search organised around a primorial, then restores the small
part with a product tree. Both run through a CountingGroup so the number of
group operations is reported with the result.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional

import gmpy2
import psutil
from sympy import factorint

from config import settings
from services.groupapi import CountingGroup, ElementHandle, GroupHandle
from utils.errors import DomainError, ResourceLimitError
from utils.numtheory import prime_power_exponent, primes_up_to

logger = logging.getLogger(__name__)


class HuntStatus(str, Enum):
    FOUND = "found"
    BUDGET_EXHAUSTED = "budget-exhausted"


@dataclass
class HuntConfig:
    M: int
    u: Fraction = Fraction(2)
    memory_cap: int = field(default_factory=lambda: settings.hunt_memory_cap)
    budget: int = field(default_factory=lambda: settings.hunt_default_budget)
    negation: bool = field(default_factory=lambda: settings.hunt_negation_default)

    def __post_init__(self):
        self.u = Fraction(self.u)
        if self.M < 1:
            raise DomainError(f"Order bound must be positive, got {self.M}")
        if self.u <= 0:
            raise DomainError(f"Smoothness parameter must be positive, got {self.u}")
        if self.budget <= 0:
            raise DomainError(f"Operation budget must be positive, got {self.budget}")

    @property
    def L(self) -> int:
        """ceil(M^(1/u)) computed exactly."""
        power = self.M ** self.u.denominator
        root, exact = gmpy2.iroot(gmpy2.mpz(power), self.u.numerator)
        return int(root) if exact else int(root) + 1


@dataclass
class HuntResult:
    status: HuntStatus
    order: Optional[int]
    operations: int
    table_size: int
    algorithm: str

    @property
    def found(self) -> bool:
        return self.status == HuntStatus.FOUND

    def as_record(self) -> dict:
        return {
            "algo": self.algorithm,
            "status": self.status.value,
            "order": self.order if self.order is not None else "none",
            "ops": self.operations,
            "table": self.table_size,
        }


class _BudgetExhausted(Exception):
    pass


class _Hunt:
    """Shared bookkeeping: counted group, budget, baby-step table."""

    def __init__(self, group: GroupHandle, alpha: ElementHandle, config: HuntConfig, algorithm: str):
        self.group = CountingGroup(group)
        self.alpha = alpha
        self.config = config
        self.algorithm = algorithm
        self.table: dict[bytes, int] = {}

    @property
    def operations(self) -> int:
        return self.group.ops + self.group.inverses

    def spend(self) -> None:
        if self.operations > self.config.budget:
            raise _BudgetExhausted()

    def op(self, x, y):
        result = self.group.op(x, y)
        self.spend()
        return result

    def scalar(self, x, n: int):
        result = self.group.scalar(x, n)
        self.spend()
        return result

    def reserve(self, entries: int) -> None:
        if entries > self.config.memory_cap:
            raise ResourceLimitError(
                f"Baby-step table of {entries} entries exceeds the cap of {self.config.memory_cap}"
            )

    def key(self, x) -> bytes:
        k = self.group.canonical_bytes(x)
        if not self.config.negation:
            return k
        return min(k, self.group.canonical_bytes(self.group.inverse(x)))

    def store(self, x, exponent: int) -> None:
        self.table.setdefault(self.key(x), exponent)

    def log_table(self) -> None:
        rss = psutil.Process().memory_info().rss / (1024 * 1024)
        logger.debug(f"📊 {self.algorithm}: {len(self.table)} baby steps stored, RSS {rss:.1f} MiB")

    def annihilates(self, n: int, element=None) -> bool:
        return self.group.is_identity(self.scalar(self.alpha if element is None else element, n))

    def minimise(self, multiple: int, element=None) -> int:
        """Smallest divisor of a known multiple of the order that still annihilates the element."""
        order = multiple
        for q in sorted(factorint(multiple)):
            while order % q == 0 and self.annihilates(order // q, element):
                order //= q
        return order

    def verified(self, order: int) -> bool:
        if not self.annihilates(order):
            return False
        return all(not self.annihilates(order // q) for q in factorint(order))

    def result(self, order: Optional[int]) -> HuntResult:
        status = HuntStatus.FOUND if order is not None else HuntStatus.BUDGET_EXHAUSTED
        return HuntResult(status, order, self.operations, len(self.table), self.algorithm)


def bsgs_order(group: GroupHandle, alpha: ElementHandle, M: int,
               config: Optional[HuntConfig] = None) -> HuntResult:
    """Exact order of alpha, assuming it is at most M, in O(sqrt M) operations."""
    config = config or HuntConfig(M)
    hunt = _Hunt(group, alpha, config, "bsgs")
    G = hunt.group
    if G.is_identity(alpha):
        return hunt.result(1)

    m = math.isqrt(M - 1) + 1 if not config.negation else math.isqrt((M - 1) // 2) + 1
    hunt.reserve(m + 1)
    logger.info(f"🔍 bsgs: M = {M}, {m} baby steps{' with negation' if config.negation else ''}")
    try:
        x = G.identity()
        for j in range(1, m + 1):
            x = hunt.op(x, alpha)
            if G.is_identity(x):
                return hunt.result(j)
            hunt.store(x, j)
        hunt.log_table()

        stride = m if not config.negation else 2 * m + 1
        gamma = hunt.scalar(alpha, stride)
        y = G.identity()
        for i in range(1, M // stride + 2):
            y = hunt.op(y, gamma)
            if G.is_identity(y):
                return hunt.result(hunt.minimise(i * stride))
            j = hunt.table.get(hunt.key(y))
            if j is None:
                continue
            candidates = [i * stride - j] + ([i * stride + j] if config.negation else [])
            for candidate in candidates:
                if candidate > 0 and hunt.annihilates(candidate):
                    order = hunt.minimise(candidate)
                    logger.info(f"✅ bsgs found order {order} after {hunt.operations} operations")
                    return hunt.result(order)
    except _BudgetExhausted:
        logger.warning(f"⚠️ bsgs exhausted its budget of {config.budget} operations")
        return hunt.result(None)
    logger.warning(f"⚠️ bsgs found no order up to {M}")
    return hunt.result(None)


def _primorial_for(bound: int, limit: int) -> tuple[int, int]:
    """Largest primorial P (primes <= limit) with P * phi(P) <= bound, with phi(P)."""
    P, phi = 1, 1
    for p in primes_up_to(limit):
        if P * p * phi * (p - 1) > bound:
            break
        P, phi = P * p, phi * (p - 1)
    return P, phi


def _smooth_exponent(primes: list[int], M: int) -> int:
    E = 1
    for p in primes:
        E *= p ** prime_power_exponent(p, M)
    return E


def _small_part(hunt: _Hunt, x, primes: list[int], M: int) -> int:
    """|x| for x whose order divides prod p^e over primes; identity subtrees are pruned."""
    G = hunt.group
    if G.is_identity(x):
        return 1
    if len(primes) == 1:
        p = primes[0]
        order = 1
        while not G.is_identity(x):
            x = hunt.scalar(x, p)
            order *= p
        return order
    half = len(primes) // 2
    left, right = primes[:half], primes[half:]
    x_left = hunt.scalar(x, _smooth_exponent(right, M))
    x_right = hunt.scalar(x, _smooth_exponent(left, M))
    return _small_part(hunt, x_left, left, M) * _small_part(hunt, x_right, right, M)


def primorial_steps(group: GroupHandle, alpha: ElementHandle, M: int, u=2,
                    config: Optional[HuntConfig] = None) -> HuntResult:
    """Order of alpha when it is semismooth: all primes below L^2, at most one above L = M^(1/u)."""
    config = config or HuntConfig(M, Fraction(u))
    hunt = _Hunt(group, alpha, config, "primorial")
    G = hunt.group
    L = config.L
    if L < 2:
        raise DomainError(f"Smoothness bound L = {L} is below 2; raise M or lower u")
    primes = primes_up_to(L)
    bound = min(L * L, M)
    P, phi = _primorial_for(bound, L)
    baby_count = phi if not config.negation else max(1, phi // 2)
    hunt.reserve(baby_count)
    logger.info(f"🔍 primorial steps: M = {M}, L = {L}, P = {P}, search bound {bound}")

    try:
        if G.is_identity(alpha):
            return hunt.result(1)
        beta = hunt.scalar(alpha, _smooth_exponent(primes, M))
        large = _large_part(hunt, beta, P, bound)
        if large is None:
            logger.warning(f"⚠️ primorial steps: order of alpha is not semismooth for L = {L}")
            return hunt.result(None)
        rest = hunt.scalar(alpha, large)
        order = large * _small_part(hunt, rest, primes, M)
        if not hunt.verified(order):
            logger.error(f"❌ primorial steps produced {order}, which fails verification")
            return hunt.result(None)
    except _BudgetExhausted:
        logger.warning(f"⚠️ primorial steps exhausted its budget of {config.budget} operations")
        return hunt.result(None)
    logger.info(f"✅ primorial steps found order {order} after {hunt.operations} operations")
    return hunt.result(order)


def _large_part(hunt: _Hunt, beta, P: int, bound: int) -> Optional[int]:
    """|beta| <= bound, knowing it is coprime to P; None when no collision is found."""
    G = hunt.group
    if G.is_identity(beta):
        return 1
    half = P // 2 if hunt.config.negation else P
    residues = [k for k in range(1, max(half, 2)) if math.gcd(k, P) == 1]

    # step between consecutive residues with cached powers beta^gap
    steps = {}
    x, previous = None, 0
    for k in residues:
        gap = k - previous
        if x is None:
            x = hunt.scalar(beta, k)
        else:
            if gap not in steps:
                steps[gap] = hunt.scalar(beta, gap)
            x = hunt.op(x, steps[gap])
        if G.is_identity(x):
            return k
        hunt.store(x, k)
        previous = k
    hunt.log_table()

    gamma = hunt.scalar(beta, P)
    y = G.identity()
    for j in range(1, bound // P + 2):
        y = hunt.op(y, gamma)
        if G.is_identity(y):
            return hunt.minimise(j * P, beta)
        k = hunt.table.get(hunt.key(y))
        if k is None:
            continue
        for candidate in (j * P - k, j * P + k) if hunt.config.negation else (j * P - k,):
            if candidate > 0 and G.is_identity(hunt.scalar(beta, candidate)):
                return candidate
    return None
