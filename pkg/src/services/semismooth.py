"""
Semismoothness probabilities: Monte-Carlo estimates and the tabulated
asymptotics used to size groups.

An integer x is semismooth for u when every prime factor is below x^(2/u)
and at most one is at least x^(1/u). A hunter with budget 2^lambda on a
group of groupBits bits can afford u = groupBits / lambda.
"""

import logging
import math
from bisect import bisect_right
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import gmpy2
from sympy import factorint, isprime
from sympy.ntheory import pollard_rho

from config import settings
from utils.bytestream import ByteStream
from utils.decorators import log_duration
from utils.errors import DomainError

logger = logging.getLogger(__name__)

MIN_TRIALS = 1000
WILSON_Z = 1.96

# (u, log2 G(1/u, 2/u)); u = 5.0 is left out as a suspected duplicate of u = 3.0
SEMISMOOTH_TABLE = [
    (2.0, 0.0),
    (2.1, math.log2(0.9488)),
    (2.9, math.log2(0.5038)),
    (3.0, math.log2(0.4473)),
    (6.0, math.log2(1.092e-03)),
    (10.0, math.log2(5.382e-09)),
    (12.0, math.log2(4.255e-12)),
    (16.0, math.log2(6.534e-19)),
    (20.0, math.log2(2.416e-26)),
    (22.5, -100.0),
    (26.5, -128.0),
]


@dataclass
class SemismoothEstimate:
    u: Fraction
    bits: int
    trials: int
    hits: int
    retries: int

    @property
    def fraction(self) -> float:
        return self.hits / self.trials

    @property
    def interval(self) -> tuple[float, float]:
        """Wilson score interval at 95%."""
        n, p, z = self.trials, self.fraction, WILSON_Z
        denominator = 1 + z * z / n
        centre = (p + z * z / (2 * n)) / denominator
        half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denominator
        return max(0.0, centre - half), min(1.0, centre + half)

    def as_record(self) -> dict:
        low, high = self.interval
        return {
            "u": float(self.u),
            "bits": self.bits,
            "trials": self.trials,
            "estimate": f"{self.fraction:.4f}",
            "ci_low": f"{low:.4f}",
            "ci_high": f"{high:.4f}",
            "retries": self.retries,
        }


@dataclass
class WeaknessReport:
    lam: int
    rho: int
    group_bits: int
    u: float
    log2_probability: float
    mc_estimate: Optional[SemismoothEstimate] = None

    @property
    def meets_target(self) -> bool:
        """True when weak groups occur with probability at most 2^-rho."""
        return self.log2_probability <= -self.rho

    def as_record(self) -> dict:
        record = {
            "u": f"{self.u:.2f}",
            "log2_weak_probability": f"{self.log2_probability:.2f}",
            "meets_rho": str(self.meets_target).lower(),
        }
        if self.mc_estimate is not None:
            record["mc_estimate"] = f"{self.mc_estimate.fraction:.4f}"
        return record


@lru_cache(maxsize=4)
def _small_prime_product(bound: int):
    return gmpy2.primorial(bound)


def _prime_factors(x: int, trial_bound: int, rho_steps: int) -> Optional[list[int]]:
    """Prime factors of x with multiplicity, or None when Pollard rho gives up."""
    factors = []
    g = int(gmpy2.gcd(x, _small_prime_product(trial_bound)))
    for p in factorint(g):
        while x % p == 0:
            factors.append(p)
            x //= p
    pending = [x] if x > 1 else []
    while pending:
        n = pending.pop()
        if isprime(n):
            factors.append(n)
            continue
        d = pollard_rho(n, max_steps=rho_steps)
        if d is None:
            return None
        pending.extend([d, n // d])
    return factors


def _is_semismooth(x: int, factors: list[int], u: Fraction) -> bool:
    # p < x^(2/u)  <=>  p^num < x^(2 den);  p >= x^(1/u)  <=>  p^num >= x^den
    num, den = u.numerator, u.denominator
    upper, lower = x ** (2 * den), x ** den
    large = 0
    for p in factors:
        power = p ** num
        if power >= upper:
            return False
        if power >= lower:
            large += 1
            if large > 1:
                return False
    return True


def _run_trials(u: Fraction, bits: int, seed: bytes, start: int, stop: int,
                trial_bound: int, rho_steps: int) -> tuple[int, int]:
    hits = retries = 0
    top = 1 << (bits - 1)
    for i in range(start, stop):
        stream = ByteStream(seed + i.to_bytes(8, "big"))
        while True:
            x = top | stream.integer(bits - 1)
            factors = _prime_factors(x, trial_bound, rho_steps)
            if factors is not None:
                break
            retries += 1
            logger.warning(f"⚠️ Trial {i}: factorisation of {x} timed out, redrawing")
        hits += _is_semismooth(x, factors, u)
    return hits, retries


@log_duration("semismooth_mc")
def semismooth_mc(u, bits: int, trials: int, seed: bytes, workers: Optional[int] = None) -> SemismoothEstimate:
    """Fraction of uniform bits-bit integers that are semismooth for u."""
    u = Fraction(u).limit_denominator(1000)
    if u <= 1:
        raise DomainError(f"u must exceed 1, got {float(u)}")
    if not 2 <= bits <= settings.semismooth_max_bits:
        raise DomainError(f"bits must lie in [2, {settings.semismooth_max_bits}], got {bits}")
    if trials < MIN_TRIALS:
        raise DomainError(f"At least {MIN_TRIALS} trials are needed, got {trials}")

    workers = workers or settings.semismooth_workers
    args = (u, bits, bytes(seed))
    limits = (settings.semismooth_trial_bound, settings.semismooth_rho_max_steps)
    logger.info(f"🔍 semismooth_mc: u = {float(u)}, {bits}-bit samples, {trials} trials on {workers} worker(s)")

    if workers == 1:
        hits, retries = _run_trials(*args, 0, trials, *limits)
    else:
        chunk = -(-trials // workers)
        bounds = [(s, min(s + chunk, trials)) for s in range(0, trials, chunk)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_trials, *args, s, e, *limits) for s, e in bounds]
            results = [f.result() for f in futures]
        hits = sum(h for h, _ in results)
        retries = sum(r for _, r in results)

    estimate = SemismoothEstimate(u, bits, trials, hits, retries)
    logger.info(f"📊 semismooth_mc: {estimate.fraction:.4f} ({hits}/{trials}, {retries} redraws)")
    return estimate


def tabulated_log2_probability(u: float) -> float:
    """log2 G(1/u, 2/u), interpolated linearly in log space between table rows."""
    if u <= SEMISMOOTH_TABLE[0][0]:
        return 0.0
    us = [row[0] for row in SEMISMOOTH_TABLE]
    i = bisect_right(us, u)
    if i == len(us):
        (u0, g0), (u1, g1) = SEMISMOOTH_TABLE[-2], SEMISMOOTH_TABLE[-1]
    else:
        (u0, g0), (u1, g1) = SEMISMOOTH_TABLE[i - 1], SEMISMOOTH_TABLE[i]
    return g0 + (g1 - g0) * (u - u0) / (u1 - u0)


def weakness_probability(lam: int, rho: int, group_bits: int,
                         mc_trials: Optional[int] = None, seed: bytes = b"weakness") -> WeaknessReport:
    """How likely a random group of group_bits bits falls to a 2^lam attacker."""
    if lam < 1 or group_bits < 1:
        raise DomainError(f"lambda and group bits must be positive, got {lam} and {group_bits}")
    u = group_bits / lam
    report = WeaknessReport(lam, rho, group_bits, u, tabulated_log2_probability(u))
    if mc_trials:
        bits = min(group_bits, settings.semismooth_max_bits)
        report.mc_estimate = semismooth_mc(u, bits, mc_trials, seed)
    logger.debug(f"📊 weakness: u = {u:.2f}, log2 P = {report.log2_probability:.2f}")
    return report
