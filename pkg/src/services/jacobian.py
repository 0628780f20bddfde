"""
Genus-3 hyperelliptic Jacobians y^2 = f(x), deg f = 7, over prime fields.

Divisor classes use the Mumford representation <u, v>; the group law is
Cantor's composition followed by reduction. A brute-force zeta oracle
counts points over F_p, F_p^2 and F_p^3 for tiny fields.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from config import settings
from utils.bytestream import ByteStream
from utils.errors import DomainError, InternalError, ResourceLimitError
from utils.numtheory import int_sqrt
from utils.polynomials import (
    FpPoly,
    PrimeField,
    poly_is_irreducible,
    poly_is_squarefree,
    poly_sqrt_mod,
)

logger = logging.getLogger(__name__)

GENUS = 3
CURVE_DEGREE = 2 * GENUS + 1

# extension elements handled per numpy batch in the character sums
CHARACTER_SUM_CHUNK = 1 << 16


@dataclass(frozen=True)
class HyperCurve:
    field: PrimeField
    f: FpPoly

    def __post_init__(self):
        if self.f.field != self.field:
            raise DomainError("Curve polynomial lives over a different field")
        if self.f.degree != CURVE_DEGREE or not self.f.is_monic:
            raise DomainError(f"f must be monic of degree {CURVE_DEGREE}, got {self.f}")
        if not poly_is_squarefree(self.f):
            raise DomainError(f"f = {self.f} is not squarefree")

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def is_trustless(self) -> bool:
        """Irreducible f: no rational 2-torsion, so the group order is odd."""
        return poly_is_irreducible(self.f)


@dataclass(frozen=True)
class MumfordDivisor:
    u: FpPoly
    v: FpPoly

    @property
    def degree(self) -> int:
        return self.u.degree

    @property
    def is_identity(self) -> bool:
        return self.u.degree == 0 and self.v.is_zero

    def __str__(self) -> str:
        return f"<{self.u}, {self.v}>"


def identity(curve: HyperCurve) -> MumfordDivisor:
    return MumfordDivisor(curve.field.one(), curve.field.zero())


def validate(curve: HyperCurve, divisor: MumfordDivisor) -> bool:
    """True iff divisor is a reduced Mumford pair on curve."""
    u, v = divisor.u, divisor.v
    if u.field != curve.field or v.field != curve.field:
        return False
    if u.is_zero or not u.is_monic:
        return False
    if not v.degree < u.degree <= GENUS:
        return False
    return ((v * v - curve.f) % u).is_zero


def _require_valid(curve: HyperCurve, *divisors: MumfordDivisor) -> None:
    for d in divisors:
        if not validate(curve, d):
            raise DomainError(f"Invalid divisor {d} on curve y^2 = {curve.f}")


def _reduce(curve: HyperCurve, u: FpPoly, v: FpPoly) -> MumfordDivisor:
    while u.degree > GENUS:
        u = (curve.f - v * v) // u
        v = (-v) % u
    u = u.monic()
    return MumfordDivisor(u, v % u)


def _compose(curve: HyperCurve, d1: MumfordDivisor, d2: MumfordDivisor) -> MumfordDivisor:
    u1, v1, u2, v2 = d1.u, d1.v, d2.u, d2.v
    d0, e1, e2 = u1.gcdex(u2)
    d, c1, c2 = d0.gcdex(v1 + v2)
    s1, s2, s3 = c1 * e1, c1 * e2, c2
    u = (u1 * u2) // (d * d)
    v = ((s1 * u1 * v2 + s2 * u2 * v1 + s3 * (v1 * v2 + curve.f)) // d) % u
    return _reduce(curve, u, v)


def add(curve: HyperCurve, d1: MumfordDivisor, d2: MumfordDivisor) -> MumfordDivisor:
    _require_valid(curve, d1, d2)
    return _compose(curve, d1, d2)


def double(curve: HyperCurve, divisor: MumfordDivisor) -> MumfordDivisor:
    _require_valid(curve, divisor)
    return _compose(curve, divisor, divisor)


def negate(curve: HyperCurve, divisor: MumfordDivisor) -> MumfordDivisor:
    _require_valid(curve, divisor)
    return MumfordDivisor(divisor.u, (-divisor.v) % divisor.u)


def scalar_mul(curve: HyperCurve, n: int, divisor: MumfordDivisor) -> MumfordDivisor:
    """Binary double-and-add; negative n goes through negate."""
    _require_valid(curve, divisor)
    if n < 0:
        divisor, n = negate(curve, divisor), -n
    result = identity(curve)
    for bit in bin(n)[2:] if n else "":
        result = _compose(curve, result, result)
        if bit == "1":
            result = _compose(curve, result, divisor)
    return result


def sample_divisor(curve: HyperCurve, seed: bytes) -> MumfordDivisor:
    """Deterministic divisor with squarefree cubic u drawn from the seed stream."""
    stream = ByteStream(seed)
    p = curve.p
    attempts = 0
    while True:
        attempts += 1
        coeffs = [stream.field_element(p) for _ in range(GENUS)]
        signs = stream.byte()
        u = curve.field.poly(coeffs + [1])
        if not poly_is_squarefree(u):
            continue
        v = poly_sqrt_mod(curve.f, u, signs)
        if v is None:
            continue
        logger.debug(f"🔍 sample_divisor succeeded after {attempts} attempts")
        return MumfordDivisor(u, v)


def hasse_weil_interval(p: int) -> tuple[int, int]:
    """Integer bounds on #J: ceil((sqrt p - 1)^6) and floor((sqrt p + 1)^6)."""
    # (sqrt p +- 1)^6 = A +- B*sqrt(p) with integer A, B
    a = p ** 3 + 15 * p ** 2 + 15 * p + 1
    b = 6 * p ** 2 + 20 * p + 6
    bsq = b * b * p
    root, _ = int_sqrt(bsq)
    return a - root, a + root


class _ExtensionField:
    """Vectorised arithmetic in F_p[t]/(m) for k = deg m in {1, 2, 3}."""

    def __init__(self, p: int, modulus: list[int]):
        # modulus: low-to-high coefficients of a monic irreducible polynomial
        self.p = p
        self.k = len(modulus) - 1
        self.reduction = [(-c) % p for c in modulus[:-1]]
        self.chi = np.array([0] + [1 if pow(x, (p - 1) // 2, p) == 1 else -1 for x in range(1, p)],
                            dtype=np.int64)

    def mul(self, x: list, y: list) -> list:
        p, k = self.p, self.k
        prod = [np.zeros_like(x[0]) for _ in range(2 * k - 1)]
        for i in range(k):
            for j in range(k):
                prod[i + j] = (prod[i + j] + x[i] * y[j]) % p
        for top in range(2 * k - 2, k - 1, -1):
            c = prod[top]
            for i, r in enumerate(self.reduction):
                prod[top - k + i] = (prod[top - k + i] + c * r) % p
        return prod[:k]

    def times_t(self, x: list) -> list:
        p, k = self.p, self.k
        top = x[k - 1]
        out = [np.zeros_like(x[0])] + list(x[:k - 1])
        return [(out[i] + top * self.reduction[i]) % p for i in range(k)]

    def norm(self, y: list) -> np.ndarray:
        """Determinant of multiplication by y, reduced mod p."""
        p, k = self.p, self.k
        cols = [y]
        for _ in range(k - 1):
            cols.append(self.times_t(cols[-1]))
        if k == 1:
            return y[0] % p
        if k == 2:
            return (cols[0][0] * cols[1][1] - cols[1][0] * cols[0][1]) % p
        m = [[cols[c][r] for c in range(3)] for r in range(3)]
        det = (m[0][0] * ((m[1][1] * m[2][2] - m[1][2] * m[2][1]) % p)
               - m[0][1] * ((m[1][0] * m[2][2] - m[1][2] * m[2][0]) % p)
               + m[0][2] * ((m[1][0] * m[2][1] - m[1][1] * m[2][0]) % p))
        return det % p

    def character_sum(self, f_coeffs: list[int], leading: int) -> int:
        """Sum of chi(f(x)) over the elements whose top coordinate equals leading."""
        p, k = self.p, self.k
        size = p ** (k - 1)
        total = 0
        for start in range(0, size, CHARACTER_SUM_CHUNK):
            idx = np.arange(start, min(start + CHARACTER_SUM_CHUNK, size), dtype=np.int64)
            n = len(idx)
            x = []
            for _ in range(k - 1):
                x.append(idx % p)
                idx = idx // p
            x.append(np.full(n, leading, dtype=np.int64))
            acc = [np.ones(n, dtype=np.int64)] + [np.zeros(n, dtype=np.int64) for _ in range(k - 1)]
            for c in reversed(f_coeffs[:-1]):
                acc = self.mul(acc, x)
                acc[0] = (acc[0] + c) % p
            total += int(self.chi[self.norm(acc)].sum())
        return total


def _irreducible_modulus(field: PrimeField, k: int) -> list[int]:
    if k == 1:
        return [0, 1]
    for c0 in range(1, field.p):
        for c1 in range(field.p):
            coeffs = [c0, c1] + [0] * (k - 2) + [1]
            if poly_is_irreducible(field.poly(coeffs)):
                return coeffs
    raise DomainError(f"No irreducible polynomial of degree {k} found over F_{field.p}")


def point_counts(curve: HyperCurve, workers: int = None) -> tuple[int, int, int]:
    """(N1, N2, N3): projective point counts over F_p^k for k = 1, 2, 3."""
    p = curve.p
    if p > settings.order_oracle_max_prime:
        raise ResourceLimitError(f"p = {p} exceeds oracle bound {settings.order_oracle_max_prime}")
    workers = workers or settings.order_oracle_workers
    f_coeffs = list(curve.f.coeffs)
    counts = []
    for k in (1, 2, 3):
        ext = _ExtensionField(p, _irreducible_modulus(curve.field, k))
        with ThreadPoolExecutor(max_workers=workers) as pool:
            sums = list(pool.map(lambda lead: ext.character_sum(f_coeffs, lead), range(p)))
        counts.append(p ** k + 1 + sum(sums))
    return tuple(counts)


def order_oracle(curve: HyperCurve) -> int:
    """#J(F_p) = L(1) from point counts over the first three extensions."""
    p = curve.p
    n1, n2, n3 = point_counts(curve)
    s1 = p + 1 - n1
    s2 = p ** 2 + 1 - n2
    s3 = p ** 3 + 1 - n3
    e1 = s1
    e2 = (e1 * s1 - s2) // 2
    e3 = (e2 * s1 - e1 * s2 + s3) // 3
    order = 1 - e1 + e2 - e3 + p * e2 - p ** 2 * e1 + p ** 3
    lower, upper = hasse_weil_interval(p)
    if not lower <= order <= upper:
        raise InternalError(f"Order {order} outside Hasse-Weil interval [{lower}, {upper}] for p = {p}")
    logger.debug(f"📊 #J = {order} for y^2 = {curve.f} over F_{p}")
    return order


def curve_from_coefficients(p: int, coeffs: list[int]) -> HyperCurve:
    """Curve y^2 = f with f given low-to-high."""
    field = PrimeField(p)
    return HyperCurve(field, field.poly(coeffs))