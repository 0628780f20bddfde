"""
Trustless group generation and security parameter selection.

Group sizes follow the (lambda, rho) table: an attacker with 2^lambda work
should find a weak group with probability at most 2^-rho, where weakness
means a semismooth group order for smoothness parameter u = bits/lambda.
All generation randomness comes from a public seed through the SHA-256
byte stream, and every draw is written to a transcript.
"""

import logging
import math
from dataclasses import dataclass, field

from pydantic import BaseModel, ConfigDict, field_validator

from config import settings
from services import classgroup
from services.classgroup import Discriminant, QuadForm
from services.groupapi import ClassGroupHandle, GroupHandle, JacobianHandle
from services.jacobian import HyperCurve, MumfordDivisor
from utils.bytestream import ByteStream, hash_to_prime
from utils.decorators import log_duration
from utils.errors import DomainError, GenerationError, NotSquarefreeError
from utils.numtheory import lcm_range
from utils.polynomials import FpPoly, PrimeField, poly_is_irreducible, poly_is_squarefree
from utils.transcript import Transcript

logger = logging.getLogger(__name__)

RHO_GRID = (40, 55, 64, 80, 100, 128)

GROUP_SIZE_TABLE = {
    55: (660, 825, 880, 1045, 1265, 1430),
    80: (960, 1200, 1280, 1520, 1840, 2080),
    100: (1200, 1500, 1600, 1900, 2300, 2600),
    128: (1536, 1920, 2048, 2432, 2944, 3392),
}

# smoothness parameter u for each failure-probability level rho
RHO_TO_U = {40: 12.0, 55: 15.0, 64: 16.0, 80: 19.0, 100: 23.0, 128: 26.5}

MIN_LEVEL = 40
BIT_GRANULARITY = 8

KNOWN_ORDER_ELL = 7


def smoothness_for_rho(rho: float) -> float:
    """u for failure level rho: the table map, linear in between, last slope above 128."""
    if rho < MIN_LEVEL:
        raise DomainError(f"rho = {rho} is below {MIN_LEVEL}")
    points = sorted(RHO_TO_U.items())
    for (r0, u0), (r1, u1) in zip(points, points[1:]):
        if rho <= r1:
            return u0 + (u1 - u0) * (rho - r0) / (r1 - r0)
    (r0, u0), (r1, u1) = points[-2], points[-1]
    return u1 + (u1 - u0) * (rho - r1) / (r1 - r0)


def group_size_for(lam: int, rho: int) -> int:
    """Group size in bits for attack cost 2^lam and failure probability 2^-rho."""
    if lam < MIN_LEVEL or rho < MIN_LEVEL:
        raise DomainError(f"(lambda, rho) = ({lam}, {rho}) is outside the supported regime (both >= {MIN_LEVEL})")
    if lam in GROUP_SIZE_TABLE and rho in RHO_GRID:
        return GROUP_SIZE_TABLE[lam][RHO_GRID.index(rho)]
    bits = math.ceil(smoothness_for_rho(rho) * lam)
    return -(-bits // BIT_GRANULARITY) * BIT_GRANULARITY


class SecurityParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    lam: int
    rho: int
    u_smooth: float
    group_bits: int

    @field_validator("lam", "rho")
    @classmethod
    def validate_level(cls, v):
        if v < MIN_LEVEL:
            raise ValueError(f"Security levels below {MIN_LEVEL} bits are not supported")
        return v

    @classmethod
    def for_level(cls, lam: int, rho: int) -> "SecurityParams":
        bits = group_size_for(lam, rho)
        return cls(lam=lam, rho=rho, u_smooth=bits / lam, group_bits=bits)


@dataclass
class GenOutput:
    params: SecurityParams
    p: int
    curve: HyperCurve
    P: MumfordDivisor
    seed: bytes
    transcript: Transcript = field(default_factory=Transcript)
    rejections: int = 0


@dataclass
class ClassGroupGenOutput:
    params: SecurityParams
    discriminant: Discriminant
    generator: QuadForm
    seed: bytes
    transcript: Transcript = field(default_factory=Transcript)


def _draw_poly(stream: ByteStream, field_: PrimeField, degree: int, tag: str, monic: bool) -> FpPoly:
    count = degree if monic else degree + 1
    coeffs = [stream.field_element(field_.p, f"{tag}{i}") for i in range(count)]
    return field_.poly(coeffs + ([1] if monic else []))


@log_duration("gen_jacobian")
def gen_jacobian(lam: int, rho: int, seed: bytes) -> GenOutput:
    """Random genus-3 curve with irreducible f and a known point P, derived from seed."""
    params = SecurityParams.for_level(lam, rho)
    bits = -(-params.group_bits // 3)
    transcript = Transcript()
    p = hash_to_prime(seed + b"p", bits, transcript=transcript)
    field_ = PrimeField(p)
    logger.info(f"🔍 gen_jacobian: {bits}-bit prime field for lambda={lam}, rho={rho}")

    stream = ByteStream(seed + b"curve", transcript)
    u = _draw_poly(stream, field_, 3, "u", monic=True)
    transcript.resolve("accepted")
    v = _draw_poly(stream, field_, 2, "v", monic=False)
    transcript.resolve("accepted")

    for iteration in range(1, settings.gen_max_iterations + 1):
        w = _draw_poly(stream, field_, 4, "w", monic=True)
        f = v * v + u * w
        if not poly_is_squarefree(f):
            transcript.resolve("rejected:not-squarefree")
            continue
        if not poly_is_irreducible(f):
            transcript.resolve("rejected:reducible")
            continue
        transcript.resolve("accepted")
        curve = HyperCurve(field_, f)
        rejections = iteration - 1
        logger.info(f"✅ gen_jacobian accepted f after {rejections} rejections")
        return GenOutput(params, p, curve, MumfordDivisor(u, v % u), bytes(seed), transcript, rejections)

    logger.error(f"❌ gen_jacobian gave up after {settings.gen_max_iterations} iterations")
    raise GenerationError(f"No irreducible f within {settings.gen_max_iterations} iterations")


@log_duration("gen_classgroup")
def gen_classgroup(lam: int, rho: int, seed: bytes) -> ClassGroupGenOutput:
    """Prime discriminant D = -q, q = 3 mod 4, of 2*group_bits bits, plus a generator."""
    params = SecurityParams.for_level(lam, rho)
    bits = 2 * params.group_bits
    transcript = Transcript()
    q = hash_to_prime(seed + b"d", bits, constraint=lambda c: c % 4 == 3, transcript=transcript)
    disc = Discriminant(-q)
    generator = classgroup.sample_element(disc, seed + b"g")
    logger.info(f"✅ gen_classgroup: {bits}-bit discriminant after {len(transcript.entries)} candidates")
    return ClassGroupGenOutput(params, disc, generator, bytes(seed), transcript)


def verify_generation(output: GenOutput) -> bool:
    """Replay generation from the seed and compare every artefact."""
    replay = gen_jacobian(output.params.lam, output.params.rho, output.seed)
    same = (replay.curve == output.curve and replay.P == output.P
            and replay.transcript.digest() == output.transcript.digest())
    if not same:
        logger.warning("⚠️ Generation replay does not match the published output")
    return same


def known_order_curve(field_: PrimeField, c: FpPoly) -> tuple[HyperCurve, MumfordDivisor]:
    """Curve y^2 = x^7 + c(x)^2 with the order-7 divisor (0, c(0)) - infinity."""
    if c.field != field_:
        raise DomainError("c lives over a different field")
    if c.degree > 3:
        raise DomainError(f"deg c must be at most 3, got {c.degree}")
    x = field_.x()
    f = field_.poly([0] * KNOWN_ORDER_ELL + [1]) + c * c
    if not poly_is_squarefree(f):
        raise NotSquarefreeError(f"x^7 + ({c})^2 is not squarefree over F_{field_.p}")
    curve = HyperCurve(field_, f)
    return curve, MumfordDivisor(x, field_.poly([c(0)]))


def find_known_order_curve(field_: PrimeField, seed: bytes) -> tuple[HyperCurve, MumfordDivisor, FpPoly]:
    """Draw c from the seed stream until x^7 + c^2 is squarefree."""
    stream = ByteStream(seed)
    while True:
        c = field_.poly([stream.field_element(field_.p) for _ in range(4)])
        try:
            curve, divisor = known_order_curve(field_, c)
        except NotSquarefreeError:
            logger.debug(f"🔍 c = {c} rejected, retrying")
            continue
        return curve, divisor, c


def cofactor_S(bound: int) -> int:
    return lcm_range(bound)


def default_cofactor_bound(group: GroupHandle) -> int:
    """60 for Jacobians; 1 for prime-discriminant class groups, 2 otherwise."""
    if isinstance(group, JacobianHandle):
        return settings.jacobian_cofactor_bound
    if isinstance(group, ClassGroupHandle):
        return 1 if group.disc.is_trustless else 2
    raise DomainError(f"No default cofactor for {group.descriptor}")

