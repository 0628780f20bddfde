"""
Byte encodings for Mumford divisors.

encode_divisor/decode_divisor: "jd1:" + degree tag + fixed-width u and v
coefficients.

compress_divisor/decompress_divisor: for deg u = 3 with squarefree u, only
the three low coefficients of u travel, plus one bit per irreducible factor
of u saying which square root of f to take modulo that factor. Everything
else falls back to an explicit tagged encoding.
"""

import logging

from config import settings
from services.jacobian import GENUS, HyperCurve, MumfordDivisor, validate
from utils.errors import ConfigurationError, CorruptEncodingError, InconsistentSignBitsError
from utils.polynomials import canonical_roots, poly_is_squarefree, poly_sqrt_mod

logger = logging.getLogger(__name__)

DIVISOR_PREFIX = b"jd1:"

TAG_COMPRESSED = 0x03
TAG_EXPLICIT = 0x04
TAG_DEGREE_MASK = 0x03
SIGN_SHIFT = 2


def _explicit_body(curve: HyperCurve, divisor: MumfordDivisor) -> bytes:
    d = divisor.degree
    field = curve.field
    u_part = b"".join(field.encode_element(divisor.u.coefficient(i)) for i in range(d))
    v_part = b"".join(field.encode_element(divisor.v.coefficient(i)) for i in range(d))
    return u_part + v_part


def _parse_explicit(curve: HyperCurve, degree: int, body: bytes) -> MumfordDivisor:
    field = curve.field
    width = field.element_width
    if degree > GENUS or len(body) != 2 * degree * width:
        raise CorruptEncodingError(f"Explicit divisor body has wrong length {len(body)} for degree {degree}")
    try:
        values = [field.decode_element(body[i * width:(i + 1) * width]) for i in range(2 * degree)]
    except ValueError as e:
        raise CorruptEncodingError(str(e))
    u = field.poly(values[:degree] + [1])
    v = field.poly(values[degree:])
    divisor = MumfordDivisor(u, v)
    if not validate(curve, divisor):
        raise CorruptEncodingError(f"Decoded pair {divisor} is not a valid divisor")
    return divisor


def encode_divisor(curve: HyperCurve, divisor: MumfordDivisor) -> bytes:
    if not validate(curve, divisor):
        raise CorruptEncodingError(f"Refusing to encode invalid divisor {divisor}")
    return DIVISOR_PREFIX + bytes([divisor.degree]) + _explicit_body(curve, divisor)


def decode_divisor(curve: HyperCurve, data: bytes) -> MumfordDivisor:
    if not data.startswith(DIVISOR_PREFIX) or len(data) < len(DIVISOR_PREFIX) + 1:
        raise CorruptEncodingError("Missing jd1: prefix")
    degree = data[len(DIVISOR_PREFIX)]
    return _parse_explicit(curve, degree, data[len(DIVISOR_PREFIX) + 1:])


def _require_enabled() -> None:
    if not settings.enable_divisor_compression:
        raise ConfigurationError("Divisor compression is disabled (UOG_ENABLE_DIVISOR_COMPRESSION)")


def compress_divisor(curve: HyperCurve, divisor: MumfordDivisor) -> bytes:
    """Compact encoding: 3 field elements and one tag byte for generic divisors."""
    _require_enabled()
    if not validate(curve, divisor):
        raise CorruptEncodingError(f"Refusing to compress invalid divisor {divisor}")
    u, v = divisor.u, divisor.v
    if divisor.degree < GENUS or not poly_is_squarefree(u):
        tag = divisor.degree if divisor.degree < GENUS else TAG_EXPLICIT
        return bytes([tag]) + _explicit_body(curve, divisor)

    roots = canonical_roots(curve.f, u)
    signs = 0
    for i, (g, root, _) in enumerate(roots):
        if v % g != root:
            signs |= 1 << i
    field = curve.field
    body = b"".join(field.encode_element(u.coefficient(i)) for i in range(GENUS))
    return bytes([TAG_COMPRESSED | (signs << SIGN_SHIFT)]) + body


def decompress_divisor(curve: HyperCurve, data: bytes) -> MumfordDivisor:
    _require_enabled()
    if not data:
        raise CorruptEncodingError("Empty divisor encoding")
    tag, body = data[0], data[1:]
    if tag == TAG_EXPLICIT:
        divisor = _parse_explicit(curve, GENUS, body)
        if poly_is_squarefree(divisor.u):
            raise CorruptEncodingError("Squarefree cubic divisor must use the compressed form")
        return divisor
    if tag & TAG_DEGREE_MASK != TAG_COMPRESSED:
        if tag > TAG_DEGREE_MASK:
            raise CorruptEncodingError(f"Unknown divisor tag {tag:#x}")
        return _parse_explicit(curve, tag, body)

    field = curve.field
    width = field.element_width
    if len(body) != GENUS * width:
        raise CorruptEncodingError(f"Compressed divisor body has wrong length {len(body)}")
    try:
        coeffs = [field.decode_element(body[i * width:(i + 1) * width]) for i in range(GENUS)]
    except ValueError as e:
        raise CorruptEncodingError(str(e))
    u = field.poly(coeffs + [1])
    if not poly_is_squarefree(u):
        raise CorruptEncodingError(f"Compressed u = {u} is not squarefree")
    signs = tag >> SIGN_SHIFT
    roots = canonical_roots(curve.f, u)
    if roots is None:
        raise CorruptEncodingError(f"f has no square root modulo u = {u}")
    if signs >> len(roots):
        raise InconsistentSignBitsError(f"Sign bits {signs:#b} exceed the {len(roots)} factors of u")
    for i, (_, root, other) in enumerate(roots):
        if (signs >> i) & 1 and root == other:
            raise InconsistentSignBitsError("Sign bit set on a factor where both roots coincide")
    v = poly_sqrt_mod(curve.f, u, signs)
    return MumfordDivisor(u, v)
