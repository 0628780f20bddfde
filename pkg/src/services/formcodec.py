"""
Compression of reduced class group elements to about 3/4 of log2|D| bits.

A reduced form (a, b, c) is stored as (a', g, t', b0, e): a = g*a', the
partial extended gcd of (a, |b|) gives t with |t| <= sqrt(a), and the
remaining information about b is its residue b0 modulo a small f >= g.
The decoder recovers b modulo a' from a square root and glues the two
residues with CRT.
"""

import logging
from dataclasses import dataclass
from typing import Iterable

import gmpy2

from services.classgroup import QuadForm, _as_disc
from utils.errors import (
    CorruptEncodingError,
    DiscriminantMismatchError,
    DomainError,
    InexactSquareRootError,
    NonInvertibleError,
)
from utils.numtheory import crt_pair, int_sqrt, invmod

logger = logging.getLogger(__name__)

WIRE_PREFIX = "cf1:"

FLAG_G_NEGATIVE = 0x01
FLAG_T_NEGATIVE = 0x02
FLAG_EPSILON = 0x04


@dataclass(frozen=True)
class CompressedForm:
    a_prime: int
    g: int
    t_prime: int
    b0: int
    eps: int

    @property
    def is_b_zero_sentinel(self) -> bool:
        return self.g == 0 and self.t_prime == 0 and self.b0 == 0 and self.eps == 0

    def bit_length(self) -> int:
        """Information size: field magnitudes plus the three flag bits."""
        return sum(abs(v).bit_length() for v in (self.a_prime, self.g, self.t_prime, self.b0)) + 3

    def to_bytes(self) -> bytes:
        out = bytearray()
        for value in (self.a_prime, self.g, self.t_prime, self.b0):
            magnitude = abs(value)
            raw = magnitude.to_bytes((magnitude.bit_length() + 7) // 8, "big")
            out += _varint(len(raw)) + raw
        flags = 0
        if self.g < 0:
            flags |= FLAG_G_NEGATIVE
        if self.t_prime < 0:
            flags |= FLAG_T_NEGATIVE
        if self.eps:
            flags |= FLAG_EPSILON
        out.append(flags)
        return bytes(out)

    @classmethod
    def from_bytes(cls, data: bytes) -> "CompressedForm":
        pos, fields = 0, []
        try:
            for _ in range(4):
                length, pos = _read_varint(data, pos)
                if pos + length > len(data):
                    raise CorruptEncodingError("Field runs past end of encoding")
                fields.append(int.from_bytes(data[pos:pos + length], "big"))
                pos += length
            if pos != len(data) - 1:
                raise CorruptEncodingError("Trailing flag byte missing or extra bytes present")
        except IndexError:
            raise CorruptEncodingError("Truncated compressed form")
        flags = data[pos]
        if flags & ~(FLAG_G_NEGATIVE | FLAG_T_NEGATIVE | FLAG_EPSILON):
            raise CorruptEncodingError(f"Unknown flag bits {flags:#x}")
        a_prime, g, t_prime, b0 = fields
        if flags & FLAG_G_NEGATIVE:
            g = -g
        if flags & FLAG_T_NEGATIVE:
            t_prime = -t_prime
        return cls(a_prime, g, t_prime, b0, 1 if flags & FLAG_EPSILON else 0)

    def to_text(self) -> str:
        return WIRE_PREFIX + self.to_bytes().hex()

    @classmethod
    def from_text(cls, text: str) -> "CompressedForm":
        text = text.strip()
        if not text.startswith(WIRE_PREFIX):
            raise CorruptEncodingError(f"Missing {WIRE_PREFIX} prefix")
        try:
            raw = bytes.fromhex(text[len(WIRE_PREFIX):])
        except ValueError as e:
            raise CorruptEncodingError(f"Bad hex in compressed form: {e}")
        return cls.from_bytes(raw)


def _varint(n: int) -> bytes:
    out = bytearray()
    while True:
        byte = n & 0x7F
        n >>= 7
        if n:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return bytes(out)


def _read_varint(data: bytes, pos: int) -> tuple[int, int]:
    value, shift = 0, 0
    while True:
        byte = data[pos]
        pos += 1
        value |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return value, pos
        shift += 7
        if shift > 63:
            raise CorruptEncodingError("Varint too long")


def partial_xgcd(a: int, b: int) -> tuple[int, int]:
    """Stop the extended Euclidean algorithm on (a, b) once s < sqrt(a).

    Returns (s, t) with s = b*t mod a, 0 <= s < sqrt(a), 0 < |t| <= sqrt(a).
    """
    if not a > b > 0:
        raise DomainError(f"partial_xgcd needs a > b > 0, got a={a}, b={b}")
    s, s_prev = gmpy2.mpz(b), gmpy2.mpz(a)
    t, t_prev = gmpy2.mpz(1), gmpy2.mpz(0)
    while s * s >= a:
        q = s_prev // s
        s, s_prev = s_prev - q * s, s
        t, t_prev = t_prev - q * t, t
    return int(s), int(t)


def _f_modulus(g: int, a_prime: int, a: int) -> int:
    """Smallest f >= |g| with lcm(f, a') >= a."""
    f = abs(g)
    while gmpy2.lcm(f, a_prime) < a:
        f += 1
    return f


def compress(form: QuadForm) -> CompressedForm:
    if not form.is_reduced:
        raise DomainError(f"Only reduced forms can be compressed, got {form}")
    a, b = form.a, form.b
    if b == 0:
        return CompressedForm(a, 0, 0, 0, 0)
    if a == b:
        return CompressedForm(1, a, 0, 0, 0)
    eps = 1 if b < 0 else 0
    b = abs(b)
    _, t = partial_xgcd(a, b)
    g = int(gmpy2.gcd(a, t))
    a_prime, t_prime = a // g, t // g
    f = _f_modulus(g, a_prime, a)
    return CompressedForm(a_prime, g, t_prime, b % f, eps)


def decompress(cf: CompressedForm, disc) -> QuadForm:
    """Inverse of compress; every failure path raises a distinct CorruptEncodingError."""
    d = _as_disc(disc).value
    if cf.is_b_zero_sentinel:
        a = cf.a_prime
        if a <= 0 or d % (4 * a):
            raise DiscriminantMismatchError(f"b = 0 form with a = {a} does not fit D = {d}")
        return _checked(QuadForm(a, 0, -d // (4 * a)))
    if cf.t_prime == 0:
        if cf.a_prime != 1 or cf.g <= 0 or cf.b0 != 0 or cf.eps != 0:
            raise CorruptEncodingError("Malformed a = b sentinel")
        g = cf.g
        if (g * g - d) % (4 * g):
            raise DiscriminantMismatchError(f"a = b = {g} does not fit D = {d}")
        return _checked(QuadForm(g, g, (g * g - d) // (4 * g)))

    if cf.a_prime <= 0 or cf.g <= 0 or cf.b0 < 0:
        raise CorruptEncodingError("Compressed form fields out of range")
    a = cf.g * cf.a_prime
    t = cf.g * cf.t_prime
    x = (t * t * d) % a
    s, exact = int_sqrt(x)
    if not exact:
        raise InexactSquareRootError(f"{x} is not a perfect square")
    if s % cf.g:
        raise CorruptEncodingError("Square root is not divisible by g")
    s_prime = s // cf.g
    try:
        b_prime = s_prime * invmod(cf.t_prime, cf.a_prime) % cf.a_prime
    except ZeroDivisionError:
        raise NonInvertibleError(f"t' = {cf.t_prime} is not invertible mod a' = {cf.a_prime}")
    f = _f_modulus(cf.g, cf.a_prime, a)
    if cf.b0 >= f:
        raise CorruptEncodingError(f"b0 = {cf.b0} not reduced modulo f = {f}")
    try:
        b = crt_pair(b_prime, cf.a_prime, cf.b0, f)
    except DomainError as e:
        raise CorruptEncodingError(f"Inconsistent residues: {e}")
    if cf.eps:
        b = -b
    if (b * b - d) % (4 * a):
        raise DiscriminantMismatchError(f"Recovered (a, b) = ({a}, {b}) does not fit D = {d}")
    return _checked(QuadForm(a, b, (b * b - d) // (4 * a)))


def _checked(form: QuadForm) -> QuadForm:
    if not form.is_reduced:
        raise CorruptEncodingError(f"Decoded form {form} is not reduced")
    if not form.is_primitive:
        raise CorruptEncodingError(f"Decoded form {form} is not primitive")
    return form


def f_gap(form: QuadForm) -> int:
    """f - g for the compressed form of a reduced form (0 for the sentinels)."""
    cf = compress(form)
    if cf.is_b_zero_sentinel or cf.t_prime == 0:
        return 0
    return _f_modulus(cf.g, cf.a_prime, cf.g * cf.a_prime) - cf.g


def compression_statistics(forms: Iterable[QuadForm]) -> dict:
    """Mean and max of f - g plus mean payload size over a sample of forms."""
    count, gap_sum, gap_max, bits_sum = 0, 0, 0, 0
    for form in forms:
        gap = f_gap(form)
        count += 1
        gap_sum += gap
        gap_max = max(gap_max, gap)
        bits_sum += compress(form).bit_length()
    if count == 0:
        raise DomainError("No forms given")
    stats = {
        "count": count,
        "mean_gap": gap_sum / count,
        "max_gap": gap_max,
        "mean_bits": bits_sum / count,
    }
    logger.info(f"📊 Compression stats over {count} forms: mean f-g {stats['mean_gap']:.4f}, max {gap_max}")
    return stats
