"""
Uniform interface over the unknown-order group backends.

Every backend is a GroupHandle; elements travel as ElementHandle values
tagged with the descriptor of the group that produced them. Wire encodings
end in a 4-byte SHA-256 tag bound to the descriptor, so corrupted or
foreign encodings are rejected on decode.
"""

import hashlib
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from math import gcd
from typing import Any

from config import settings
from services import classgroup, jacobian
from services.classgroup import Discriminant, QuadForm
from services.divisor_codec import compress_divisor, decompress_divisor, decode_divisor, encode_divisor
from services.formcodec import CompressedForm, compress, decompress
from services.jacobian import HyperCurve, MumfordDivisor
from utils.bytestream import ByteStream
from utils.decorators import require_known_order_groups
from utils.errors import CorruptEncodingError, DomainError, GroupMismatchError, UogError
from utils.numtheory import invmod
from utils.polynomials import PrimeField

logger = logging.getLogger(__name__)

TAG_BYTES = 4


@dataclass(frozen=True)
class ElementHandle:
    descriptor: str
    value: Any


class GroupHandle(ABC):
    """Abstract group with compact element encodings."""

    descriptor: str

    # backend hooks on raw values

    @abstractmethod
    def _op(self, x, y): ...

    @abstractmethod
    def _inverse(self, x): ...

    @abstractmethod
    def _identity(self): ...

    @abstractmethod
    def _encode_raw(self, x) -> bytes: ...

    @abstractmethod
    def _decode_raw(self, data: bytes): ...

    @abstractmethod
    def _sample(self, seed: bytes): ...

    @abstractmethod
    def _is_member(self, x) -> bool: ...

    def _equal(self, x, y) -> bool:
        return x == y

    def _key(self, x) -> bytes:
        return self._encode_raw(x)

    def _scalar(self, x, n: int):
        if n < 0:
            x, n = self._inverse(x), -n
        result = self._identity()
        for bit in bin(n)[2:] if n else "":
            result = self._op(result, result)
            if bit == "1":
                result = self._op(result, x)
        return result

    # public interface on ElementHandles

    def wrap(self, value) -> ElementHandle:
        return ElementHandle(self.descriptor, value)

    def _unwrap(self, element: ElementHandle):
        if not isinstance(element, ElementHandle) or element.descriptor != self.descriptor:
            other = getattr(element, "descriptor", type(element).__name__)
            raise GroupMismatchError(f"Element of {other} used in group {self.descriptor}")
        return element.value

    def op(self, e1: ElementHandle, e2: ElementHandle) -> ElementHandle:
        return self.wrap(self._op(self._unwrap(e1), self._unwrap(e2)))

    def inverse(self, e: ElementHandle) -> ElementHandle:
        return self.wrap(self._inverse(self._unwrap(e)))

    def identity(self) -> ElementHandle:
        return self.wrap(self._identity())

    def equal(self, e1: ElementHandle, e2: ElementHandle) -> bool:
        return self._equal(self._unwrap(e1), self._unwrap(e2))

    def is_identity(self, e: ElementHandle) -> bool:
        return self._equal(self._unwrap(e), self._identity())

    def scalar(self, e: ElementHandle, n: int) -> ElementHandle:
        return self.wrap(self._scalar(self._unwrap(e), n))

    def canonical_bytes(self, e: ElementHandle) -> bytes:
        """Cheap unique byte key for hash tables."""
        return self._key(self._unwrap(e))

    def _tag(self, raw: bytes) -> bytes:
        return hashlib.sha256(self.descriptor.encode("ascii") + raw).digest()[:TAG_BYTES]

    def encode(self, e: ElementHandle) -> bytes:
        raw = self._encode_raw(self._unwrap(e))
        return raw + self._tag(raw)

    def decode(self, data: bytes) -> ElementHandle:
        if len(data) < TAG_BYTES:
            raise CorruptEncodingError("Encoding shorter than its integrity tag")
        raw, tag = bytes(data[:-TAG_BYTES]), bytes(data[-TAG_BYTES:])
        if self._tag(raw) != tag:
            raise CorruptEncodingError(f"Integrity tag mismatch for group {self.descriptor}")
        value = self._decode_raw(raw)
        if not self._is_member(value):
            raise CorruptEncodingError(f"Decoded value is not an element of {self.descriptor}")
        return self.wrap(value)

    def sample(self, seed: bytes) -> ElementHandle:
        return self.wrap(self._sample(seed))

    def membership_check(self, e: ElementHandle) -> bool:
        if not isinstance(e, ElementHandle) or e.descriptor != self.descriptor:
            return False
        try:
            return bool(self._is_member(e.value))
        except (UogError, TypeError, AttributeError) as err:
            logger.debug(f"🔍 membership check raised {err}")
            return False

    def accepts_encoding(self, data: bytes) -> bool:
        """True iff data decodes to a member; never raises on malformed input."""
        try:
            return self.membership_check(self.decode(data))
        except (UogError, ValueError, IndexError):
            return False

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.descriptor})"


class ClassGroupHandle(GroupHandle):
    def __init__(self, disc):
        self.disc = disc if isinstance(disc, Discriminant) else Discriminant(int(disc))
        self.descriptor = f"clgrp:-{-self.disc.value:x}"

    def _op(self, x, y):
        return classgroup.compose(x, y)

    def _inverse(self, x):
        return classgroup.invert(x)

    def _identity(self):
        return classgroup.identity(self.disc)

    def _scalar(self, x, n):
        return classgroup.pow(x, n)

    def _encode_raw(self, x) -> bytes:
        return compress(x).to_bytes()

    def _decode_raw(self, data: bytes):
        return decompress(CompressedForm.from_bytes(data), self.disc)

    def _key(self, x) -> bytes:
        return classgroup.encode_form(x).encode("ascii")

    def _sample(self, seed: bytes):
        return classgroup.sample_element(self.disc, seed)

    def _is_member(self, x) -> bool:
        return isinstance(x, QuadForm) and x.discriminant == self.disc.value and x.is_reduced and x.is_primitive


class JacobianHandle(GroupHandle):
    def __init__(self, curve: HyperCurve):
        self.curve = curve
        coeffs = ",".join(f"{c:x}" for c in (curve.f.coefficient(i) for i in range(curve.f.degree + 1)))
        self.descriptor = f"hyell:{curve.p:x}:{coeffs}"

    def _op(self, x, y):
        return jacobian._compose(self.curve, x, y)

    def _inverse(self, x):
        return jacobian.negate(self.curve, x)

    def _identity(self):
        return jacobian.identity(self.curve)

    def _scalar(self, x, n):
        return jacobian.scalar_mul(self.curve, n, x)

    def _encode_raw(self, x) -> bytes:
        if settings.enable_divisor_compression:
            return compress_divisor(self.curve, x)
        return encode_divisor(self.curve, x)

    def _decode_raw(self, data: bytes):
        if settings.enable_divisor_compression:
            return decompress_divisor(self.curve, data)
        return decode_divisor(self.curve, data)

    def _key(self, x) -> bytes:
        return encode_divisor(self.curve, x)

    def _sample(self, seed: bytes):
        return jacobian.sample_divisor(self.curve, seed)

    def _is_member(self, x) -> bool:
        return isinstance(x, MumfordDivisor) and jacobian.validate(self.curve, x)


class MultModHandle(GroupHandle):
    """(Z/NZ)^*: known order, for tests and attack demonstrations."""

    def __init__(self, n: int):
        if n < 3 or n % 2 == 0:
            raise DomainError(f"Modulus must be odd and at least 3, got {n}")
        self.n = n
        self.width = (n.bit_length() + 7) // 8
        self.descriptor = f"zmulN:{n:x}"

    def _op(self, x, y):
        return x * y % self.n

    def _inverse(self, x):
        return invmod(x, self.n)

    def _identity(self):
        return 1

    def _scalar(self, x, n):
        return pow(x, n, self.n)

    def _encode_raw(self, x) -> bytes:
        return x.to_bytes(self.width, "big")

    def _decode_raw(self, data: bytes):
        if len(data) != self.width:
            raise CorruptEncodingError(f"Expected {self.width} bytes, got {len(data)}")
        value = int.from_bytes(data, "big")
        if not self._is_member(value):
            raise DomainError(f"{value} is not a unit modulo {self.n}")
        return value

    def _sample(self, seed: bytes):
        stream = ByteStream(seed)
        while True:
            value = stream.integer(self.n.bit_length() + 64) % self.n
            if self._is_member(value):
                return value

    def _is_member(self, x) -> bool:
        return isinstance(x, int) and 0 < x < self.n and gcd(x, self.n) == 1

    def element(self, value: int) -> ElementHandle:
        if not self._is_member(value % self.n):
            raise DomainError(f"{value} is not a unit modulo {self.n}")
        return self.wrap(value % self.n)

    def order_two_element(self) -> ElementHandle:
        return self.wrap(self.n - 1)


class CofactorHandle(GroupHandle):
    """[S]G with witness-carrying elements: value = (image, witness), image = [S]witness."""

    def __init__(self, base: GroupHandle, cofactor: int):
        if cofactor < 1:
            raise DomainError(f"Cofactor must be positive, got {cofactor}")
        self.base = base
        self.cofactor = cofactor
        self.descriptor = f"{base.descriptor}|cof:{cofactor:x}"

    def _op(self, x, y):
        return self.base._op(x[0], y[0]), self.base._op(x[1], y[1])

    def _inverse(self, x):
        return self.base._inverse(x[0]), self.base._inverse(x[1])

    def _identity(self):
        e = self.base._identity()
        return e, e

    def _equal(self, x, y) -> bool:
        return self.base._equal(x[0], y[0])

    def _scalar(self, x, n):
        return self.base._scalar(x[0], n), self.base._scalar(x[1], n)

    def _encode_raw(self, x) -> bytes:
        return self.base._encode_raw(x[1])

    def _decode_raw(self, data: bytes):
        witness = self.base._decode_raw(data)
        return self.base._scalar(witness, self.cofactor), witness

    def _key(self, x) -> bytes:
        return self.base._key(x[0])

    def _sample(self, seed: bytes):
        witness = self.base._sample(seed)
        return self.base._scalar(witness, self.cofactor), witness

    def _is_member(self, x) -> bool:
        if not isinstance(x, tuple) or len(x) != 2:
            return False
        image, witness = x
        if not self.base._is_member(witness):
            return False
        return self.base._equal(self.base._scalar(witness, self.cofactor), image)

    def lift(self, element: ElementHandle) -> ElementHandle:
        """[S]P for a base-group element P, carrying P as witness."""
        witness = self.base._unwrap(element)
        return self.wrap((self.base._scalar(witness, self.cofactor), witness))

    def image(self, element: ElementHandle) -> ElementHandle:
        return self.base.wrap(self._unwrap(element)[0])

    def witness(self, element: ElementHandle) -> ElementHandle:
        return self.base.wrap(self._unwrap(element)[1])


class CountingGroup(GroupHandle):
    """Wraps a group and counts op, inverse and scalar calls made through the wrapper.

    Scalar multiplication runs through counted ops. Not thread-safe; use one per hunt or check.
    """

    def __init__(self, inner: GroupHandle):
        self.inner = inner
        self.descriptor = inner.descriptor
        self.ops = 0
        self.inverses = 0
        self.scalars = 0
        self.scalar_exponents = []

    def reset(self) -> None:
        self.ops = self.inverses = self.scalars = 0
        self.scalar_exponents = []

    def _op(self, x, y):
        self.ops += 1
        return self.inner._op(x, y)

    def _inverse(self, x):
        self.inverses += 1
        return self.inner._inverse(x)

    def _identity(self):
        return self.inner._identity()

    def _equal(self, x, y) -> bool:
        return self.inner._equal(x, y)

    def _scalar(self, x, n):
        self.scalars += 1
        self.scalar_exponents.append(n)
        return GroupHandle._scalar(self, x, n)

    def _encode_raw(self, x) -> bytes:
        return self.inner._encode_raw(x)

    def _decode_raw(self, data: bytes):
        return self.inner._decode_raw(data)

    def _key(self, x) -> bytes:
        return self.inner._key(x)

    def _sample(self, seed: bytes):
        return self.inner._sample(seed)

    def _is_member(self, x) -> bool:
        return self.inner._is_member(x)

    def __getattr__(self, name):
        # backend extras such as order_two_element or lift
        if name == "inner":
            raise AttributeError(name)
        return getattr(self.inner, name)


def class_group_adapter(disc) -> ClassGroupHandle:
    return ClassGroupHandle(disc)


def jacobian_adapter(curve: HyperCurve) -> JacobianHandle:
    return JacobianHandle(curve)


@require_known_order_groups
def mult_mod_adapter(n: int) -> MultModHandle:
    return MultModHandle(n)


def cofactor_subgroup(group: GroupHandle, cofactor: int) -> CofactorHandle:
    return CofactorHandle(group, cofactor)


def parse_descriptor(text: str) -> GroupHandle:
    """Build a GroupHandle from its descriptor text."""
    text = text.strip()
    base_text, _, cof = text.partition("|cof:")
    try:
        kind, _, rest = base_text.partition(":")
        if kind == "clgrp":
            group = class_group_adapter(int(rest, 16))
        elif kind == "hyell":
            p_hex, _, coeff_hex = rest.partition(":")
            field = PrimeField(int(p_hex, 16))
            coeffs = [int(c, 16) for c in coeff_hex.split(",")]
            group = jacobian_adapter(HyperCurve(field, field.poly(coeffs)))
        elif kind == "zmulN":
            group = mult_mod_adapter(int(rest, 16))
        else:
            raise DomainError(f"Unknown group kind {kind!r}")
        if cof:
            group = cofactor_subgroup(group, int(cof, 16))
    except ValueError as e:
        if isinstance(e, UogError):
            raise
        raise DomainError(f"Malformed group descriptor {text!r}: {e}")
    return group
