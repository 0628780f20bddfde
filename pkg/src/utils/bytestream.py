"""
Deterministic byte expansion and hash-to-prime.

Block i of the stream is SHA-256(seed || be64(i)); reads consume the
concatenated blocks left to right.
"""

import hashlib
import logging
from typing import Callable, Optional

from utils.errors import DomainError
from utils.numtheory import is_probable_prime
from utils.transcript import Transcript

logger = logging.getLogger(__name__)

FIELD_EXCESS_BITS = 64


class ByteStream:
    """Counter-mode SHA-256 expansion of a seed."""

    def __init__(self, seed: bytes, transcript: Optional[Transcript] = None):
        self.seed = bytes(seed)
        self.transcript = transcript
        self._counter = 0
        self._buffer = b""
        self.position = 0

    def _next_block(self) -> bytes:
        block = hashlib.sha256(self.seed + self._counter.to_bytes(8, "big")).digest()
        self._counter += 1
        return block

    def read(self, n: int, purpose: Optional[str] = None) -> bytes:
        """Next n bytes; recorded in the transcript when a purpose is given."""
        if n < 0:
            raise DomainError(f"Cannot read {n} bytes")
        while len(self._buffer) < n:
            self._buffer += self._next_block()
        data, self._buffer = self._buffer[:n], self._buffer[n:]
        self.position += n
        if purpose is not None and self.transcript is not None:
            self.transcript.record(purpose, data)
        return data

    def integer(self, bits: int, purpose: Optional[str] = None) -> int:
        """Uniform integer in [0, 2**bits)."""
        if bits < 1:
            raise DomainError(f"Integer draws need at least one bit, got {bits}")
        raw = int.from_bytes(self.read((bits + 7) // 8, purpose), "big")
        return raw >> ((8 - bits % 8) % 8)

    def field_element(self, p: int, purpose: Optional[str] = None) -> int:
        """Element of F_p with bias below 2^-64."""
        width = (p.bit_length() + FIELD_EXCESS_BITS + 7) // 8
        return int.from_bytes(self.read(width, purpose), "big") % p

    def byte(self, purpose: Optional[str] = None) -> int:
        return self.read(1, purpose)[0]


def hash_to_prime(seed: bytes, bits: int,
                  constraint: Optional[Callable[[int], bool]] = None,
                  transcript: Optional[Transcript] = None) -> int:
    """First probable prime among bits-bit candidates (top bit forced) drawn from the stream of seed."""
    if bits < 2:
        raise DomainError(f"hash_to_prime needs at least 2 bits, got {bits}")
    stream = ByteStream(seed, transcript)
    purpose = "prime" if transcript is not None else None
    top = 1 << (bits - 1)
    attempts = 0
    while True:
        attempts += 1
        candidate = stream.integer(bits, purpose) | top
        if constraint is not None and not constraint(candidate):
            verdict = "rejected:constraint"
        elif not is_probable_prime(candidate):
            verdict = "rejected:composite"
        else:
            if transcript is not None:
                transcript.resolve("accepted")
            logger.debug(f"✅ hash_to_prime found a {bits}-bit prime after {attempts} candidates")
            return candidate
        if transcript is not None:
            transcript.resolve(verdict)
