"""
Derivation transcripts for trustless generation.

One line per stream draw: ``index purpose hex verdict``. A verifier replays the
seed and compares the digest.
"""

import hashlib
from dataclasses import dataclass, field
from typing import List

PENDING = "pending"


@dataclass
class TranscriptEntry:
    index: int
    purpose: str
    data: bytes
    verdict: str = PENDING

    def render(self) -> str:
        return f"{self.index} {self.purpose} {self.data.hex()} {self.verdict}"


@dataclass
class Transcript:
    entries: List[TranscriptEntry] = field(default_factory=list)
    _unresolved: int = field(default=0, repr=False, compare=False)

    def record(self, purpose: str, data: bytes, verdict: str = PENDING) -> TranscriptEntry:
        entry = TranscriptEntry(len(self.entries), purpose, data, verdict)
        self.entries.append(entry)
        return entry

    def resolve(self, verdict: str) -> int:
        """Set the verdict of every pending entry; returns how many were resolved."""
        resolved = 0
        for entry in self.entries[self._unresolved:]:
            if entry.verdict == PENDING:
                entry.verdict = verdict
                resolved += 1
        self._unresolved = len(self.entries)
        return resolved

    def count(self, verdict_prefix: str) -> int:
        return sum(1 for e in self.entries if e.verdict.startswith(verdict_prefix))

    def render(self) -> str:
        return "".join(entry.render() + "\n" for entry in self.entries)

    def digest(self) -> str:
        return hashlib.sha256(self.render().encode("ascii")).hexdigest()
