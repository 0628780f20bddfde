"""
Proof of Exponentiation over any GroupHandle.

Plain PoE: the prover shows w = base^x by sending Q = base^(x // ell) for a
verifier-chosen prime ell; the verifier checks Q^ell * base^(x mod ell) = w.

Cofactor PoE works in [S]G: the claim is W = [S][x]U and the verifier
multiplies by S itself, which kills every element whose order divides S.
Without the cofactor an element of order 2 lets anyone prove false claims,
see forge_with_low_order.
"""

import hashlib
import logging
from dataclasses import dataclass, replace
from typing import Optional

from config import settings
from services.groupapi import ElementHandle, GroupHandle
from utils.bytestream import hash_to_prime
from utils.errors import DomainError, UogError
from utils.numtheory import is_probable_prime

logger = logging.getLogger(__name__)

CONTEXT_TAG = b"uog-poe-v1"
MIN_CHALLENGE_BITS = 16


@dataclass(frozen=True)
class PoEStatement:
    descriptor: str
    base: ElementHandle
    x: int
    claim: ElementHandle


@dataclass(frozen=True)
class PoEProof:
    ell: int
    Q: ElementHandle
    cofactor: Optional[int] = None


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    reason: str = "ok"

    def __bool__(self) -> bool:
        return self.accepted


def _reject(reason: str) -> Verdict:
    logger.info(f"❌ PoE rejected: {reason}")
    return Verdict(False, reason)


def _check_exponent(x: int) -> None:
    if x < 0:
        raise DomainError(f"Exponent must be non-negative, got {x}")


def _check_challenge(ell: int) -> None:
    if not is_probable_prime(ell):
        raise DomainError(f"Challenge {ell} is not prime")


def statement_bytes(group: GroupHandle, statement: PoEStatement) -> bytes:
    """Canonical encoding hashed for the challenge; each field is length-prefixed."""
    x_len = max(1, (statement.x.bit_length() + 7) // 8)
    parts = [
        statement.descriptor.encode("ascii"),
        group.encode(statement.base),
        statement.x.to_bytes(x_len, "big"),
        group.encode(statement.claim),
        CONTEXT_TAG,
    ]
    return b"".join(len(part).to_bytes(4, "big") + part for part in parts)


def poe_prove(group: GroupHandle, base: ElementHandle, x: int, ell: int) -> PoEProof:
    _check_exponent(x)
    _check_challenge(ell)
    return PoEProof(ell, group.scalar(base, x // ell))


def _statement_problem(group: GroupHandle, statement: PoEStatement, proof: PoEProof) -> Optional[str]:
    if statement.descriptor != group.descriptor:
        return f"statement is for {statement.descriptor}, not {group.descriptor}"
    if statement.x < 0:
        return "negative exponent"
    if proof.ell < 2 or not is_probable_prime(proof.ell):
        return f"challenge {proof.ell} is not prime"
    for name, element in (("base", statement.base), ("claim", statement.claim), ("Q", proof.Q)):
        if not group.membership_check(element):
            return f"{name} is not a group element"
    return None


def poe_verify(group: GroupHandle, statement: PoEStatement, proof: PoEProof) -> Verdict:
    """Accept iff Q is in the group and Q^ell * base^(x mod ell) = claim."""
    problem = _statement_problem(group, statement, proof)
    if problem:
        return _reject(problem)
    r = statement.x % proof.ell
    lhs = group.op(group.scalar(proof.Q, proof.ell), group.scalar(statement.base, r))
    if not group.equal(lhs, statement.claim):
        return _reject("Q^ell * base^r does not match the claim")
    return Verdict(True)


def poe_prove_cofactor(group: GroupHandle, U: ElementHandle, x: int, S: int, ell: int) -> PoEProof:
    """Proof for W = [S][x]U; ell must not be one of the primes dividing S."""
    _check_exponent(x)
    _check_challenge(ell)
    if S < 1:
        raise DomainError(f"Cofactor must be positive, got {S}")
    if S % ell == 0:
        raise DomainError(f"Challenge {ell} divides the cofactor and is excluded")
    return PoEProof(ell, group.scalar(U, x // ell), cofactor=S)


def poe_verify_cofactor(group: GroupHandle, statement: PoEStatement, proof: PoEProof) -> Verdict:
    """Accept iff Q is in G and [S]([ell]Q + [r]U) = W."""
    if proof.cofactor is None or proof.cofactor < 1:
        return _reject("proof carries no cofactor")
    if proof.cofactor % proof.ell == 0:
        return _reject(f"challenge {proof.ell} divides the cofactor")
    problem = _statement_problem(group, statement, proof)
    if problem:
        return _reject(problem)
    r = statement.x % proof.ell
    inner = group.op(group.scalar(proof.Q, proof.ell), group.scalar(statement.base, r))
    if not group.equal(group.scalar(inner, proof.cofactor), statement.claim):
        return _reject("[S]([ell]Q + [r]U) does not match the claim")
    return Verdict(True)


def forge_with_low_order(group: GroupHandle, statement: PoEStatement, proof: PoEProof,
                         epsilon: ElementHandle) -> tuple[PoEStatement, PoEProof]:
    """Turn an honest proof into one for the false claim epsilon * w, epsilon of order 2."""
    if group.is_identity(epsilon) or not group.is_identity(group.op(epsilon, epsilon)):
        raise DomainError("epsilon must have order exactly 2")
    if proof.ell % 2 == 0:
        raise DomainError(f"Forgery needs an odd challenge, got {proof.ell}")
    forged_statement = replace(statement, claim=group.op(epsilon, statement.claim))
    forged_proof = replace(proof, Q=group.op(epsilon, proof.Q))
    logger.warning(f"⚠️ Forged PoE claim built from an order-2 element in {group.descriptor}")
    return forged_statement, forged_proof


def fiat_shamir_challenge(data: bytes, lam: int, cofactor: Optional[int] = None) -> int:
    """lam-bit prime derived from the statement encoding, resampled while it divides cofactor."""
    if lam < MIN_CHALLENGE_BITS:
        raise DomainError(f"Challenge size must be at least {MIN_CHALLENGE_BITS} bits, got {lam}")
    seed = hashlib.sha256(data).digest()
    constraint = None if cofactor is None else (lambda c: cofactor % c != 0)
    return hash_to_prime(seed, lam, constraint=constraint)


def prove_noninteractive(group: GroupHandle, base: ElementHandle, x: int,
                         lam: Optional[int] = None,
                         cofactor: Optional[int] = None) -> tuple[PoEStatement, PoEProof]:
    """Evaluate the claim and prove it with a Fiat-Shamir challenge."""
    _check_exponent(x)
    lam = lam or settings.poe_lambda
    claim = group.scalar(base, x)
    if cofactor is not None:
        claim = group.scalar(claim, cofactor)
    statement = PoEStatement(group.descriptor, base, x, claim)
    ell = fiat_shamir_challenge(statement_bytes(group, statement), lam, cofactor)
    if cofactor is None:
        proof = poe_prove(group, base, x, ell)
    else:
        proof = poe_prove_cofactor(group, base, x, cofactor, ell)
    return statement, proof


def verify_noninteractive(group: GroupHandle, statement: PoEStatement, proof: PoEProof,
                          lam: Optional[int] = None) -> Verdict:
    lam = lam or settings.poe_lambda
    if statement.descriptor != group.descriptor:
        return _reject(f"statement is for {statement.descriptor}, not {group.descriptor}")
    try:
        expected = fiat_shamir_challenge(statement_bytes(group, statement), lam, proof.cofactor)
    except (UogError, ValueError) as e:
        return _reject(f"cannot derive challenge: {e}")
    if proof.ell != expected:
        return _reject("challenge does not match the statement")
    if proof.cofactor is None:
        return poe_verify(group, statement, proof)
    return poe_verify_cofactor(group, statement, proof)
