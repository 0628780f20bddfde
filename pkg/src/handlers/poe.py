import logging
from typing import Optional

import click

from handlers.common import EXIT_REJECTED, element_hex, emit, handle_errors, load_element, load_group, parse_int
from services.groupgen import cofactor_S
from services.poe import PoEProof, PoEStatement, prove_noninteractive, verify_noninteractive
from utils.decorators import log_command

logger = logging.getLogger(__name__)


def _cofactor(bound: Optional[int]) -> Optional[int]:
    return cofactor_S(bound) if bound is not None else None


@click.group("poe")
def poe_group():
    """Non-interactive proofs of exponentiation."""


@poe_group.command("prove")
@click.option("--group", "descriptor", required=True)
@click.option("--base", required=True, help="Hex encoding of the base element")
@click.option("--exp", "exp_text", required=True, help="Exponent x (decimal or 0x hex)")
@click.option("--cofactor", "cofactor_bound", type=int, help="Prove in [S]G with S = lcm(1..N)")
@click.option("--lambda", "lam", type=int, help="Challenge size in bits")
@click.pass_context
@handle_errors
@log_command("poe prove")
def prove_command(ctx, descriptor, base, exp_text, cofactor_bound, lam):
    """Compute the claim base^x (times S) and a proof for it."""
    group = load_group(descriptor)
    statement, proof = prove_noninteractive(
        group, load_element(group, base), parse_int(exp_text, "--exp"), lam, _cofactor(cofactor_bound)
    )
    emit(ctx, {
        "claim": element_hex(group, statement.claim),
        "ell": f"{proof.ell:x}",
        "proof": element_hex(group, proof.Q),
        "cofactor": f"{proof.cofactor:x}" if proof.cofactor is not None else "none",
    })


@poe_group.command("verify")
@click.option("--group", "descriptor", required=True)
@click.option("--base", required=True)
@click.option("--exp", "exp_text", required=True)
@click.option("--claim", required=True, help="Hex encoding of the claimed result")
@click.option("--proof", "proof_hex", required=True, help="Hex encoding of Q")
@click.option("--ell", "ell_hex", required=True, help="Challenge prime in hex")
@click.option("--cofactor", "cofactor_bound", type=int)
@click.option("--lambda", "lam", type=int)
@click.pass_context
@handle_errors
@log_command("poe verify")
def verify_command(ctx, descriptor, base, exp_text, claim, proof_hex, ell_hex, cofactor_bound, lam):
    """Check a proof; exits 1 when it is rejected."""
    group = load_group(descriptor)
    statement = PoEStatement(
        group.descriptor, load_element(group, base), parse_int(exp_text, "--exp"), load_element(group, claim)
    )
    ell = parse_int("0x" + ell_hex.removeprefix("0x"), "--ell")
    proof = PoEProof(ell, load_element(group, proof_hex), _cofactor(cofactor_bound))
    verdict = verify_noninteractive(group, statement, proof, lam)
    emit(ctx, {"accepted": str(verdict.accepted).lower(), "reason": verdict.reason})
    if not verdict:
        ctx.exit(EXIT_REJECTED)
