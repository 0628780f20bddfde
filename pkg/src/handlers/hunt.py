import logging
from fractions import Fraction

import click

from handlers.common import EXIT_REJECTED, emit, handle_errors, load_element, load_group, require_seed
from services.orderhunt import HuntConfig, bsgs_order, primorial_steps
from services.semismooth import semismooth_mc
from utils.decorators import log_command
from utils.errors import DomainError

logger = logging.getLogger(__name__)


def _parse_u(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"--u must be a rational such as 3 or 21/10, got {text!r}")


@click.command("hunt")
@click.option("--group", "descriptor", required=True, help="Group descriptor")
@click.option("--element", required=True, help="Hex encoding of the target element")
@click.option("--bound", type=int, required=True, help="Order bound M = 2^bound")
@click.option("--u", "u_text", default="2", show_default=True, help="Smoothness parameter (rational)")
@click.option("--algo", type=click.Choice(["bsgs", "primorial"]), default="primorial", show_default=True)
@click.option("--budget", type=int, help="Maximum number of group operations")
@click.option("--negation/--no-negation", default=None, help="Store {x, x^-1} representatives")
@click.pass_context
@handle_errors
@log_command("hunt")
def hunt_command(ctx, descriptor, element, bound, u_text, algo, budget, negation):
    """Find the order of an element by a generic attack."""
    if bound < 1:
        raise DomainError(f"--bound must be positive, got {bound}")
    group = load_group(descriptor)
    alpha = load_element(group, element)
    M = 1 << bound
    options = {"u": _parse_u(u_text)}
    if budget is not None:
        options["budget"] = budget
    if negation is not None:
        options["negation"] = negation
    config = HuntConfig(M, **options)
    if algo == "bsgs":
        result = bsgs_order(group, alpha, M, config)
    else:
        result = primorial_steps(group, alpha, M, config.u, config)
    emit(ctx, result.as_record())
    if not result.found:
        ctx.exit(EXIT_REJECTED)


@click.command("estimate-semismooth")
@click.option("--u", "u_text", required=True, help="Smoothness parameter (rational)")
@click.option("--bits", type=int, required=True, help="Sample size in bits")
@click.option("--trials", type=int, required=True)
@click.option("--workers", type=int, help="Worker processes (default from settings)")
@click.pass_context
@handle_errors
@log_command("estimate-semismooth")
def estimate_semismooth_command(ctx, u_text, bits, trials, workers):
    """Monte-Carlo estimate of the semismooth probability G(1/u, 2/u)."""
    estimate = semismooth_mc(_parse_u(u_text), bits, trials, require_seed(ctx), workers)
    emit(ctx, estimate.as_record())
