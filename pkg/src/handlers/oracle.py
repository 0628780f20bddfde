import logging
from typing import Optional

import click

from handlers.common import emit, handle_errors, parse_int
from services.classgroup import enumerate_class_group
from services.jacobian import curve_from_coefficients, hasse_weil_interval, order_oracle, point_counts
from utils.decorators import log_command
from utils.errors import DomainError

logger = logging.getLogger(__name__)


@click.command("oracle")
@click.option("--kind", type=click.Choice(["classnum", "zeta"]), required=True)
@click.option("--disc", help="Discriminant for --kind classnum")
@click.option("--p", "p_text", help="Field prime for --kind zeta")
@click.option("--coeffs", help="Comma-separated coefficients of f, low to high, for --kind zeta")
@click.pass_context
@handle_errors
@log_command("oracle")
def oracle_command(ctx, kind, disc: Optional[str], p_text: Optional[str], coeffs: Optional[str]):
    """Exact group orders for tiny parameters, by enumeration or point counting."""
    if kind == "classnum":
        if disc is None:
            raise DomainError("--kind classnum needs --disc")
        forms = enumerate_class_group(parse_int(disc, "--disc"))
        emit(ctx, {"h": len(forms)})
        return

    if p_text is None or coeffs is None:
        raise DomainError("--kind zeta needs --p and --coeffs")
    p = parse_int(p_text, "--p")
    curve = curve_from_coefficients(p, [parse_int(c, "--coeffs") for c in coeffs.split(",")])
    n1, n2, n3 = point_counts(curve)
    lower, upper = hasse_weil_interval(p)
    emit(ctx, {
        "order": order_oracle(curve),
        "n1": n1,
        "n2": n2,
        "n3": n3,
        "hasse_weil_low": lower,
        "hasse_weil_high": upper,
    })
