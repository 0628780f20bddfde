import logging
from pathlib import Path
from typing import Optional

import click

from handlers.common import element_hex, emit, handle_errors, require_seed
from services.groupapi import class_group_adapter, jacobian_adapter
from services.groupgen import SecurityParams, gen_classgroup, gen_jacobian
from services.semismooth import weakness_probability
from utils.decorators import log_command

logger = logging.getLogger(__name__)


def _transcript_path(ctx: click.Context, explicit: Optional[Path]) -> Optional[Path]:
    if explicit is not None:
        return explicit
    out = ctx.obj.get("out")
    return out.with_name(out.name + ".transcript") if out is not None else None


@click.command("gen")
@click.option("--lambda", "lam", type=int, required=True, help="Attack cost exponent")
@click.option("--rho", type=int, required=True, help="Failure probability exponent")
@click.option("--kind", type=click.Choice(["jacobian", "classgroup"]), default="jacobian", show_default=True)
@click.option("--transcript", "transcript_path", type=click.Path(dir_okay=False, path_type=Path),
              help="Where to write the derivation transcript (default: <out>.transcript)")
@click.pass_context
@handle_errors
@log_command("gen")
def gen_command(ctx, lam, rho, kind, transcript_path):
    """Generate a trustless group and a public element from --seed."""
    seed = require_seed(ctx)
    if kind == "jacobian":
        output = gen_jacobian(lam, rho, seed)
        group = jacobian_adapter(output.curve)
        record = {
            "kind": kind,
            "lambda": lam,
            "rho": rho,
            "group_bits": output.params.group_bits,
            "p": f"{output.p:x}",
            "group": group.descriptor,
            "element": element_hex(group, group.wrap(output.P)),
            "rejections": output.rejections,
        }
    else:
        output = gen_classgroup(lam, rho, seed)
        group = class_group_adapter(output.discriminant)
        record = {
            "kind": kind,
            "lambda": lam,
            "rho": rho,
            "group_bits": output.params.group_bits,
            "disc_bits": output.discriminant.bits,
            "group": group.descriptor,
            "element": element_hex(group, group.wrap(output.generator)),
        }
    record["transcript_entries"] = len(output.transcript.entries)
    record["transcript_sha256"] = output.transcript.digest()

    path = _transcript_path(ctx, transcript_path)
    if path is not None:
        path.write_text(output.transcript.render(), encoding="utf-8")
        logger.info(f"✅ Transcript written to {path}")
    emit(ctx, record)


@click.command("params")
@click.option("--lambda", "lam", type=int, required=True)
@click.option("--rho", type=int, required=True)
@click.option("--group-bits", type=int, help="Also report how weak a group of this size is")
@click.option("--mc-trials", type=int, help="Attach a Monte-Carlo estimate to the weakness report")
@click.pass_context
@handle_errors
@log_command("params")
def params_command(ctx, lam, rho, group_bits, mc_trials):
    """Look up the group size for (lambda, rho)."""
    params = SecurityParams.for_level(lam, rho)
    record = {"lambda": lam, "rho": rho, "u": f"{params.u_smooth:.2f}", "group_bits": params.group_bits}
    if group_bits is not None:
        seed = ctx.obj.get("seed") or b"weakness"
        report = weakness_probability(lam, rho, group_bits, mc_trials=mc_trials, seed=seed)
        record.update({f"report_{key}": value for key, value in report.as_record().items()})
    emit(ctx, record)
