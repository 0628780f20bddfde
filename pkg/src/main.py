import logging
import os
import sys
from datetime import datetime
from pathlib import Path

import click
import psutil

from config import configuration_summary, settings, validate_configuration
from handlers.codec import compress_command, decompress_command
from handlers.common import EXIT_USAGE, parse_seed
from handlers.gen import gen_command, params_command
from handlers.hunt import estimate_semismooth_command, hunt_command
from handlers.oracle import oracle_command
from handlers.poe import poe_group
from utils.errors import DomainError

logger = logging.getLogger(__name__)


def configure_logging(quiet: bool) -> None:
    """Log to stderr so stdout carries only key=value records."""
    level = logging.ERROR if quiet else getattr(logging, settings.log_level, logging.INFO)
    logging.basicConfig(
        level=level,
        format=settings.log_format,
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )


def log_system_state():
    """Log system state for diagnostics"""
    process = psutil.Process()
    logger.debug("🔍 SYSTEM STATE:")
    logger.debug(f"   CPU: {psutil.cpu_percent()}%")
    logger.debug(f"   Process RSS: {process.memory_info().rss / (1024 * 1024):.1f} MiB")
    logger.debug(f"   Available memory: {psutil.virtual_memory().available / (1024 * 1024):.0f} MiB")
    logger.debug(f"   CPU count: {psutil.cpu_count()}")
    logger.debug(f"   Python version: {sys.version}")
    logger.debug(f"   Current time: {datetime.now()}")
    logger.debug(f"   Working directory: {os.getcwd()}")


@click.group(name="uog")
@click.option("--seed", "seed_text", help="Public seed: 0x-prefixed hex or a UTF-8 string")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), help="Also append records to this file")
@click.option("--quiet", is_flag=True, help="Only log errors")
@click.pass_context
def cli(ctx, seed_text, out, quiet):
    """Trustless unknown-order groups: generation, codecs, attacks and proofs."""
    configure_logging(quiet)
    log_system_state()

    is_valid, errors = validate_configuration()
    if not is_valid:
        for error in errors:
            logger.error(f"❌ Configuration error: {error}")
        ctx.exit(EXIT_USAGE)
    if settings.debug:
        for line in configuration_summary():
            logger.debug(f"📊 {line}")

    try:
        seed = parse_seed(seed_text)
    except DomainError as e:
        raise click.BadParameter(str(e), param_hint="--seed")
    ctx.ensure_object(dict)
    ctx.obj.update({"seed": seed, "out": out})


cli.add_command(gen_command)
cli.add_command(params_command)
cli.add_command(compress_command)
cli.add_command(decompress_command)
cli.add_command(hunt_command)
cli.add_command(estimate_semismooth_command)
cli.add_command(poe_group)
cli.add_command(oracle_command)


def main():
    cli(prog_name="uog")


if __name__ == "__main__":
    main()
