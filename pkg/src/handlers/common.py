import functools
import logging
from pathlib import Path
from typing import Optional

import click

from services.groupapi import ElementHandle, GroupHandle, parse_descriptor
from utils.errors import (
    ConfigurationError,
    CorruptEncodingError,
    DomainError,
    GenerationError,
    GroupMismatchError,
    InternalError,
    ResourceLimitError,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


def parse_seed(text: Optional[str]) -> Optional[bytes]:
    """0x-prefixed hex, otherwise the UTF-8 bytes of the text."""
    if text is None:
        return None
    if text.startswith(("0x", "0X")):
        try:
            return bytes.fromhex(text[2:])
        except ValueError:
            raise DomainError(f"Seed {text!r} is not valid hex")
    return text.encode("utf-8")


def require_seed(ctx: click.Context) -> bytes:
    seed = ctx.obj.get("seed")
    if seed is None:
        raise DomainError("This command needs --seed; no implicit randomness is used")
    return seed


def parse_int(text: str, name: str) -> int:
    try:
        return int(text, 0)
    except ValueError:
        raise DomainError(f"{name} must be an integer (decimal or 0x hex), got {text!r}")


def load_group(descriptor: str) -> GroupHandle:
    return parse_descriptor(descriptor)


def load_element(group: GroupHandle, hex_text: str) -> ElementHandle:
    try:
        data = bytes.fromhex(hex_text.strip())
    except ValueError:
        raise CorruptEncodingError("Element is not valid hex")
    return group.decode(data)


def element_hex(group: GroupHandle, element: ElementHandle) -> str:
    return group.encode(element).hex()


def emit(ctx: click.Context, record: dict) -> None:
    """Print key=value lines in insertion order, and append them to --out if given."""
    lines = [f"{key}={value}" for key, value in record.items()]
    for line in lines:
        click.echo(line)
    out: Optional[Path] = ctx.obj.get("out")
    if out is not None:
        with out.open("a", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")


def handle_errors(func):
    """Map library errors to exit codes: 2 for bad input, 3 for internal or resource failures."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (click.exceptions.Exit, click.ClickException, click.Abort):
            raise
        except (DomainError, CorruptEncodingError, GroupMismatchError, ConfigurationError) as e:
            logger.error(f"❌ {type(e).__name__}: {e}")
            click.echo(f"error={type(e).__name__}: {e}", err=True)
            raise click.exceptions.Exit(EXIT_USAGE)
        except (ResourceLimitError, GenerationError, InternalError) as e:
            logger.error(f"❌ {type(e).__name__}: {e}")
            click.echo(f"error={type(e).__name__}: {e}", err=True)
            raise click.exceptions.Exit(EXIT_INTERNAL)
        except Exception as e:
            logger.exception(f"❌ Unexpected failure: {e}")
            click.echo(f"error=internal: {e}", err=True)
            raise click.exceptions.Exit(EXIT_INTERNAL)
    return wrapper
