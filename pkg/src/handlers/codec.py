import logging
import sys
from typing import Optional

import click

from handlers.common import emit, handle_errors, parse_int
from services.classgroup import Discriminant, encode_form, parse_form
from services.formcodec import CompressedForm, compress, decompress
from utils.decorators import log_command
from utils.errors import DiscriminantMismatchError

logger = logging.getLogger(__name__)


def _read_input(value: Optional[str]) -> str:
    text = value if value is not None else sys.stdin.read()
    return text.strip()


@click.command("compress")
@click.option("--form", "form_text", help="qf1: form encoding (read from stdin when omitted)")
@click.pass_context
@handle_errors
@log_command("compress")
def compress_command(ctx, form_text):
    """Compress a reduced form to its cf1: wire encoding."""
    form = parse_form(_read_input(form_text))
    cf = compress(form)
    emit(ctx, {"compressed": cf.to_text(), "bits": cf.bit_length(), "bytes": len(cf.to_bytes())})


@click.command("decompress")
@click.option("--disc", required=True, help="Discriminant (negative, decimal or 0x hex)")
@click.option("--compressed", "compressed_text", help="cf1: encoding (read from stdin when omitted)")
@click.pass_context
@handle_errors
@log_command("decompress")
def decompress_command(ctx, disc, compressed_text):
    """Recover the reduced form from a cf1: encoding."""
    d = Discriminant(parse_int(disc, "--disc"))
    cf = CompressedForm.from_text(_read_input(compressed_text))
    form = decompress(cf, d)
    if form.discriminant != d.value:
        raise DiscriminantMismatchError(f"Decoded form has discriminant {form.discriminant}")
    emit(ctx, {"form": encode_form(form)})
