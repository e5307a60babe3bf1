import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional

from menulab.errors import InputError
from menulab.utils.rational import parse_rational


def emit(text: str, out: Optional[str] = None) -> None:
    """Write command output to ``out`` or stdout."""
    if not text.endswith('\n'):
        text += '\n'
    if out is None or out == '-':
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise InputError(f"cannot write {out}: {exc.strerror}") from None


def parse_valuation(text: str) -> tuple[Fraction, ...]:
    """``46,80`` -> (46, 80) as exact rationals"""
    parts = [part.strip() for part in text.split(',') if part.strip()]
    if not parts:
        raise InputError(f"empty valuation {text!r}")
    try:
        return tuple(parse_rational(part) for part in parts)
    except ValueError as exc:
        raise InputError(f"bad valuation {text!r}: {exc}") from None
