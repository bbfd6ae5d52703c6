# utils/checks.py
import cmath
import warnings
from contextlib import contextmanager
from dataclasses import dataclass

import click

from coherent.errors import TruncationWarning

EXIT_USAGE = 2
EXIT_NOT_CONVERGED = 3


def parse_alpha(text: str) -> complex:
    """Parses "a+bi" ("1+1i", "-0.5-2i", "2", "1i"); raises click.BadParameter on failure."""
    # Python spells the imaginary unit j
    raw = str(text).strip().replace(" ", "").lower().replace("i", "j")
    try:
        value = complex(raw)
    except ValueError:
        raise click.BadParameter(f"'{text}' is not a complex number of the form a+bi")
    if not cmath.isfinite(value):
        raise click.BadParameter(f"alpha must be finite, got '{text}'")
    return value


def alpha_option(ctx, param, value):
    if value is None:
        return None
    return parse_alpha(value)


def parse_int_range(text: str) -> list[int]:
    """'6:30' (inclusive), '14' or '6,10,14'; every value must be >= 1."""
    raw = str(text).strip()
    try:
        if ":" in raw:
            start, stop = (int(part) for part in raw.split(":", 1))
            values = list(range(start, stop + 1))
        else:
            values = [int(part) for part in raw.split(",") if part.strip()]
    except ValueError:
        raise click.BadParameter(f"'{text}' is not a range like 6:30, a list like 6,10,14 or a single integer")
    if not values:
        raise click.BadParameter(f"'{text}' selects no values")
    if any(v < 1 for v in values):
        raise click.BadParameter(f"every value in '{text}' must be at least 1")
    return values


def range_option(ctx, param, value):
    if value is None:
        return None
    return parse_int_range(value)


def qubits_option(ctx, param, value):
    limit = 12
    if ctx is not None and ctx.obj is not None:
        limit = ctx.obj.config.get('max_qubits', limit)
    if value is None:
        return None
    if not 1 <= value <= limit:
        raise click.BadParameter(f"qubit count must be between 1 and {limit}, got {value}")
    return value


@dataclass
class RunConfig:
    """Everything a command needs besides its own arguments."""
    config: dict
    threads: int
    output_dir: str

    @property
    def digits(self) -> int:
        return int(self.config.get('csv_significant_digits', 15))

    def section(self, name: str) -> dict:
        return self.config.get(name, {}) or {}


def fail(message: str, code: int = EXIT_USAGE):
    """Prints a ❌ line and stops the command with the given exit code."""
    click.echo(f"❌ {message}", err=True)
    click.get_current_context().exit(code)


@contextmanager
def report_warnings():
    """Turns TruncationWarnings raised inside the block into ⚠️ lines."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", TruncationWarning)
        yield
    seen = set()
    for warning in caught:
        message = str(warning.message)
        if message not in seen:
            seen.add(message)
            click.echo(f"⚠️ {message}", err=True)
