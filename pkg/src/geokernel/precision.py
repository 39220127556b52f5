"""Working-precision plumbing shared by the series and spectrum code.

Everything at or below :data:`DOUBLE_DIGITS` significant digits runs on
IEEE doubles; above that, computations switch to mpmath wide floats.  The
default wide precision is 30 digits and can be overridden with the
``GEOKERNEL_PRECISION`` environment variable.
"""

from __future__ import annotations

import os
from contextlib import contextmanager

import mpmath as mp

# Significant decimal digits representable by an IEEE double.  Requests at
# or below this run entirely in hardware floats.
DOUBLE_DIGITS = 17

DEFAULT_DIGITS = 30
MAX_DIGITS = 100

ENV_VAR = "GEOKERNEL_PRECISION"

# Guard digits added on top of the requested precision while summing, so
# the returned values are correctly rounded at the requested precision.
GUARD_DIGITS = 10


class PrecisionError(ValueError):
    """Requested precision outside the supported range."""


def default_digits() -> int:
    """Resolve the default working precision, honoring the environment."""
    raw = os.environ.get(ENV_VAR)
    if raw is None:
        return DEFAULT_DIGITS
    try:
        digits = int(raw)
    except ValueError as exc:
        raise PrecisionError(f"{ENV_VAR} must be an integer, got {raw!r}") from exc
    return check_digits(digits)


def check_digits(digits: int) -> int:
    if not isinstance(digits, int) or isinstance(digits, bool):
        raise PrecisionError(f"precision_digits must be an integer, got {digits!r}")
    if digits < DOUBLE_DIGITS:
        raise PrecisionError(
            f"precision_digits must be >= {DOUBLE_DIGITS}, got {digits}"
        )
    if digits > MAX_DIGITS:
        raise PrecisionError(
            f"precision_digits must be <= {MAX_DIGITS}, got {digits}"
        )
    return digits


def resolve_digits(digits: int | None) -> int:
    return default_digits() if digits is None else check_digits(digits)


@contextmanager
def working_dps(digits: int):
    """mpmath context at ``digits`` plus guard digits."""
    with mp.workdps(digits + GUARD_DIGITS):
        yield


def to_mpf(value, digits: int) -> mp.mpf:
    """Parse a number (float, int, mpf, or decimal string) at ``digits``."""
    with working_dps(digits):
        if isinstance(value, str):
            return mp.mpf(value)
        return mp.mpf(value)


def number_to_json(value, digits: int):
    """JSON payload for a number: raw float at double precision, decimal
    string above it (floats survive JSON round-trips exactly; wide values
    need the string form)."""
    if digits <= DOUBLE_DIGITS:
        return float(value)
    with working_dps(digits):
        return mp.nstr(mp.mpf(value), digits + 5, strip_zeros=True)


def number_from_json(value, digits: int):
    """Inverse of :func:`number_to_json`."""
    if digits <= DOUBLE_DIGITS:
        return float(value)
    return to_mpf(value, digits)
