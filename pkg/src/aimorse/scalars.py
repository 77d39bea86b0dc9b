"""Scalar arithmetic backends.

Two scalar modes exist and are never mixed within one computation:

* ``EXACT``   -- arbitrary-size rationals (:class:`fractions.Fraction`),
  always stored in lowest terms with positive denominator, no rounding ever.
* ``NUMERIC`` -- extended-precision binary floats (:class:`mpmath.mpf`)
  with a configurable decimal working precision, never below 32 digits.
"""

from __future__ import annotations

from fractions import Fraction

from mpmath import mp, mpf
from mpmath.libmp import from_rational

from .errors import ModeMismatchError

Rational = Fraction
BigReal = mpf

EXACT = "exact"
NUMERIC = "numeric"

DEFAULT_PRECISION = 64
MIN_PRECISION = 32

# Extra decimal digits used internally by numeric solvers so that the noise
# floor of polynomial evaluation stays well below any user-facing tolerance.
GUARD_DIGITS = 20


def validate_precision(dps: int) -> int:
    dps = int(dps)
    if dps < MIN_PRECISION:
        raise ValueError(
            f"working precision must be at least {MIN_PRECISION} decimal digits, got {dps}"
        )
    return dps


def working_precision(dps: int):
    """Context manager setting the numeric working precision in decimal digits."""
    return mp.workdps(validate_precision(dps))


def mode_of(value) -> str:
    """Classify a scalar as EXACT or NUMERIC."""
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, (Fraction, int)):
        return EXACT
    if isinstance(value, (mpf, float)):
        return NUMERIC
    raise TypeError(f"unsupported scalar type {type(value).__name__}")


def require_same_mode(a_mode: str, b_mode: str) -> str:
    if a_mode != b_mode:
        raise ModeMismatchError(f"cannot mix {a_mode} and {b_mode} scalars")
    return a_mode


def to_rational(value) -> Fraction:
    """Convert a scalar to an exact rational; exact for every supported input."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    if isinstance(value, mpf):
        sign, man, exp, _ = value._mpf_
        if man == 0 and exp != 0:  # inf / nan encode a special exponent
            raise ValueError(f"cannot convert non-finite value {value} to a rational")
        num = int(man) * (-1 if sign else 1)
        return Fraction(num, 1) * Fraction(2) ** exp
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def to_bigreal(value, dps: int | None = None) -> mpf:
    """Convert a scalar to BigReal, correctly rounded at the working precision.

    Rational inputs are rounded in a single step (no intermediate division),
    so the result is the nearest representable float at the target precision.
    """
    def _convert():
        if isinstance(value, mpf):
            return +value  # re-round at the current precision
        if isinstance(value, float):
            return mpf(value)
        if isinstance(value, int):
            return mpf(value)
        if isinstance(value, Fraction):
            return mpf(from_rational(value.numerator, value.denominator, mp.prec, "n"))
        raise TypeError(f"cannot convert {type(value).__name__} to BigReal")

    if dps is None:
        return _convert()
    with working_precision(dps):
        return _convert()


def coerce_scalar(value, mode: str):
    """Coerce a scalar into the given mode (exact conversion into EXACT mode)."""
    if mode == EXACT:
        return to_rational(value)
    if mode == NUMERIC:
        return to_bigreal(value)
    raise ValueError(f"unknown scalar mode {mode!r}")
