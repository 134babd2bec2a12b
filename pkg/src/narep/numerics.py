"""Precision-tracked real arithmetic and the roots of x^3 - x^2 - 1.

Values are backed by :mod:`mpmath`. Every :class:`HPReal` carries the
number of decimal digits it is meant to be correct to; binary operations
run at the smaller of the two precisions plus a few guard digits.
"""

from __future__ import annotations

import functools
import os
from dataclasses import dataclass
from typing import Union

import mpmath
from mpmath import mpf

MIN_PRECISION = 50
GUARD_DIGITS = 10
DEFAULT_PRECISION = int(os.environ.get("NAREP_PRECISION", "400"))

# Arbitrary-precision naturals are plain Python ints.
BigNat = int

Number = Union["HPReal", int, float, str, mpf]


class PrecisionError(ArithmeticError):
    """Raised when the working precision cannot resolve a requested quantity."""


def _check_precision(precision: int) -> None:
    if precision < MIN_PRECISION:
        raise PrecisionError(f"precision must be >= {MIN_PRECISION} digits, got {precision}")


@functools.total_ordering
@dataclass(frozen=True, eq=False)
class HPReal:
    """A real number known to ``digits`` significant decimal digits."""

    value: mpf
    digits: int

    @classmethod
    def of(cls, x: Number, digits: int = DEFAULT_PRECISION) -> "HPReal":
        if isinstance(x, HPReal):
            return cls(x.value, min(x.digits, digits))
        with mpmath.workdps(digits + GUARD_DIGITS):
            return cls(mpf(x), digits)

    def _coerce(self, other: Number) -> "HPReal":
        if isinstance(other, HPReal):
            return other
        return HPReal.of(other, self.digits)

    def _binop(self, other: Number, op) -> "HPReal":
        o = self._coerce(other)
        digits = min(self.digits, o.digits)
        with mpmath.workdps(digits + GUARD_DIGITS):
            return HPReal(op(self.value, o.value), digits)

    def __add__(self, other: Number) -> "HPReal":
        return self._binop(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other: Number) -> "HPReal":
        return self._binop(other, lambda a, b: a - b)

    def __rsub__(self, other: Number) -> "HPReal":
        return self._binop(other, lambda a, b: b - a)

    def __mul__(self, other: Number) -> "HPReal":
        return self._binop(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> "HPReal":
        return self._binop(other, lambda a, b: a / b)

    def __rtruediv__(self, other: Number) -> "HPReal":
        return self._binop(other, lambda a, b: b / a)

    def __pow__(self, other: Number) -> "HPReal":
        return self._binop(other, lambda a, b: a**b)

    def __neg__(self) -> "HPReal":
        return HPReal(-self.value, self.digits)

    def __abs__(self) -> "HPReal":
        return HPReal(abs(self.value), self.digits)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, (HPReal, int, float, str, mpf)):
            return NotImplemented
        return self.value == self._coerce(other).value

    def __lt__(self, other: Number) -> bool:
        return self.value < self._coerce(other).value

    def __hash__(self) -> int:
        return hash(self.value)

    def __float__(self) -> float:
        return float(self.value)

    def sqrt(self) -> "HPReal":
        with mpmath.workdps(self.digits + GUARD_DIGITS):
            return HPReal(mpmath.sqrt(self.value), self.digits)

    def exp(self) -> "HPReal":
        with mpmath.workdps(self.digits + GUARD_DIGITS):
            return HPReal(mpmath.exp(self.value), self.digits)

    def log(self) -> "HPReal":
        return hp_log(self)

    def nstr(self, n: int = 20) -> str:
        return mpmath.nstr(self.value, n)

    def __repr__(self) -> str:
        return f"HPReal({mpmath.nstr(self.value, 25)}, digits={self.digits})"


def hp_log(x: Number, precision: int | None = None) -> HPReal:
    """Natural logarithm of a positive value, at the value's precision."""
    if not isinstance(x, HPReal):
        x = HPReal.of(x, precision or DEFAULT_PRECISION)
    if x.value <= 0:
        raise ValueError(f"logarithm of non-positive value {x.nstr(10)}")
    with mpmath.workdps(x.digits + GUARD_DIGITS):
        return HPReal(mpmath.log(x.value), x.digits)


def _cubic(x: mpf) -> mpf:
    return x**3 - x**2 - 1


@functools.lru_cache(maxsize=16)
def _dominant_root_mpf(precision: int) -> mpf:
    with mpmath.workdps(precision + GUARD_DIGITS):
        x = mpf("1.5")
        tol = mpf(10) ** -(precision + GUARD_DIGITS // 2)
        for _ in range(200):
            step = _cubic(x) / (3 * x**2 - 2 * x)
            x -= step
            if abs(step) < tol:
                break
        if not (mpf("1.4") < x < mpf("1.5")):
            # Newton left the bracket; bisect instead.
            lo, hi = mpf("1.4"), mpf("1.5")
            while hi - lo > tol:
                mid = (lo + hi) / 2
                if _cubic(mid) > 0:
                    hi = mid
                else:
                    lo = mid
            x = (lo + hi) / 2
        return +x


def dominant_root(precision: int = DEFAULT_PRECISION) -> HPReal:
    """The real root alpha > 1 of x^3 - x^2 - 1 (alpha ~ 1.46557)."""
    _check_precision(precision)
    return HPReal(_dominant_root_mpf(precision), precision)


def complex_root_magnitude(precision: int = DEFAULT_PRECISION) -> HPReal:
    """|beta| = |gamma| for the complex pair of roots.

    The product of the three roots is 1, so |beta|^2 * alpha = 1.
    """
    _check_precision(precision)
    alpha = dominant_root(precision)
    r = 1 / alpha.sqrt()
    if not r < 1:
        raise ArithmeticError("complex roots are expected inside the unit circle")
    return r


def residual(x: HPReal) -> HPReal:
    """|x^3 - x^2 - 1|."""
    with mpmath.workdps(x.digits + GUARD_DIGITS):
        return HPReal(abs(_cubic(x.value)), x.digits)
