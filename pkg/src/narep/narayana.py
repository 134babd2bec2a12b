"""Narayana's cows sequence N_0 = 0, N_1 = N_2 = 1, N_n = N_{n-1} + N_{n-3}."""

from __future__ import annotations

import functools
import threading
from dataclasses import dataclass, field

import mpmath

from .numerics import (
    DEFAULT_PRECISION,
    GUARD_DIGITS,
    HPReal,
    PrecisionError,
    complex_root_magnitude,
    dominant_root,
)


class NarayanaTable:
    """Memoized exact values of N_n; extended on demand by a single writer."""

    def __init__(self) -> None:
        self.cache: list[int] = [0, 1, 1]
        self._lock = threading.Lock()

    @property
    def max_index(self) -> int:
        return len(self.cache) - 1

    def extend(self, n: int) -> None:
        if n <= self.max_index:
            return
        with self._lock:
            c = self.cache
            while len(c) <= n:
                c.append(c[-1] + c[-3])

    def __getitem__(self, n: int) -> int:
        if n < 0:
            raise IndexError("negative Narayana index")
        self.extend(n)
        return self.cache[n]

    def values(self, n_max: int) -> list[int]:
        """N_0 .. N_{n_max} as a fresh list."""
        self.extend(n_max)
        return self.cache[: n_max + 1]


_TABLE = NarayanaTable()


def narayana(n: int) -> int:
    return _TABLE[n]


def narayana_list(n_max: int) -> list[int]:
    return _TABLE.values(n_max)


@dataclass(frozen=True)
class BinetCoefficients:
    a: HPReal
    abs_b: HPReal
    alpha: HPReal


@functools.lru_cache(maxsize=8)
def binet_coefficients(precision: int = DEFAULT_PRECISION) -> BinetCoefficients:
    """a = alpha^2 / (alpha^3 + 2) and |b| = |c| = |beta|^2 / |beta^2 + 3|.

    beta = u + iv with u = (1 - alpha)/2 and u^2 + v^2 = 1/alpha, so |b| is
    computed from real quantities only.
    """
    alpha = dominant_root(precision)
    a = alpha**2 / (alpha**3 + 2)
    u = (1 - alpha) / 2
    v2 = 1 / alpha - u * u
    re = u * u - v2 + 3
    im2 = 4 * u * u * v2
    abs_b = (1 / alpha) / (re * re + im2).sqrt()
    return BinetCoefficients(a=a, abs_b=abs_b, alpha=alpha)


def binet_estimate(n: int, precision: int = DEFAULT_PRECISION) -> HPReal:
    """a * alpha^n, accurate enough that N_n - a*alpha^n can be compared with alpha^(-n/2)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    c = binet_coefficients(precision)
    # a*alpha^n has ~0.166 n integer digits; the residual needs ~0.083 n more.
    needed = int(1.5 * n * 0.16600) + 10
    if needed > precision:
        raise PrecisionError(
            f"n={n} needs at least {needed} digits to resolve alpha^(-n/2); got {precision}"
        )
    return c.a * c.alpha**n


def binet_residual(n: int, precision: int = DEFAULT_PRECISION) -> HPReal:
    """zeta_n = N_n - a*alpha^n (exact integer minus high-precision real)."""
    est = binet_estimate(n, precision)
    return HPReal.of(narayana(n), precision) - est


@dataclass
class GrowthReport:
    n_max: int
    corrected_violations: list[int] = field(default_factory=list)
    upper_violations: list[int] = field(default_factory=list)
    literal_lower_violations: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        """True when the corrected bounds alpha^(n-3) <= N_n <= alpha^(n-1) hold throughout."""
        return not self.corrected_violations and not self.upper_violations

    def summary(self) -> str:
        lines = [
            f"growth bounds checked for 1 <= n <= {self.n_max}",
            f"  alpha^(n-3) <= N_n: {'ok' if not self.corrected_violations else self.corrected_violations}",
            f"  N_n <= alpha^(n-1): {'ok' if not self.upper_violations else self.upper_violations}",
        ]
        lit = self.literal_lower_violations
        if lit:
            shown = ", ".join(map(str, lit[:10])) + (" ..." if len(lit) > 10 else "")
            lines.append(f"  alpha^(n-2) <= N_n fails for {len(lit)} values of n: {shown}")
        else:
            lines.append("  alpha^(n-2) <= N_n: ok")
        return "\n".join(lines)


def growth_bounds_check(n_max: int, precision: int = 60) -> GrowthReport:
    """Check alpha^(n-3) <= N_n <= alpha^(n-1) and record where alpha^(n-2) <= N_n fails."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    precision = max(precision, int(n_max * 0.1660) + 30)
    alpha = dominant_root(precision).value
    report = GrowthReport(n_max=n_max)
    values = narayana_list(n_max)
    with mpmath.workdps(precision + GUARD_DIGITS):
        for n in range(1, n_max + 1):
            N = values[n]
            if alpha ** (n - 3) > N:
                report.corrected_violations.append(n)
            if N > alpha ** (n - 1):
                report.upper_violations.append(n)
            if alpha ** (n - 2) > N:
                report.literal_lower_violations.append(n)
    return report
