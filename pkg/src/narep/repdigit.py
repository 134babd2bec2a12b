"""Base-g repdigits d * (g^L - 1) / (g - 1) and their string form."""

from __future__ import annotations

import functools
from dataclasses import dataclass

DIGITS = "0123456789AB"
MAX_BASE = len(DIGITS)


class RepdigitError(ValueError):
    pass


def _check_base(g: int) -> None:
    if not 2 <= g:
        raise RepdigitError(f"base must be >= 2, got {g}")


def repunit(length: int, g: int) -> int:
    return (g**length - 1) // (g - 1)


def repdigit_value(d: int, length: int, g: int) -> int:
    _check_base(g)
    if not 1 <= d <= g - 1:
        raise RepdigitError(f"digit {d} out of range for base {g}")
    if length < 1:
        raise RepdigitError(f"length must be >= 1, got {length}")
    num = d * (g**length - 1)
    q, r = divmod(num, g - 1)
    assert r == 0
    return q


@dataclass(frozen=True, order=True)
class Repdigit:
    # Field order gives the canonical sort: value first, then (digit, length).
    value: int
    d: int
    length: int
    g: int

    @classmethod
    def make(cls, d: int, length: int, g: int) -> "Repdigit":
        return cls(repdigit_value(d, length, g), d, length, g)

    def render(self) -> str:
        return render(self)


def render(r: Repdigit) -> str:
    if r.g > MAX_BASE:
        raise RepdigitError(f"no digit symbols for base {r.g}")
    return DIGITS[r.d] * r.length


def parse(s: str, g: int) -> Repdigit:
    _check_base(g)
    if g > MAX_BASE:
        raise RepdigitError(f"no digit symbols for base {g}")
    s = s.strip().upper()
    if not s:
        raise RepdigitError("empty repdigit string")
    if len(set(s)) != 1:
        raise RepdigitError(f"{s!r} mixes digits")
    d = DIGITS.find(s[0])
    if d < 1 or d >= g:
        raise RepdigitError(f"{s[0]!r} is not a nonzero digit in base {g}")
    return Repdigit.make(d, len(s), g)


@functools.lru_cache(maxsize=64)
def _all_repdigits(g: int, max_length: int) -> tuple[Repdigit, ...]:
    return tuple(
        sorted(Repdigit.make(d, L, g) for L in range(1, max_length + 1) for d in range(1, g))
    )


def enumerate_repdigits(g: int, max_length: int, max_value: int | None = None) -> list[Repdigit]:
    """All repdigits of length <= max_length and value <= max_value, ascending by value."""
    _check_base(g)
    if max_length < 1:
        raise RepdigitError("max_length must be >= 1")
    reps = _all_repdigits(g, max_length)
    if max_value is None:
        return list(reps)
    return [r for r in reps if r.value <= max_value]


@functools.lru_cache(maxsize=64)
def repdigit_lookup(g: int, max_length: int) -> dict[int, Repdigit]:
    """value -> Repdigit; values are unique because base-g expansions are."""
    return {r.value: r for r in _all_repdigits(g, max_length)}


def as_repdigit(value: int, g: int, max_length: int | None = None) -> Repdigit | None:
    """The repdigit with this value in base g, or None."""
    if value < 1:
        return None
    d = value % g
    if d == 0:
        return None
    length, v = 0, value
    while v:
        if v % g != d:
            return None
        v //= g
        length += 1
    if max_length is not None and length > max_length:
        return None
    return Repdigit(value, d, length, g)
