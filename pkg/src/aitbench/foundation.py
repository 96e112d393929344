"""Bitstrings, the string/number identification, exact rationals and intervals.

Bitstrings are plain ``str`` objects over ``'0'``/``'1'``; the empty string
is the empty word.  Rationals are :class:`fractions.Fraction`.  Irrational
quantities such as ``2**(-l/T)`` are enclosed in :class:`Interval` objects
whose endpoints are exact rationals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator

import gmpy2

from .errors import InsufficientBits, ParseError

EMPTY = ""


def check_bits(s: str) -> str:
    if not isinstance(s, str) or s.strip("01"):
        raise ValueError(f"not a bitstring: {s!r}")
    return s


def string_key(s: str) -> tuple[int, str]:
    """Sort key realising the order empty, 0, 1, 00, 01, 10, 11, 000, ..."""
    return (len(s), s)


def string_to_nat(s: str) -> int:
    return int("1" + s, 2) - 1


def nat_to_string(n: int) -> str:
    if n < 0:
        raise ValueError("natural number expected")
    return bin(n + 1)[3:]


def strings_of_length(n: int) -> Iterator[str]:
    for bits in product("01", repeat=n):
        yield "".join(bits)


def strings_upto(n: int) -> Iterator[str]:
    """All strings of length <= n in the standard order."""
    for length in range(n + 1):
        yield from strings_of_length(length)


def dyadic_int(s: str) -> int:
    """Value of ``s`` read as a binary integer (empty string is 0)."""
    return int(s, 2) if s else 0


def point_value(s: str) -> Fraction:
    """The rational 0.s."""
    return Fraction(dyadic_int(s), 1 << len(s))


def binary_prefix(alpha, n: int) -> str:
    """First ``n`` bits of the terminating expansion of ``alpha - floor(alpha)``."""
    if n <= 0:
        return EMPTY
    alpha = Fraction(alpha)
    frac = alpha - math.floor(alpha)
    value = math.floor(frac * (1 << n))
    return format(value, f"0{n}b")


def is_prefix_free(strings: Iterable[str]) -> bool:
    ordered = sorted(set(strings))
    # in lexicographic order a prefix is immediately followed by one of its extensions
    return not any(b.startswith(a) for a, b in zip(ordered, ordered[1:]))


def find_prefix_pair(strings: Iterable[str]) -> tuple[str, str] | None:
    ordered = sorted(set(strings))
    for a, b in zip(ordered, ordered[1:]):
        if b.startswith(a):
            return a, b
    return None


def pf_membership(alpha_bits: str, s: str) -> bool:
    """Whether ``s`` is a prefix of the real whose expansion starts with ``alpha_bits``."""
    if len(s) > len(alpha_bits):
        raise InsufficientBits(
            f"query of length {len(s)} needs more than the {len(alpha_bits)} known bits")
    return alpha_bits.startswith(s)


def format_fraction(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(text: str) -> Fraction:
    try:
        if "/" in text:
            num, den = text.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {text!r}: {exc}") from None


def floor_log2(x) -> int:
    """Exact floor(log2 x) for a positive rational."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("log of non-positive number")
    e = x.numerator.bit_length() - x.denominator.bit_length()
    # now 2**(e-1) < x < 2**(e+1)
    if x < Fraction(2) ** e:
        e -= 1
    return e


@dataclass(frozen=True)
class Interval:
    """Closed interval with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x) -> Interval:
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def overlaps(self, other: Interval) -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def __add__(self, other):
        other = _as_interval(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        other = _as_interval(other)
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other):
        return _as_interval(other) - self

    def __mul__(self, other):
        other = _as_interval(other)
        corners = (self.lo * other.lo, self.lo * other.hi,
                   self.hi * other.lo, self.hi * other.hi)
        return Interval(min(corners), max(corners))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_interval(other)
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError("divisor interval contains zero")
        return self * Interval(1 / other.hi, 1 / other.lo)

    def __rtruediv__(self, other):
        return _as_interval(other) / self

    def round_out(self, bits: int) -> Interval:
        """Widen outward to the grid of multiples of 2**-bits."""
        scale = 1 << bits
        return Interval(Fraction(math.floor(self.lo * scale), scale),
                        Fraction(math.ceil(self.hi * scale), scale))

    def __str__(self):
        return f"[{format_fraction(self.lo)}, {format_fraction(self.hi)}]"


def _as_interval(x) -> Interval:
    return x if isinstance(x, Interval) else Interval.point(x)


def interval_sum(items: Iterable[Interval]) -> Interval:
    lo = hi = Fraction(0)
    for item in items:
        lo += item.lo
        hi += item.hi
    return Interval(lo, hi)


def rational_root_interval(y, b: int, precision: int) -> Interval:
    """Enclose the real ``b``-th root of the rational ``y >= 0``.

    The width is at most ``2**-precision``; exact roots give point intervals.
    """
    y = Fraction(y)
    if y < 0 or b < 1:
        raise ValueError("need y >= 0 and b >= 1")
    if b == 1:
        return Interval.point(y)
    p, q = y.numerator, y.denominator
    k = max(precision, 0)
    n = p * q ** (b - 1) << (b * k)
    root, exact = gmpy2.iroot(n, b)
    root = int(root)
    den = q << k
    if exact:
        return Interval.point(Fraction(root, den))
    return Interval(Fraction(root, den), Fraction(root + 1, den))


def power_interval(x, exponent, precision: int) -> Interval:
    """Enclose ``x**exponent`` for rational ``x > 0`` and rational exponent."""
    x = Fraction(x)
    exponent = Fraction(exponent)
    if x <= 0:
        raise ValueError("base must be positive")
    base = x ** exponent.numerator
    if exponent.denominator == 1:
        return Interval.point(base)
    return rational_root_interval(base, exponent.denominator, precision)


def interval_pow2(q, precision: int) -> Interval:
    if precision < 1:
        raise ValueError("precision must be >= 1")
    return power_interval(2, q, precision)


def _log2_bounds(y: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    e = floor_log2(y)
    m = y / Fraction(2) ** e
    if m == 1:
        return Fraction(e), Fraction(e)
    k = 2 * bits + 16
    while True:
        scale = 1 << k
        two = 1 << (k + 1)
        lo = math.floor(m * scale)
        hi = math.ceil(m * scale)
        acc = 0
        for _ in range(bits):
            lo = (lo * lo) >> k
            hi = -((-hi * hi) >> k)
            acc <<= 1
            if lo >= two:
                acc |= 1
                lo >>= 1
                hi = (hi + 1) >> 1
            elif hi >= two:
                break
        else:
            unit = Fraction(1, 1 << bits)
            return e + acc * unit, e + (acc + 1) * unit
        k *= 2


def log2_interval(x, bits: int) -> Interval:
    """Enclose ``log2`` over a positive interval (or rational) to ``bits`` bits."""
    x = _as_interval(x)
    if x.lo <= 0:
        raise ValueError("log2 of an interval reaching zero")
    lo, _ = _log2_bounds(x.lo, bits)
    if x.is_point:
        _, hi = _log2_bounds(x.lo, bits)
    else:
        _, hi = _log2_bounds(x.hi, bits)
    return Interval(lo, hi)


def ln2_interval(bits: int) -> Interval:
    # ln 2 = sum 1/(k 2^k); the tail after N terms is below 1/((N+1) 2^N)
    n = bits + 4
    head = sum(Fraction(1, k << k) for k in range(1, n + 1))
    tail = Fraction(1, (n + 1) << n)
    return Interval(head, head + tail).round_out(bits + 2)
