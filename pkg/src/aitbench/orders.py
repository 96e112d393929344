"""Order functions: total, non-decreasing, unbounded bounds on query size.

Each family evaluates pointwise with exact integer arithmetic and, where
the series sum 2**(n - f(n)) converges, can certify an exact rational upper
bound on its tail.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConfigError, ParseError
from .foundation import format_fraction, parse_fraction, power_interval


class OrderFunction:
    def __call__(self, n: int) -> int:
        raise NotImplementedError

    def tail_bound(self, horizon: int) -> Fraction | None:
        """Upper bound on sum_{n > horizon} 2**(n - f(n)); None if it diverges or is unknown."""
        return None

    def values(self, upto: int) -> list[int]:
        return [self(n) for n in range(upto + 1)]


def _natural(c, what="c") -> int:
    if int(c) != c or c < 0:
        raise ConfigError(f"{what} must be a natural number, got {c}")
    return int(c)


def _positive(t, what="T") -> Fraction:
    t = Fraction(t)
    if t <= 0:
        raise ConfigError(f"{what} must be positive, got {t}")
    return t


def _geometric_tail(rate: Fraction, start: int) -> Fraction:
    """Upper bound on sum_{n >= start} 2**(-rate*n) for rate > 0."""
    first = power_interval(2, -rate * start, 64).hi
    ratio = power_interval(2, -rate, 64).hi
    return first / (1 - ratio)


@dataclass(frozen=True)
class Identity(OrderFunction):
    c: int = 0

    def __post_init__(self):
        _natural(self.c)

    def __call__(self, n):
        return n + self.c

    def __str__(self):
        return f"identity:{self.c}"


@dataclass(frozen=True)
class Linear(OrderFunction):
    """n -> floor(T n) + c."""

    T: Fraction
    c: int = 0

    def __post_init__(self):
        object.__setattr__(self, "T", _positive(self.T))
        _natural(self.c)

    def __call__(self, n):
        return math.floor(self.T * n) + self.c

    def tail_bound(self, horizon):
        if self.T <= 1:
            return None
        # n - floor(Tn) - c < (1 - T) n + 1 - c
        return Fraction(2) ** (1 - self.c) * _geometric_tail(self.T - 1, horizon + 1)

    def __str__(self):
        return f"linear:{format_fraction(self.T)},{self.c}"


@dataclass(frozen=True)
class InvLinear(OrderFunction):
    """n -> ceil(n / T) + c."""

    T: Fraction
    c: int = 0

    def __post_init__(self):
        object.__setattr__(self, "T", _positive(self.T))
        _natural(self.c)

    def __call__(self, n):
        return math.ceil(n / self.T) + self.c

    def tail_bound(self, horizon):
        if self.T >= 1:
            return None
        return Fraction(2) ** (-self.c) * _geometric_tail(1 / self.T - 1, horizon + 1)

    def __str__(self):
        return f"invlinear:{format_fraction(self.T)},{self.c}"


def floor_scaled_log2(x: int, factor: Fraction) -> int:
    """Exact floor(factor * log2 x) for an integer x >= 1 and rational factor >= 0."""
    a, b = factor.numerator, factor.denominator
    return ((x ** a).bit_length() - 1) // b


@dataclass(frozen=True)
class LogAdjusted(OrderFunction):
    """n -> n + floor((1 + eps) log2(n + 1)) + c."""

    eps: Fraction
    c: int = 0

    def __post_init__(self):
        eps = Fraction(self.eps)
        if eps < 0:
            raise ConfigError(f"eps must be >= 0, got {eps}")
        object.__setattr__(self, "eps", eps)
        _natural(self.c)

    def __call__(self, n):
        return n + floor_scaled_log2(n + 1, 1 + self.eps) + self.c

    def tail_bound(self, horizon):
        if self.eps == 0:
            return None
        # 2**(n - f(n)) < 2**(1-c) (n+1)**-(1+eps); integral test for the sum
        lower = power_interval(horizon + 1, self.eps, 64).lo
        return Fraction(2) ** (1 - self.c) / (self.eps * lower)

    def __str__(self):
        return f"log:{format_fraction(self.eps)},{self.c}"


@dataclass(frozen=True)
class TableDefined(OrderFunction):
    """Explicit values for n < len(table), then n + c."""

    table: tuple
    c: int = 0

    def __post_init__(self):
        table = tuple(_natural(v, "table value") for v in self.table)
        object.__setattr__(self, "table", table)
        _natural(self.c)
        chain = list(table) + [len(table) + self.c]
        if any(a > b for a, b in zip(chain, chain[1:])):
            raise ConfigError("table-defined order function must be non-decreasing")

    def __call__(self, n):
        return self.table[n] if n < len(self.table) else n + self.c

    def __str__(self):
        return "table:" + ",".join(map(str, self.table)) + f"@{self.c}"


@dataclass(frozen=True)
class Composed(OrderFunction):
    """Pointwise ``outer(inner(n))``."""

    outer: OrderFunction
    inner: OrderFunction

    def __call__(self, n):
        return self.outer(self.inner(n))

    def __str__(self):
        return f"({self.outer})o({self.inner})"


def compose_bound(f: OrderFunction, g: OrderFunction) -> OrderFunction:
    """The bound g o f of a chained reduction (inner bound f, outer bound g)."""
    return Composed(outer=g, inner=f)


def shifted(f: OrderFunction, c: int) -> OrderFunction:
    """n -> f(n) + c."""
    return f if c == 0 else Composed(outer=Identity(c), inner=f)


def series_head(f: OrderFunction, horizon: int) -> Fraction:
    """Exact sum_{n=0}^{horizon} 2**(n - f(n))."""
    return sum((Fraction(2) ** (n - f(n)) for n in range(horizon + 1)), Fraction(0))


def parse_bound(text: str) -> OrderFunction:
    """Parse ``family:params``, e.g. ``linear:1/2,3`` or ``table:0,1,1@2``."""
    family, _, params = text.partition(":")
    try:
        if family == "identity":
            return Identity(int(params or 0))
        if family == "table":
            values, _, c = params.partition("@")
            return TableDefined(tuple(int(v) for v in values.split(",") if v), int(c or 0))
        args = params.split(",")
        first = parse_fraction(args[0])
        c = int(args[1]) if len(args) > 1 else 0
        if family == "linear":
            return Linear(first, c)
        if family == "invlinear":
            return InvLinear(first, c)
        if family == "log":
            return LogAdjusted(first, c)
    except (ValueError, IndexError) as exc:
        raise ParseError(f"bad bound {text!r}: {exc}") from None
    raise ParseError(f"unknown bound family {family!r}")
