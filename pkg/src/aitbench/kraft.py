"""Online prefix-code allocation under the Kraft inequality."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import ConfigError, KraftOverflow
from .foundation import floor_log2
from .orders import OrderFunction, series_head


def kraft_sum(lengths: Iterable[int]) -> Fraction:
    return sum((Fraction(1, 1 << l) for l in lengths), Fraction(0))


class Allocator:
    """Assigns codewords of requested lengths, keeping the issued set prefix-free.

    Free space is a set of dyadic intervals with pairwise distinct sizes,
    stored as ``{length: prefix}``.  A request of length ``l`` is served from
    the smallest free interval that can hold it, taking its leftmost
    sub-interval and returning the rest as one interval of each
    intermediate size.  Because the sizes stay distinct, a request fails
    only when the free measure is below ``2**-l``.
    """

    def __init__(self):
        self.free: dict[int, str] = {0: ""}
        self.issued: list[tuple[int, str]] = []

    @property
    def free_measure(self) -> Fraction:
        return kraft_sum(self.free)

    @property
    def issued_measure(self) -> Fraction:
        return kraft_sum(len(w) for _, w in self.issued)

    def allocate(self, length: int) -> str:
        if length < 0:
            raise ConfigError("codeword length must be >= 0")
        fitting = [k for k in self.free if k <= length]
        if not fitting:
            raise KraftOverflow(length, self.free_measure)
        k = max(fitting)
        base = self.free.pop(k)
        for j in range(k + 1, length + 1):
            self.free[j] = base + "0" * (j - k - 1) + "1"
        word = base + "0" * (length - k)
        self.issued.append((len(self.issued), word))
        return word


def allocate(a: Allocator, length: int) -> str:
    return a.allocate(length)


def allocate_stream(lengths: Iterable[int]) -> list[str]:
    a = Allocator()
    words = []
    running = Fraction(0)
    for i, length in enumerate(lengths):
        running += Fraction(1, 1 << length)
        try:
            words.append(a.allocate(length))
        except KraftOverflow as exc:
            raise KraftOverflow(length, exc.free_measure, index=i, exact_sum=running) from None
    return words


@dataclass(frozen=True)
class WeightShift:
    d0: int
    head: Fraction
    tail: Fraction | None

    @property
    def provisional(self) -> bool:
        return self.tail is None

    @property
    def total(self) -> Fraction:
        return self.head + (self.tail or 0)


def least_shift(total: Fraction) -> int:
    """Least d >= 0 with total * 2**-d <= 1."""
    if total <= 1:
        return 0
    e = floor_log2(total)
    return e if total == Fraction(2) ** e else e + 1


def weight_shift(f: OrderFunction, horizon: int, tail_certificate=None) -> WeightShift:
    """Least d0 with (head + tail) * 2**-d0 <= 1 for the series sum 2**(n - f(n)).

    The head up to ``horizon`` is exact; the tail must be certified by the
    caller.  Without a certificate the result is provisional.
    """
    head = series_head(f, horizon)
    tail = None if tail_certificate is None else Fraction(tail_certificate)
    return WeightShift(least_shift(head + (tail or 0)), head, tail)


def code_lengths(f: OrderFunction, d0: int, horizon: int) -> list[int]:
    """Requested lengths f(n) - n + d0 for n = 0..horizon."""
    lengths = [f(n) - n + d0 for n in range(horizon + 1)]
    if any(l < 0 for l in lengths):
        raise ConfigError("f(n) - n + d0 must be non-negative")
    return lengths

