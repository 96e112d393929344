"""Dovetailed enumeration of machine domains and busy-beaver tables."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .errors import BudgetExhausted, ConfigError, EmptyDomain, NotDeepest
from .foundation import string_key, strings_upto
from .machine import Halted, Machine


@dataclass(frozen=True)
class DomainEvent:
    program: str
    output: str
    runtime: int
    event_index: int


@dataclass(frozen=True)
class Certificate:
    """Which part of the domain an enumeration is known to cover."""

    max_len: int
    max_steps: int
    complete: bool
    step_ceiling: int

    def describe(self) -> str:
        state = "complete" if self.complete else "partial"
        return (f"{state}: lengths <= {self.max_len}, steps <= {self.max_steps}, "
                f"runtime ceiling {self.step_ceiling}")


@dataclass(frozen=True)
class Enumeration:
    events: tuple[DomainEvent, ...]
    certificate: Certificate

    @property
    def complete(self) -> bool:
        return self.certificate.complete

    @property
    def programs(self) -> list[str]:
        return [e.program for e in self.events]

    def __len__(self):
        return len(self.events)

    def __iter__(self):
        return iter(self.events)


def certify(m: Machine, max_len: int, max_steps: int) -> Certificate:
    ceiling = m.step_ceiling(max_len)
    return Certificate(max_len, max_steps, max_steps >= ceiling, ceiling)


def dovetail(m: Machine, max_len: int, max_steps: int) -> Enumeration:
    """Enumerate halting programs of length <= max_len within max_steps.

    Events come in the canonical order (runtime, then string order).
    """
    halted = []
    for p in m.candidates(max_len):
        result = m.run(p, max_steps)
        if isinstance(result, Halted):
            halted.append((result.steps, string_key(p), p, result.output))
    halted.sort()
    events = tuple(DomainEvent(p, out, t, i)
                   for i, (t, _, p, out) in enumerate(halted))
    return Enumeration(events, certify(m, max_len, max_steps))


def length_census(m: Machine, max_len: int, max_steps: int) -> tuple[Counter, Certificate]:
    """Number of enumerated programs per length, without listing them."""
    return m.halting_census(max_len, max_steps), certify(m, max_len, max_steps)


def domain_upto(m: Machine, n: int) -> tuple[frozenset, Certificate]:
    budget = m.step_ceiling(n)
    enum = dovetail(m, n, budget)
    if not enum.complete:
        raise BudgetExhausted(f"cannot certify the domain of {m!r} up to length {n}")
    return frozenset(enum.programs), enum.certificate


@dataclass(frozen=True)
class BusyBeaverRow:
    t_max: int
    deepest: frozenset

    @property
    def deepest_min(self) -> str:
        return min(self.deepest, key=string_key)


@dataclass(frozen=True)
class BusyBeaverTable:
    l_m: int
    rows: dict

    def __getitem__(self, n) -> BusyBeaverRow:
        return self.rows[n]


def busy_beaver(m: Machine, n_max: int) -> BusyBeaverTable:
    programs, _ = domain_upto(m, n_max)
    if not programs:
        raise EmptyDomain(f"no halting program of length <= {n_max}")
    times = {p: m.runtime(p) for p in programs}
    l_m = min(len(p) for p in programs)
    rows = {}
    for n in range(l_m, n_max + 1):
        upto = [p for p in programs if len(p) <= n]
        t_max = max(times[p] for p in upto)
        rows[n] = BusyBeaverRow(t_max, frozenset(p for p in upto if times[p] == t_max))
    return BusyBeaverTable(l_m, rows)


def dom_from_deep_program(m: Machine, n: int, p: str, check: bool = True) -> frozenset:
    """Recover the domain up to length ``n`` from one of its slowest programs.

    Every string of length <= n is run for exactly T(p) steps.  With
    ``check`` a second pass at the certified ceiling raises
    :class:`NotDeepest` if some program of length <= n runs longer.
    """
    clock = m.runtime(p)
    if clock is None or len(p) > n:
        raise ConfigError(f"{p!r} is not a halting program of length <= {n}")
    found = frozenset(q for q in strings_upto(n) if isinstance(m.run(q, clock), Halted))
    if check:
        ceiling = m.step_ceiling(n)
        for q in m.candidates(n):
            if q not in found and isinstance(m.run(q, ceiling), Halted):
                raise NotDeepest(p, q)
    return found


def lemma26_probe(m: Machine, n_max: int) -> int | None:
    """Least horizon-relative d such that longer-running programs appear within +d.

    Only values of d that leave at least one program constrained are
    tried; ``None`` means no such d exists inside the horizon.
    """
    programs, _ = domain_upto(m, n_max)
    if not programs:
        raise EmptyDomain(f"no halting program of length <= {n_max}")
    times = {p: m.runtime(p) for p in programs}
    l_m = min(len(p) for p in programs)
    for d in range(0, n_max - l_m + 1):
        constrained = [p for p in programs if len(p) + d <= n_max]
        if all(any(len(q) <= len(p) + d and times[q] > times[p] for q in programs)
               for p in constrained):
            return d
    return None
