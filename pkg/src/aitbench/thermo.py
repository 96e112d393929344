"""Halting probability, partition function and thermodynamic quantities.

All sums run over a certified truncation of the domain (programs of length
<= max_len halting within max_steps).  Energies are program lengths and
logarithms are base 2, so ``F = -T log2 Z``.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .enumeration import Certificate, dovetail, length_census
from .errors import ConfigError, EmptyDomain, NotIncreasing, PrecisionUnreachable
from .foundation import (
    Interval,
    binary_prefix,
    interval_sum,
    ln2_interval,
    log2_interval,
    power_interval,
)
from .machine import Machine


def temperature(value) -> Fraction:
    t = Fraction(value)
    if t <= 0:
        raise ConfigError(f"temperature must be positive, got {t}")
    return t


def resolve_truncation(m: Machine, max_len=None, max_steps=None) -> tuple[int, int]:
    if max_len is None:
        max_len = m.max_program_length
        if max_len is None:
            raise ConfigError(f"{m!r} has an unbounded domain; give max_len")
        max_len = max(max_len, 0)
    if max_steps is None:
        max_steps = m.step_ceiling(max_len)
    return max_len, max_steps


@dataclass(frozen=True)
class OmegaApprox:
    value: Fraction
    exact: bool
    certificate: Certificate


def omega_approx(m: Machine, max_len=None, max_steps=None) -> OmegaApprox:
    """Lower bound on the halting probability, exact on complete truncations.

    ``exact`` means the value equals Omega restricted to lengths <= max_len
    (for a table machine whose keys all fit, Omega itself).
    """
    max_len, max_steps = resolve_truncation(m, max_len, max_steps)
    census, cert = length_census(m, max_len, max_steps)
    value = sum((Fraction(count, 1 << length) for length, count in census.items()),
                Fraction(0))
    return OmegaApprox(value, cert.complete, cert)


def _boltzmann(length: int, t: Fraction, bits: int) -> Interval:
    return power_interval(2, Fraction(-length) / t, bits)


def census_z(census: Counter, t: Fraction, precision: int, weight=lambda l: 1) -> Interval:
    """Enclose sum(count * weight(l) * 2**(-l/T)) to width <= 2**-precision."""
    if not census:
        return Interval.point(0)
    spread = len(census).bit_length() + 1
    terms = []
    for length in sorted(census):
        factor = census[length] * weight(length)
        if factor == 0:
            continue
        bits = precision + spread + factor.bit_length()
        terms.append(_boltzmann(length, t, bits) * factor)
    return interval_sum(terms)


def z_approx(m: Machine, T, max_len=None, max_steps=None, precision: int = 32) -> Interval:
    if precision < 1:
        raise ConfigError("precision must be >= 1")
    t = temperature(T)
    max_len, max_steps = resolve_truncation(m, max_len, max_steps)
    census, _ = length_census(m, max_len, max_steps)
    return census_z(census, t, precision)


def z_restricted(m: Machine, T, s: str, max_len=None, max_steps=None,
                 precision: int = 32) -> Interval:
    """Partition-function contribution of the programs with output ``s``."""
    t = temperature(T)
    max_len, max_steps = resolve_truncation(m, max_len, max_steps)
    enum = dovetail(m, max_len, max_steps)
    census = Counter(len(e.program) for e in enum if e.output == s)
    return census_z(census, t, precision)


def z_by_output(m: Machine, T, max_len=None, max_steps=None,
                precision: int = 32) -> dict[str, Interval]:
    t = temperature(T)
    max_len, max_steps = resolve_truncation(m, max_len, max_steps)
    per_output: dict[str, Counter] = {}
    for e in dovetail(m, max_len, max_steps):
        per_output.setdefault(e.output, Counter())[len(e.program)] += 1
    return {s: census_z(c, t, precision) for s, c in per_output.items()}


@dataclass(frozen=True)
class ThermoReport:
    temperature: Fraction
    z: Interval
    f: Interval
    e: Interval
    s: Interval
    c: Interval
    truncation: tuple[int, int]
    precision: int
    working_precision: int
    within_precision: bool

    def quantities(self) -> dict[str, Interval]:
        return {"Z": self.z, "F": self.f, "E": self.e, "S": self.s, "C": self.c}


def _suite_at(census: Counter, t: Fraction, work: int):
    z = census_z(census, t, work)
    energy = census_z(census, t, work, weight=lambda l: l)
    second = census_z(census, t, work, weight=lambda l: l * l)
    e = (energy / z).round_out(work + 4)
    f = (-t * log2_interval(z, work + 4)).round_out(work + 4)
    s = ((e - f) / t).round_out(work + 4)
    ln2 = ln2_interval(work + 4)
    c = (ln2 / (t * t) * (second / z - e * e)).round_out(work + 4)
    return z, f, e, s, c


def thermo_suite(m: Machine, T, max_len=None, max_steps=None,
                 precision: int = 20, max_extra: int = 256) -> ThermoReport:
    """Z, F, E, S and C over the truncated domain, as enclosing intervals.

    The working precision is raised until every width is <= 2**-precision;
    if that needs more than ``max_extra`` extra bits the report says so
    through ``within_precision``.
    """
    t = temperature(T)
    max_len, max_steps = resolve_truncation(m, max_len, max_steps)
    census, _ = length_census(m, max_len, max_steps)
    if not census:
        raise EmptyDomain(f"no halting program within lengths <= {max_len}")
    target = Fraction(1, 1 << precision)
    extra = 8
    while True:
        work = precision + extra
        values = _suite_at(census, t, work)
        ok = all(v.width <= target for v in values)
        if ok or extra >= max_extra:
            break
        extra *= 2
    return ThermoReport(t, *values, truncation=(max_len, max_steps), precision=precision,
                        working_precision=work, within_precision=ok)


@dataclass(frozen=True)
class SweepTable:
    temperatures: tuple
    lengths: tuple
    cells: dict

    def column(self, T) -> list[Interval]:
        return [self.cells[(Fraction(T), L)] for L in self.lengths]

    def rows(self):
        for t in self.temperatures:
            for L in self.lengths:
                yield t, L, self.cells[(t, L)]


def phase_sweep(m: Machine, T_grid: Sequence, L_grid: Sequence[int], max_steps=None,
                precision: int = 32) -> SweepTable:
    """Truncated Z(T) for every temperature and length horizon.

    Without ``max_steps`` each horizon uses its certified step ceiling.
    """
    temps = tuple(temperature(t) for t in T_grid)
    lengths = tuple(int(L) for L in L_grid)
    cells = {}
    for L in lengths:
        steps = m.step_ceiling(L) if max_steps is None else max_steps
        census, _ = length_census(m, L, steps)
        for t in temps:
            cells[(t, L)] = census_z(census, t, precision)
    return SweepTable(temps, lengths, cells)


def t_convergence_partial(seq: Sequence, T, precision: int = 32) -> Interval:
    """Enclose sum((a[n+1] - a[n])**T) over the finite window ``seq``."""
    t = temperature(T)
    values = [Fraction(a) for a in seq]
    gaps = [b - a for a, b in zip(values, values[1:])]
    if any(g <= 0 for g in gaps):
        raise NotIncreasing("sequence must be strictly increasing")
    bits = precision + len(gaps).bit_length() + 1
    return interval_sum(power_interval(g, t, bits) for g in gaps)


def certified_prefix(enclose: Callable[[int], Interval], n: int, start: int | None = None,
                     limit: int = 4096) -> str:
    """Leading ``n`` bits of a real known only through enclosing intervals.

    ``enclose(p)`` must return an interval of width <= 2**-p around the real.
    """
    p = start if start is not None else n + 8
    scale = 1 << n
    while p <= limit:
        iv = enclose(p)
        if math.floor(iv.lo * scale) == math.floor(iv.hi * scale):
            return binary_prefix(iv.lo, n)
        p *= 2
    raise PrecisionUnreachable(f"could not certify {n} bits below precision {limit}")


def z_prefix_bits(m: Machine, T, n: int, max_len=None, max_steps=None) -> str:
    """Certified leading bits of the truncated partition function."""
    t = temperature(T)
    max_len, max_steps = resolve_truncation(m, max_len, max_steps)
    census, _ = length_census(m, max_len, max_steps)
    return certified_prefix(lambda p: census_z(census, t, p), n)
