"""Machine-relative program-size complexity and the arithmetic probes built on it.

Every value here is relative to a concrete machine and a certified
enumeration; none of it estimates complexity with respect to an optimal
machine.  Infinity (``math.inf``) means no producing program was found.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .enumeration import Certificate, dovetail
from .errors import ConfigError, MissingH
from .foundation import strings_of_length
from .machine import Machine, TableMachine
from .orders import OrderFunction
from .thermo import resolve_truncation, temperature

INF = math.inf


def output_complexities(m: TableMachine) -> dict[str, int]:
    best: dict[str, int] = {}
    for p, (out, _) in m.entries.items():
        if len(p) < best.get(out, INF):
            best[out] = len(p)
    return best


def h_exact(m: TableMachine, s: str):
    return output_complexities(m).get(s, INF)


@dataclass(frozen=True)
class CertifiedH:
    value: int | float
    certificate: Certificate
    exact: bool

    def __eq__(self, other):
        if isinstance(other, CertifiedH):
            return (self.value, self.certificate, self.exact) == \
                (other.value, other.certificate, other.exact)
        return self.value == other


@dataclass(frozen=True)
class ComplexityProfile:
    machine: str
    values: dict
    certificate: Certificate

    def __getitem__(self, s):
        return self.values[s]


def _covers(m: Machine, cert: Certificate, value) -> bool:
    """Whether ``cert`` sees every program of length <= value."""
    if not cert.complete:
        return False
    longest = m.max_program_length
    if longest is not None and cert.max_len >= longest:
        return True
    return value <= cert.max_len


def complexity_profile(m: Machine, strings: Sequence[str], max_len=None,
                       max_steps=None) -> ComplexityProfile:
    max_len, max_steps = resolve_truncation(m, max_len, max_steps)
    enum = dovetail(m, max_len, max_steps)
    best: dict[str, int] = {}
    for e in enum:
        if len(e.program) < best.get(e.output, INF):
            best[e.output] = len(e.program)
    values = {s: best.get(s, INF) for s in strings}
    return ComplexityProfile(getattr(m, "name", repr(m)), values, enum.certificate)


def h_certified(m: Machine, s: str, max_len=None, max_steps=None) -> CertifiedH:
    """H restricted to a certified enumeration, flagged exact when the certificate suffices."""
    profile = complexity_profile(m, [s], max_len, max_steps)
    value = profile[s]
    return CertifiedH(value, profile.certificate, _covers(m, profile.certificate, value))


def _h_lookup(H, n: int):
    try:
        value = H[n]
    except (KeyError, IndexError):
        raise MissingH(n) from None
    if value is None:
        raise MissingH(n)
    return value


def _as_table(H) -> Mapping[int, int]:
    """Sequences list H(prefix of length 1), H(prefix of length 2), ..."""
    if isinstance(H, Mapping):
        return H
    return {n: v for n, v in enumerate(H, start=1)}


@dataclass(frozen=True)
class LedgerRow:
    n: int
    h: int | float
    t_times_n: Fraction

    @property
    def slack_low(self):
        """H - Tn: how far above the lower line the value sits."""
        return INF if self.h == INF else self.h - self.t_times_n

    @property
    def slack_high(self):
        """Tn - H: how far below the upper line the value sits."""
        return -INF if self.h == INF else self.t_times_n - self.h


@dataclass(frozen=True)
class RandomnessLedger:
    temperature: Fraction
    rows: tuple
    c: int
    d: int | float
    c_at_horizon: bool

    @property
    def horizon(self) -> int:
        return len(self.rows)


def _least_natural_above(values) -> int | float:
    worst = max(values, default=0)
    if worst == INF:
        return INF
    if worst == -INF:
        return 0
    return max(0, math.ceil(worst))


def randomness_ledger(alpha_bits: str, T, H) -> RandomnessLedger:
    """Per-n slacks and the least horizon-relative witnesses c and d.

    ``c`` is the least natural with Tn - c <= H(n) on every row and ``d`` the
    least with H(n) <= Tn + d.  ``c_at_horizon`` marks a witness forced by the
    last row alone, i.e. one still growing at the edge of the window.
    """
    t = temperature(T)
    table = _as_table(H)
    rows = tuple(LedgerRow(n, _h_lookup(table, n), t * n) for n in range(1, len(alpha_bits) + 1))
    needs_c = [-r.slack_low for r in rows]
    c = _least_natural_above(needs_c)
    d = _least_natural_above(-r.slack_high for r in rows)
    at_horizon = bool(rows) and c > 0 and \
        _least_natural_above(needs_c[:-1]) < c
    return RandomnessLedger(t, rows, c, d, at_horizon)


def ample_excess_partial(alpha_bits: str, H, N: int) -> Fraction:
    """Exact sum of 2**(n - H(n)) for n = 1..N; infinite H contributes nothing."""
    if N > len(alpha_bits):
        raise ConfigError(f"N={N} exceeds the {len(alpha_bits)} available bits")
    table = _as_table(H)
    total = Fraction(0)
    for n in range(1, N + 1):
        h = _h_lookup(table, n)
        if h != INF:
            total += Fraction(2) ** (n - h)
    return total


@dataclass(frozen=True)
class StepSumProbe:
    partial: Fraction
    steppoints: tuple
    windows: tuple  # (k, lhs, rhs) for each checked k

    @property
    def holds(self) -> bool:
        return all(lhs < rhs for _, lhs, rhs in self.windows)


def stepsum_probe(f: OrderFunction, N: int) -> StepSumProbe:
    """Head of sum 2**(n - f(n)) and the block estimate over the jumps of f.

    The jump points h(0) < h(1) < ... are the n <= N with f(n) < f(n+1).  For
    each k >= 1 the sum over h(0) < n <= h(k) is compared with
    2 * sum_{j=1..k} 2**(h(j) - f(h(j))).
    """
    values = [f(n) for n in range(N + 2)]
    terms = [Fraction(2) ** (n - values[n]) for n in range(N + 1)]
    partial = sum(terms, Fraction(0))
    steps = tuple(n for n in range(N + 1) if values[n] < values[n + 1])
    windows = []
    if steps:
        lhs = Fraction(0)
        rhs = Fraction(0)
        for k in range(1, len(steps)):
            lhs += sum(terms[steps[k - 1] + 1:steps[k] + 1], Fraction(0))
            rhs += 2 * terms[steps[k]]
            windows.append((k, lhs, rhs))
    return StepSumProbe(partial, steps, tuple(windows))


def find_extension(m: TableMachine, s: str, c: int, T) -> str | None:
    """Least t of length c with H(st) >= H(s) + Tc, or None for this machine."""
    t_ = temperature(T)
    h = output_complexities(m)
    target = h.get(s, INF)
    if target != INF:
        target = target + t_ * c
    for t in strings_of_length(c):
        value = h.get(s + t, INF)
        if value == INF or (target != INF and value >= target):
            return t
    return None


def padding_probe(m: TableMachine, s: str, c: int, T) -> bool:
    """Whether H(s0^c) and H(s1^c) are both <= H(s) + Tc - 1."""
    t = temperature(T)
    h = output_complexities(m)
    base = h.get(s, INF)
    for bit in "01":
        padded = h.get(s + bit * c, INF)
        if padded == INF:
            return False
        if base != INF and padded > base + t * c - 1:
            return False
    return True
