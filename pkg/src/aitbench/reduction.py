"""Oracle reductions with query-size bounds, run on concrete machines.

A reduction is a procedure that talks to its oracle only through an
:class:`OracleHandle`.  The handle fixes the input size and the bound up
front, refuses any query longer than ``bound(input_size)`` and records
every query it answers, so the transcript is the evidence that the bound
was respected.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import groupby
from typing import Callable, Container, Iterator, Sequence

from .enumeration import dovetail
from .errors import (
    BudgetExhausted,
    ConfigError,
    EmptyS,
    InsufficientBits,
    PrecisionUnreachable,
    QueryTooLong,
    RunViolation,
    WindowExhausted,
)
from .foundation import (
    Interval,
    binary_prefix,
    dyadic_int,
    interval_sum,
    nat_to_string,
    pf_membership,
    point_value,
    power_interval,
    strings_of_length,
    strings_upto,
)
from .kraft import allocate_stream
from .machine import InterpMachine, Machine, TableMachine
from .orders import (
    Identity,
    InvLinear,
    Linear,
    OrderFunction,
    compose_bound,
    shifted,
)
from .thermo import temperature
from .complexity import output_complexities

__all__ = [
    "OracleHandle", "PrefixSet", "ReductionReport", "oracle_wrap", "compose_bound",
    "dom_from_omega", "incompressible_from_omega", "build_comparison_machine",
    "prefixes_from_dom", "alpha_construct", "prefixes_from_dom_via_Fk",
    "run_length_check", "reduce_via_domination", "build_indexed_machine", "dom_from_z",
    "unidirectionality_probe", "PrefixProvider", "pf_provider", "comparison_provider",
    "comparison_codes", "UnidirectionalityTable",
]


class PrefixSet:
    """The set of prefixes of a real known through its leading bits."""

    def __init__(self, bits: str):
        self.bits = bits

    def __contains__(self, s: str) -> bool:
        return pf_membership(self.bits, s)

    def __repr__(self):
        return f"PrefixSet({self.bits!r})"


class OracleHandle:
    """Membership oracle that enforces a query-size bound and keeps a transcript."""

    def __init__(self, backing: Container[str], bound: OrderFunction, input_size: int):
        self.backing = backing
        self.bound = bound
        self.input_size = input_size
        self.limit = bound(input_size)
        self.transcript: list[tuple[str, bool]] = []

    def query(self, q: str) -> bool:
        if len(q) > self.limit:
            raise QueryTooLong(q, self.limit)
        answer = q in self.backing
        self.transcript.append((q, answer))
        return answer

    __call__ = query

    @property
    def max_query_len(self) -> int:
        return max((len(q) for q, _ in self.transcript), default=0)

    @property
    def query_count(self) -> int:
        return len(self.transcript)


def oracle_wrap(S: Container[str], f: OrderFunction, input_size: int) -> OracleHandle:
    return OracleHandle(S, f, input_size)


@dataclass(frozen=True)
class ReductionReport:
    input: str
    answer: object
    max_query_len: int
    declared_bound_value: int
    query_count: int
    transcript: tuple = field(default=(), repr=False)

    @property
    def within_bound(self) -> bool:
        return self.max_query_len <= self.declared_bound_value

    def verdict(self) -> str:
        if isinstance(self.answer, bool):
            word = "ACCEPT" if self.answer else "REJECT"
        else:
            word = f"OUTPUT={self.answer or 'λ'}"
        return (f"{word} max_query={self.max_query_len} bound={self.declared_bound_value} "
                f"queries={self.query_count}")


def _report(s: str, answer, handle: OracleHandle, bound_value=None) -> ReductionReport:
    return ReductionReport(
        s, answer, handle.max_query_len,
        handle.limit if bound_value is None else bound_value,
        handle.query_count, tuple(handle.transcript))


def _read_prefix(query: Callable[[str], bool], n: int) -> str:
    """Leading n bits of a real through a prefix oracle, one query per bit."""
    bits = ""
    for _ in range(n):
        bits += "0" if query(bits + "0") else "1"
    return bits


# -- halting probability -> domain -------------------------------------------

def _domain_from_lower_bound(m: Machine, target: Fraction, upto: int,
                             max_stage: int = 1 << 16) -> frozenset:
    """Dovetail until the enumerated measure reaches ``target``.

    Stage t runs every program of length <= t for t steps.  Once the
    measure found is >= target and target is within 2**-upto of the true
    halting probability, no program of length <= upto is still missing.
    """
    if isinstance(m, InterpMachine):
        raise ConfigError("the interpreter halts with probability 1; its bits carry no information")
    t = 1
    while t <= max_stage:
        found = dovetail(m, t, t)
        measure = sum((Fraction(1, 1 << len(e.program)) for e in found), Fraction(0))
        if measure >= target:
            return frozenset(e.program for e in found if len(e.program) <= upto)
        t *= 2
    raise BudgetExhausted(f"enumerated measure stayed below {target} up to stage {max_stage}")


def dom_from_omega(m: Machine, omega_bits: str, s: str,
                   query: Callable[[str], bool] | None = None,
                   bound: OrderFunction | None = None) -> ReductionReport:
    """Decide ``s`` in the domain of ``m`` from the leading bits of its halting probability.

    The procedure needs queries of length n = |s|; ``bound`` declares a
    different limit (a looser one changes nothing, a tighter one faults).
    ``query`` may replace the default prefix oracle (for chaining reductions).
    """
    n = len(s)
    handle = OracleHandle(PrefixSet(omega_bits), bound or Identity(0), n)
    ask = handle.query if query is None else query
    target = point_value(_read_prefix(ask, n))
    domain = _domain_from_lower_bound(m, target, n)
    return _report(s, s in domain, handle)


def incompressible_from_omega(m: Machine, omega_bits: str, n: int, f: OrderFunction,
                              c: int) -> ReductionReport:
    """Least string not produced by any program of length <= n, from f(n)+c bits."""
    bound = shifted(f, c)
    width = bound(n)
    if width < n:
        raise InsufficientBits(f"{width} bits of the halting probability cannot certify "
                               f"programs of length {n}")
    handle = OracleHandle(PrefixSet(omega_bits), bound, n)
    target = point_value(_read_prefix(handle.query, width))
    domain = _domain_from_lower_bound(m, target, n)
    outputs = {m.run(p, m.runtime(p)).output for p in domain}
    s = next(x for x in strings_upto(len(outputs)) if x not in outputs)
    return _report(str(n), s, handle)


# -- comparison machine: prefixes of a left-computable real from a domain ----

def build_comparison_machine(g: Sequence[str], h_seq: Sequence, horizon: int | None = None,
                             name: str = "comparison") -> TableMachine:
    """Machine whose domain holds g(n)s exactly when 0.s lies below some h_seq[k].

    Only the first ``horizon + 1`` approximations are used; the resulting
    domain compares s against their maximum beta.  A program's runtime is
    one more than the first stage k that admits it.
    """
    approx = [Fraction(h) for h in h_seq]
    if horizon is None:
        horizon = len(approx) - 1
    approx = approx[:horizon + 1]
    if any(b <= a for a, b in zip(approx, approx[1:])):
        raise ConfigError("approximating sequence must be increasing")
    whole = math.floor(approx[-1]) if approx else 0
    entries = {}
    for n, code in enumerate(g):
        for s in strings_of_length(n):
            value = point_value(s)
            stage = next((k for k, h in enumerate(approx) if value < h - whole), None)
            if stage is not None:
                entries[code + s] = ("", stage + 1)
    return TableMachine(entries, name=name)


def comparison_codes(f: OrderFunction, d0: int, horizon: int) -> list[str]:
    """Codewords g(0..horizon) with |g(n)| = f(n) - n + d0."""
    lengths = [f(n) - n + d0 for n in range(horizon + 1)]
    if any(l < 0 for l in lengths):
        raise ConfigError("f(n) - n + d0 must be non-negative")
    return allocate_stream(lengths)


def _domain_oracle(F: Machine) -> Container[str]:
    if isinstance(F, TableMachine):
        return F.entries
    return _HaltingSet(F)


class _HaltingSet:
    def __init__(self, m: Machine):
        self.m = m

    def __contains__(self, p):
        t = self.m.runtime(p)
        return t is not None


def prefixes_from_dom(F: Machine, g: Sequence[str], f: OrderFunction, d0: int, t: str,
                      query: Callable[[str], bool] | None = None) -> ReductionReport:
    """Accept iff t is the n-bit prefix of the real encoded in the comparison machine.

    Every s of length n = |t| is probed as g(n)s; the prefix is the
    greatest s found in the domain.
    """
    n = len(t)
    if n >= len(g):
        raise ConfigError(f"comparison machine covers lengths < {len(g)}, got {n}")
    handle = OracleHandle(_domain_oracle(F), shifted(f, d0), n)
    ask = handle.query if query is None else query
    inside = [s for s in strings_of_length(n) if ask(g[n] + s)]
    best = max(inside, key=dyadic_int, default=None)
    return _report(t, best == t, handle)


# -- prefix providers for chained reductions ---------------------------------

@dataclass
class PrefixProvider:
    """Yields the leading m bits of a real, with the bound its queries obey.

    ``read(m)`` returns ``(bits, handle)`` where the handle holds the
    transcript of that read.
    """

    bound: OrderFunction
    read: Callable[[int], tuple[str, OracleHandle]]


def pf_provider(alpha_bits: str) -> PrefixProvider:
    """Direct prefix oracle of a real: one query per bit, bound n."""
    bound = Identity(0)

    def read(m):
        handle = OracleHandle(PrefixSet(alpha_bits), bound, m)
        return _read_prefix(handle.query, m), handle

    return PrefixProvider(bound, read)


def comparison_provider(F: Machine, g: Sequence[str], f: OrderFunction,
                        d0: int) -> PrefixProvider:
    """Prefixes from the domain of a comparison machine.

    The admitted s of each length are downward closed, so the greatest one
    is found by bisection rather than by probing all of them.
    """
    bound = shifted(f, d0)
    backing = _domain_oracle(F)

    def read(m):
        if m >= len(g):
            raise InsufficientBits(f"comparison machine covers lengths < {len(g)}, got {m}")
        handle = OracleHandle(backing, bound, m)
        lo, hi = -1, (1 << m) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            s = format(mid, f"0{m}b") if m else ""
            if handle.query(g[m] + s):
                lo = mid
            else:
                hi = mid - 1
        if lo < 0:
            raise ConfigError("comparison machine admits no string of this length")
        return (format(lo, f"0{m}b") if m else ""), handle

    return PrefixProvider(bound, read)


# -- partially random real from a domain oracle ------------------------------

def _extension_stage(prev: str, c: int, admissible: Callable[[str], bool], stage: int) -> str:
    for t in strings_of_length(c):
        if admissible(prev + t):
            return prev + t
    raise EmptyS(stage)


def alpha_construct(V: TableMachine, T, c: int, k: int) -> str:
    """a_k: extend c bits at a time by the least u with H(u) > T|u|."""
    t = temperature(T)
    h = output_complexities(V)
    a = ""
    for stage in range(1, k + 1):
        a = _extension_stage(a, c, lambda u: h.get(u, math.inf) > t * len(u), stage)
    return a


def prefixes_from_dom_via_Fk(V: TableMachine, T, c: int, s: str,
                             query: Callable[[str], bool] | None = None) -> ReductionReport:
    """Accept iff s is a prefix of the real built by :func:`alpha_construct`.

    The sets F_k of strings with H(u) <= floor(Tck) are rebuilt from domain
    queries of length <= floor(T c k0), k0 = ceil(|s|/c).  The declared bound
    is Linear(T, ceil(Tc)).
    """
    t = temperature(T)
    if c < 1:
        raise ConfigError("block length c must be >= 1")
    n = len(s)
    k0 = -(-n // c)
    handle = OracleHandle(V.entries, Linear(t, math.ceil(t * c)), n)
    ask = handle.query if query is None else query
    reach = math.floor(t * c * k0)
    found: dict[str, int] = {}
    pending = [""]
    # programs form a prefix-free set, so extensions of a member need no query
    while pending:
        p = pending.pop()
        if ask(p):
            out = V.run(p, V.runtime(p)).output
            found[out] = min(found.get(out, math.inf), len(p))
        elif len(p) < reach:
            pending.extend((p + "1", p + "0"))
    a = ""
    for k in range(1, k0 + 1):
        cap = math.floor(t * c * k)
        a = _extension_stage(a, c, lambda u: found.get(u, math.inf) > cap, k)
    return _report(s, a.startswith(s), handle)


# -- domination -----------------------------------------------------------------

def run_length_check(bits: str, d: int) -> bool:
    """True iff ``bits`` has no run of d or more equal symbols."""
    if d < 2:
        raise ConfigError("run length d must be >= 2")
    return all(len(list(run)) < d for _, run in groupby(bits))


def reduce_via_domination(b_seq: Sequence, a_seq: Sequence, provider: PrefixProvider,
                          d1: int, c: int, s: str,
                          beta_window: str | None = None) -> ReductionReport:
    """Decide whether s prefixes beta using prefixes of a dominating real alpha.

    Needs alpha - a_k >= 2**-d1 (beta - b_k) on the supplied indices and no
    run of c equal bits in beta's expansion.  With d2 = d1 + c + 2, alpha is
    read to n + d2 bits, k0 is the first index with 0.(that prefix) < a_k0,
    and the answer compares s with the first n bits of b_k0.
    """
    if beta_window is not None and not run_length_check(beta_window, c):
        raise RunViolation(beta_window, c)
    n = len(s)
    d2 = d1 + c + 2
    alpha_bits, handle = provider.read(n + d2)
    floor_value = point_value(alpha_bits)
    a_values = [Fraction(a) for a in a_seq]
    whole = math.floor(a_values[-1]) if a_values else 0
    k0 = next((k for k, a in enumerate(a_values) if floor_value < a - whole), None)
    if k0 is None or k0 >= len(b_seq):
        raise WindowExhausted(f"no approximation above 0.{alpha_bits} in the supplied window")
    t = binary_prefix(Fraction(b_seq[k0]), n + c + 2)
    return _report(s, t[:n] == s, handle, provider.bound(n + d2))


# -- partition function -> domain --------------------------------------------

def build_indexed_machine(F: TableMachine, T, d: int, name: str = "indexed") -> TableMachine:
    """Machine V with V(q_i) = i and |q_i| = |p_i| + floor(Td) for F's enumeration p_i."""
    t = temperature(T)
    programs = dovetail(F, F.max_program_length, F.step_ceiling(F.max_program_length))
    extra = math.floor(t * d)
    codes = allocate_stream([len(e.program) + extra for e in programs])
    return TableMachine({q: (nat_to_string(i), e.runtime)
                         for i, (q, e) in enumerate(zip(codes, programs))}, name=name)


def _weights_by_index(V: TableMachine, count: int) -> list[list[int]]:
    lengths: list[list[int]] = [[] for _ in range(count)]
    index = {nat_to_string(i): i for i in range(count)}
    for p, (out, _) in V.entries.items():
        i = index.get(out)
        if i is not None:
            lengths[i].append(len(p))
    return lengths


def _partial_sums(lengths, t: Fraction, precision: int) -> Iterator[Interval]:
    weights: dict[int, Interval] = {}
    lo = hi = Fraction(0)
    for group in lengths:
        for l in group:
            if l not in weights:
                weights[l] = power_interval(2, Fraction(-l) / t, precision + 8)
            lo += weights[l].lo
            hi += weights[l].hi
        yield Interval(lo, hi)


def dom_from_z(F: TableMachine, V: TableMachine, T, z_bits: str, s: str, d: int,
               query: Callable[[str], bool] | None = None,
               max_precision: int = 4096) -> ReductionReport:
    """Decide s in Dom F from the leading ceil(n/T) + d bits of Z_V(T).

    V must give every index i a program of length <= |p_i| + Td, where p_i
    is F's canonical enumeration.  Partial sums over indices are enclosed
    in intervals whose precision grows until the comparison is decided.
    """
    t = temperature(T)
    n = len(s)
    bound = InvLinear(t, d)
    width = bound(n)
    if len(z_bits) < width:
        raise InsufficientBits(f"need {width} bits of Z, have {len(z_bits)}")
    handle = OracleHandle(PrefixSet(z_bits), bound, n)
    ask = handle.query if query is None else query
    target = point_value(_read_prefix(ask, width))
    programs = dovetail(F, F.max_program_length, F.step_ceiling(F.max_program_length)).programs
    groups = _weights_by_index(V, len(programs))
    precision = width + 8
    k_e = None
    while k_e is None:
        for k, acc in enumerate(_partial_sums(groups, t, precision)):
            if acc.lo >= target:
                k_e = k
                break
            if acc.hi >= target:
                precision *= 2
                if precision > max_precision:
                    raise PrecisionUnreachable(
                        f"cannot separate partial sums from 0.{z_bits[:width]}")
                break
        else:
            raise ConfigError("the supplied bits exceed the partition function of V")
    domain = {p for p in programs[:k_e + 1] if len(p) <= n}
    return _report(s, s in domain, handle)


# -- bound arithmetic ---------------------------------------------------------

@dataclass(frozen=True)
class UnidirectionalityTable:
    differences: tuple
    running_max: tuple

    @property
    def maximum(self) -> int:
        return self.running_max[-1]


def unidirectionality_probe(f: OrderFunction, g: OrderFunction, N: int) -> UnidirectionalityTable:
    """g(f(n)) - n for n = 0..N with its running maximum."""
    diffs = tuple(g(f(n)) - n for n in range(N + 1))
    running, best = [], -math.inf
    for x in diffs:
        best = max(best, x)
        running.append(best)
    return UnidirectionalityTable(diffs, tuple(running))
