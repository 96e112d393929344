"""Concrete prefix-free machines with step-bounded execution.

A machine halts only on programs in its domain; on every other input,
and on domain programs whose running time exceeds the budget, :func:`run`
reports :data:`RUNNING`.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Union

from .errors import BadEnumeration, NotPrefixFree, ParseError
from .foundation import (
    EMPTY,
    check_bits,
    dyadic_int,
    find_prefix_pair,
    string_key,
    strings_upto,
)


@dataclass(frozen=True)
class Halted:
    output: str
    steps: int


class _Running:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "RUNNING"

    def __bool__(self):
        return False


RUNNING = _Running()

RunResult = Union[Halted, _Running]


class TableMachine:
    """Finite machine given by ``program -> (output, runtime)``."""

    def __init__(self, entries: Mapping[str, tuple[str, int]], name: str = "table"):
        table = {}
        for program, (output, runtime) in entries.items():
            check_bits(program)
            check_bits(output)
            if int(runtime) < 1:
                raise ValueError(f"runtime of {program!r} must be positive")
            table[program] = (output, int(runtime))
        pair = find_prefix_pair(table)
        if pair is not None:
            raise NotPrefixFree(*pair)
        self.entries = dict(sorted(table.items(), key=lambda kv: string_key(kv[0])))
        self.name = name

    def __repr__(self):
        return f"TableMachine({self.name!r}, {len(self.entries)} entries)"

    def __eq__(self, other):
        return isinstance(other, TableMachine) and self.entries == other.entries

    def __hash__(self):
        return hash(tuple(self.entries.items()))

    def run(self, p: str, budget: int) -> RunResult:
        entry = self.entries.get(p)
        if entry is None or entry[1] > budget:
            return RUNNING
        return Halted(*entry)

    def runtime(self, p: str) -> int | None:
        entry = self.entries.get(p)
        return None if entry is None else entry[1]

    def candidates(self, max_len: int) -> Iterator[str]:
        return (p for p in self.entries if len(p) <= max_len)

    def step_ceiling(self, max_len: int) -> int:
        """Upper bound on the runtime of every halting program of length <= max_len."""
        return max((t for p, (_, t) in self.entries.items() if len(p) <= max_len), default=0)

    @property
    def max_program_length(self) -> int | None:
        return max((len(p) for p in self.entries), default=-1)

    def halting_census(self, max_len: int, max_steps: int) -> Counter:
        return Counter(len(p) for p, (_, t) in self.entries.items()
                       if len(p) <= max_len and t <= max_steps)


def gamma_code(a: int) -> str:
    """Elias-gamma code of a positive integer."""
    if a < 1:
        raise ValueError("gamma code needs a >= 1")
    binary = bin(a)[2:]
    return "0" * (len(binary) - 1) + binary


def gamma_length(a: int) -> int:
    return 2 * a.bit_length() - 1


class InterpMachine:
    """Toy interpreter whose domain is every ``gamma(a) + body`` with ``|body| = a``.

    It outputs ``body`` after ``|p| + value(body[:min(a, w)])`` steps.
    """

    def __init__(self, runtime_window: int = 16, name: str | None = None):
        if runtime_window < 0:
            raise ValueError("runtime window must be >= 0")
        self.runtime_window = runtime_window
        self.name = name or f"interp(w={runtime_window})"

    def __repr__(self):
        return f"InterpMachine(w={self.runtime_window})"

    def __eq__(self, other):
        return isinstance(other, InterpMachine) and other.runtime_window == self.runtime_window

    def __hash__(self):
        return hash(("interp", self.runtime_window))

    def _parse(self, p: str) -> str | None:
        zeros = len(p) - len(p.lstrip("0"))
        header = 2 * zeros + 1
        if len(p) < header:
            return None
        a = int(p[zeros:header], 2)
        body = p[header:]
        return body if len(body) == a else None

    def runtime(self, p: str) -> int | None:
        body = self._parse(p)
        if body is None:
            return None
        return len(p) + dyadic_int(body[:self.runtime_window])

    def run(self, p: str, budget: int) -> RunResult:
        body = self._parse(p)
        if body is None:
            return RUNNING
        steps = len(p) + dyadic_int(body[:self.runtime_window])
        return Halted(body, steps) if steps <= budget else RUNNING

    def _arities(self, max_len: int) -> Iterator[int]:
        a = 1
        while a + gamma_length(a) <= max_len:
            yield a
            a += 1

    def candidates(self, max_len: int) -> Iterator[str]:
        for a in self._arities(max_len):
            head = gamma_code(a)
            for body in _bodies(a):
                yield head + body

    def step_ceiling(self, max_len: int) -> int:
        return max((a + gamma_length(a) + (1 << min(a, self.runtime_window)) - 1
                    for a in self._arities(max_len)), default=0)

    @property
    def max_program_length(self) -> int | None:
        return None

    def halting_census(self, max_len: int, max_steps: int) -> Counter:
        """Closed-form count of halting programs per length."""
        census = Counter()
        for a in self._arities(max_len):
            length = a + gamma_length(a)
            window = min(a, self.runtime_window)
            fast = min(1 << window, max(0, max_steps - length + 1))
            if fast:
                census[length] = fast << (a - window)
        return census


def _bodies(a: int) -> Iterator[str]:
    for value in range(1 << a):
        yield format(value, f"0{a}b")


Machine = Union[TableMachine, InterpMachine]


def make_table_machine(entries: Iterable[tuple[str, str, int]] | Mapping, name: str = "table"):
    if isinstance(entries, Mapping):
        return TableMachine(entries, name=name)
    table = {}
    for program, output, runtime in entries:
        if program in table:
            raise NotPrefixFree(program, program)
        table[program] = (output, runtime)
    return TableMachine(table, name=name)


def run(m: Machine, p: str, budget: int) -> RunResult:
    return m.run(p, budget)


def runtime(m: Machine, p: str) -> int | None:
    return m.runtime(p)


def truncate_machine(m: Machine, enum_order: list[str], l: int) -> TableMachine:
    """The machine whose domain is the first ``l`` enumerated programs."""
    if l > len(enum_order):
        raise BadEnumeration(f"only {len(enum_order)} programs enumerated, {l} requested")
    table = {}
    for p in enum_order[:l]:
        t = m.runtime(p)
        if t is None:
            raise BadEnumeration(f"{p!r} is not in the domain of {m!r}")
        table[p] = (m.run(p, t).output, t)
    return TableMachine(table, name=f"{getattr(m, 'name', 'm')}^({l})")


# -- text format -----------------------------------------------------------

def _bits_token(token: str, line: int) -> str:
    if token in ('""', "-", "λ"):
        return EMPTY
    try:
        return check_bits(token)
    except ValueError:
        raise ParseError(f"bad bitstring {token!r}", line) from None


def parse_machine(text: str, name: str = "machine") -> Machine:
    entries = {}
    interp = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if tokens[0] == "interp":
            if len(tokens) != 2 or not tokens[1].startswith("w="):
                raise ParseError("expected 'interp w=<decimal>'", lineno)
            try:
                interp = int(tokens[1][2:])
            except ValueError:
                raise ParseError(f"bad window {tokens[1]!r}", lineno) from None
        elif tokens[0] == "entry":
            if len(tokens) != 4:
                raise ParseError("expected 'entry <program> <output> <runtime>'", lineno)
            program = _bits_token(tokens[1], lineno)
            output = _bits_token(tokens[2], lineno)
            try:
                steps = int(tokens[3])
            except ValueError:
                raise ParseError(f"bad runtime {tokens[3]!r}", lineno) from None
            if steps < 1:
                raise ParseError("runtime must be positive", lineno)
            if program in entries:
                raise ParseError(f"duplicate program {tokens[1]!r}", lineno)
            entries[program] = (output, steps)
        else:
            raise ParseError(f"unknown directive {tokens[0]!r}", lineno)
    if interp is not None:
        if entries:
            raise ParseError("interp machines take no entries")
        return InterpMachine(interp, name=name)
    return TableMachine(entries, name=name)


def load_machine(path) -> Machine:
    path = Path(path)
    return parse_machine(path.read_text(), name=path.stem)


def dump_machine(m: Machine) -> str:
    if isinstance(m, InterpMachine):
        return f"interp w={m.runtime_window}\n"
    lines = [f"# {m.name}"]
    for p, (out, t) in m.entries.items():
        lines.append(f"entry {p or chr(34) * 2} {out or chr(34) * 2} {t}")
    return "\n".join(lines) + "\n"
