"""Command-line front end: deterministic CSV/JSON artifacts from machine files."""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

from .complexity import complexity_profile, randomness_ledger
from .enumeration import busy_beaver, dovetail
from .errors import AitError, ConfigError
from .foundation import binary_prefix, format_fraction, parse_fraction, strings_upto
from .kraft import allocate_stream, weight_shift
from .machine import load_machine
from .orders import parse_bound
from .reduction import (
    build_comparison_machine,
    build_indexed_machine,
    comparison_codes,
    dom_from_omega,
    dom_from_z,
    incompressible_from_omega,
    pf_provider,
    prefixes_from_dom,
    prefixes_from_dom_via_Fk,
    reduce_via_domination,
)
from .thermo import omega_approx, phase_sweep, resolve_truncation, thermo_suite, z_prefix_bits


def _decimal(x) -> str:
    return f"{float(x):.12g}"


def _bits_arg(text: str) -> str:
    return "" if text in ('""', "-", "λ") else text


def _rational_list(text: str) -> list[Fraction]:
    return [parse_fraction(t) for t in text.split(",") if t.strip()]


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def write_output(text: str, path: str | None) -> None:
    """Write to stdout, or atomically replace ``path``."""
    if path is None:
        sys.stdout.write(text)
        return
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        os.unlink(tmp)
        raise


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def config_echo(args: argparse.Namespace) -> dict:
    """The serializable part of a parsed command line."""
    return {k: v for k, v in sorted(vars(args).items()) if k != "handler"}


# -- commands -------------------------------------------------------------------

def cmd_enumerate(args) -> str:
    m = load_machine(args.machine)
    max_len, max_steps = resolve_truncation(m, args.max_len, args.max_steps)
    enum = dovetail(m, max_len, max_steps)
    rows = [(e.event_index, e.program, e.output, e.runtime) for e in enum]
    print(enum.certificate.describe(), file=sys.stderr)
    return _csv(["index", "program", "output", "runtime"], rows)


def cmd_bb(args) -> str:
    m = load_machine(args.machine)
    table = busy_beaver(m, args.n_max)
    rows = [(n, row.t_max, len(row.deepest), row.deepest_min) for n, row in table.rows.items()]
    return _csv(["n", "t_max", "deepest_count", "deepest_min"], rows)


def cmd_sweep(args) -> str:
    m = load_machine(args.machine)
    table = phase_sweep(m, _rational_list(args.T), _int_list(args.L),
                        max_steps=args.max_steps, precision=args.precision)
    rows = [(format_fraction(t), L, format_fraction(z.lo), format_fraction(z.hi), _decimal(z.lo))
            for t, L, z in table.rows()]
    return _csv(["T", "L", "z_lo", "z_hi", "z_decimal"], rows)


def cmd_thermo(args) -> str:
    m = load_machine(args.machine)
    omega = omega_approx(m, args.max_len, args.max_steps)
    rows = [("", "Omega", format_fraction(omega.value), format_fraction(omega.value),
             _decimal(omega.value))]
    for t in _rational_list(args.T):
        report = thermo_suite(m, t, args.max_len, args.max_steps, precision=args.precision)
        for name, iv in report.quantities().items():
            rows.append((format_fraction(t), name, format_fraction(iv.lo),
                         format_fraction(iv.hi), _decimal(iv.lo)))
    return _csv(["T", "quantity", "lo", "hi", "decimal"], rows)


def cmd_kraft(args) -> str:
    text = Path(args.input).read_text() if args.input else sys.stdin.read()
    try:
        lengths = [int(tok) for tok in text.split()]
    except ValueError as exc:
        raise ConfigError(f"bad length: {exc}") from None
    return "".join(w + "\n" for w in allocate_stream(lengths))


def cmd_complexity(args) -> str:
    m = load_machine(args.machine)
    max_len, max_steps = resolve_truncation(m, args.max_len, args.max_steps)
    strings = ([_bits_arg(s) for s in args.strings.split(",")] if args.strings is not None
               else list(strings_upto(args.upto)))
    profile = complexity_profile(m, strings, max_len, max_steps)
    rows = [(s, profile[s], max_len, max_steps) for s in strings]
    return _csv(["s", "H", "certificate_len", "certificate_steps"], rows)


def cmd_ledger(args) -> str:
    alpha = _bits_arg(args.alpha_bits)
    if args.H is not None:
        H = [math.inf if v in ("inf", "∞") else int(v) for v in args.H.split(",")]
    else:
        m = load_machine(args.machine)
        max_len, max_steps = resolve_truncation(m, args.max_len, args.max_steps)
        profile = complexity_profile(m, [alpha[:n] for n in range(1, len(alpha) + 1)],
                                     max_len, max_steps)
        H = [profile[alpha[:n]] for n in range(1, len(alpha) + 1)]
    ledger = randomness_ledger(alpha, parse_fraction(args.T), H)
    rows = [(r.n, r.h, format_fraction(r.t_times_n),
             "inf" if r.h == math.inf else format_fraction(r.slack_low)) for r in ledger.rows]
    print(f"c={ledger.c} d={ledger.d} horizon={ledger.horizon}"
          f"{' (c forced at horizon)' if ledger.c_at_horizon else ''}", file=sys.stderr)
    return _csv(["n", "H", "T_times_n", "slack"], rows)


def _transcript_lines(report) -> str:
    return "".join(json.dumps({"query": q, "answer": a, "length": len(q)}) + "\n"
                   for q, a in report.transcript)


def cmd_reduce(args) -> str:
    s = _bits_arg(args.input)
    proc = args.procedure
    if proc == "dom-from-omega":
        m = load_machine(args.machine)
        bits = args.omega_bits
        if bits is None:
            bits = binary_prefix(omega_approx(m).value, len(s))
        bound = parse_bound(args.bound) if args.bound else None
        report = dom_from_omega(m, _bits_arg(bits), s, bound=bound)
    elif proc == "incompressible":
        m = load_machine(args.machine)
        f = parse_bound(args.bound or "identity:0")
        bits = args.omega_bits
        if bits is None:
            bits = binary_prefix(omega_approx(m).value, f(int(s or 0)) + args.c)
        report = incompressible_from_omega(m, _bits_arg(bits), int(s or 0), f, args.c)
    elif proc == "prefixes-from-dom":
        f = parse_bound(args.bound or "log:1,0")
        tail = f.tail_bound(args.horizon)
        d0 = weight_shift(f, args.horizon, tail).d0
        g = comparison_codes(f, d0, args.horizon)
        h_seq = _rational_list(args.h_seq)
        F = build_comparison_machine(g, h_seq)
        report = prefixes_from_dom(F, g, f, d0, s)
    elif proc == "fk":
        m = load_machine(args.machine)
        report = prefixes_from_dom_via_Fk(m, parse_fraction(args.T), args.c, s)
    elif proc == "dom-from-z":
        F = load_machine(args.machine)
        T = parse_fraction(args.T)
        V = build_indexed_machine(F, T, args.d)
        width = math.ceil(len(s) / T) + args.d
        bits = args.z_bits if args.z_bits is not None else z_prefix_bits(V, T, width)
        report = dom_from_z(F, V, T, _bits_arg(bits), s, args.d)
    elif proc == "domination":
        provider = pf_provider(_bits_arg(args.alpha_bits))
        report = reduce_via_domination(_rational_list(args.b_seq), _rational_list(args.a_seq),
                                       provider, args.d1, args.c, s, args.beta_window)
    else:  # pragma: no cover - argparse restricts choices
        raise ConfigError(f"unknown procedure {proc!r}")
    return report.verdict() + "\n" + _transcript_lines(report)


def _read_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def cmd_report(args) -> str:
    doc = {"config": config_echo(args)}
    for key in ("bb", "thermo", "ledger", "sweep", "enumerate", "complexity"):
        path = getattr(args, key)
        if path is not None:
            if not Path(path).exists():
                raise ConfigError(f"missing input {path}")
            doc[key] = _read_csv(path)
    reductions = []
    for path in args.reduce or ():
        if not Path(path).exists():
            raise ConfigError(f"missing input {path}")
        lines = Path(path).read_text().splitlines()
        if not lines:
            raise ConfigError(f"empty reduction output {path}")
        reductions.append({"source": path, "verdict": lines[0], "queries": len(lines) - 1})
    if reductions:
        doc["reductions"] = reductions
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# -- argument parsing -----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aitbench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, handler, help_text, machine=True, truncation=False):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=handler)
        if machine:
            p.add_argument("--machine", required=True, help="machine description file")
        if truncation:
            p.add_argument("--max-len", type=int)
            p.add_argument("--max-steps", type=int)
        p.add_argument("--output", "-o", help="write here atomically instead of stdout")
        return p

    command("enumerate", cmd_enumerate, "halting programs in canonical order", truncation=True)

    p = command("bb", cmd_bb, "busy-beaver table")
    p.add_argument("--n-max", type=int, required=True)

    p = command("sweep", cmd_sweep, "truncated partition function over a T x L grid")
    p.add_argument("--T", required=True, help="comma-separated rationals")
    p.add_argument("--L", required=True, help="comma-separated length horizons")
    p.add_argument("--max-steps", type=int)
    p.add_argument("--precision", type=int, default=32)

    p = command("thermo", cmd_thermo, "Omega and Z, F, E, S, C", truncation=True)
    p.add_argument("--T", required=True, help="comma-separated rationals")
    p.add_argument("--precision", type=int, default=20)

    p = command("kraft", cmd_kraft, "prefix codewords for requested lengths", machine=False)
    p.add_argument("--input", help="file of whitespace-separated lengths (default stdin)")

    p = command("complexity", cmd_complexity, "machine-relative complexities", truncation=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--strings", help="comma-separated bitstrings")
    group.add_argument("--upto", type=int, help="all strings up to this length")

    p = command("ledger", cmd_ledger, "randomness slack ledger", machine=False)
    p.add_argument("--alpha-bits", required=True)
    p.add_argument("--T", required=True)
    p.add_argument("--H", help="comma-separated values for prefixes of length 1, 2, ...")
    p.add_argument("--machine", help="compute H from this machine instead of --H")
    p.add_argument("--max-len", type=int)
    p.add_argument("--max-steps", type=int)

    p = command("reduce", cmd_reduce, "run a reduction and print its transcript", machine=False)
    p.add_argument("procedure", choices=["dom-from-omega", "incompressible", "prefixes-from-dom",
                                         "fk", "dom-from-z", "domination"])
    p.add_argument("--machine")
    p.add_argument("--input", required=True, help="input bits (a number for incompressible)")
    p.add_argument("--bound", help="family:params; declared bound or order function f")
    p.add_argument("--omega-bits")
    p.add_argument("--z-bits")
    p.add_argument("--alpha-bits")
    p.add_argument("--T", default="1/2")
    p.add_argument("--c", type=int, default=0)
    p.add_argument("--d", type=int, default=0)
    p.add_argument("--d1", type=int, default=0)
    p.add_argument("--horizon", type=int, default=8)
    p.add_argument("--h-seq", default="", help="increasing rationals approximating alpha")
    p.add_argument("--a-seq", default="")
    p.add_argument("--b-seq", default="")
    p.add_argument("--beta-window")

    p = command("report", cmd_report, "merge earlier outputs into one JSON document",
                machine=False)
    for key in ("bb", "thermo", "ledger", "sweep", "enumerate", "complexity"):
        p.add_argument(f"--{key}", help=f"CSV written by the {key} command")
    p.add_argument("--reduce", action="append", help="verdict file written by reduce")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.handler(args)
        write_output(text, args.output)
    except AitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ConfigError.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
