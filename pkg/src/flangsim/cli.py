"""Command-line simulator: ``flangsim run program.gpfpl < trace.txt > out.txt``.

Exit status: 0 success, 1 program parse error, 2 runtime error,
3 I/O error.  Standard output carries only packet and ALARM lines;
diagnostics, the optional step trace and the final-state summary go to
standard error.
"""

from __future__ import annotations

import argparse
import sys

from . import ast as A
from .errors import FlangRuntimeError, ParseError, ProgramError
from .machine import init_machine
from .packet_io import GateMode, format_alarm_line, format_packet_line, gated_packets
from .parser import parse_program
from .printer import format_command, format_expression

EXIT_OK, EXIT_PARSE, EXIT_RUNTIME, EXIT_IO = 0, 1, 2, 3


def _positive(text: str) -> int:
    n = int(text)
    if n <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flangsim",
                                     description="Simulate FLang packet filters.")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="filter a packet trace read on stdin")
    run.add_argument("program", help="FLang program file (.gpfpl)")
    run.add_argument("--mode", choices=[m.value for m in GateMode],
                     default=GateMode.WHITELIST.value,
                     help="handling of undecodable input lines (default: whitelist)")
    run.add_argument("--trace", action="store_true", help="log every small step on stderr")
    run.add_argument("--max-steps", type=_positive, metavar="N",
                     help="abort after N small steps")
    return parser


def _summarize(item) -> str:
    match item:
        case A.Seq():
            return "seq"
        case A.Cond(guard, _):
            return f"cond ({format_expression(guard)})"
        case A.Iter(count, _):
            return f"iter ({format_expression(count)})"
        case A.NewInterrupt(at, _, _):
            return f"newInterrupt ({format_expression(at)}, ...)"
        case A.Step(inst, event, _):
            return f"step #{inst} : '{event.name}"
        case A.Nop() | A.Accept() | A.Drop() | A.Send() | A.Alarm() | A.Set() | A.NewAutomaton():
            return format_command(item)
    return f"repeat x{item.remaining}"


def run_cli(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    """Entry point; the streams default to the process's standard streams."""
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_IO

    try:
        with open(args.program, encoding="utf-8") as fh:
            src = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        print(f"flangsim: cannot read {args.program}: {exc}", file=stderr)
        return EXIT_IO
    try:
        program = parse_program(src)
    except (ParseError, ProgramError) as exc:
        print(f"flangsim: {args.program}:{exc}", file=stderr)
        return EXIT_PARSE

    def write(line: str):
        stdout.write(line + "\n")

    def tracer(m, item):
        frame = m.current
        loc = getattr(item, "loc", None)
        where = f"{loc[0]}:{loc[1]}" if loc else "-"
        print(f"[t={m.clock} {frame.kind.value} {where}] {_summarize(item)}", file=stderr)

    packets = gated_packets(stdin, GateMode(args.mode), write)
    try:
        m = init_machine(
            program, packets, keep=False, max_steps=args.max_steps,
            tracer=tracer if args.trace else None,
            on_output=lambda p: write(format_packet_line(p.time, p.port, p.fields)),
            on_alarm=lambda a: write(format_alarm_line(a.time, a.message)))
        m.run()
    except FlangRuntimeError as exc:
        print(f"flangsim: runtime error: {exc.describe()}", file=stderr)
        return EXIT_RUNTIME
    except (OSError, UnicodeError) as exc:
        print(f"flangsim: I/O error: {exc}", file=stderr)
        return EXIT_IO
    finally:
        try:
            stdout.flush()
        except OSError:
            pass
    print("final configuration:", file=stderr)
    print(m.describe(), file=stderr)
    return EXIT_OK


def main():
    # undecodable bytes must survive black-list forwarding unchanged
    for stream in (sys.stdin, sys.stdout):
        if hasattr(stream, "reconfigure"):
            stream.reconfigure(errors="surrogateescape")
    sys.exit(run_cli())
