"""Command-line front door.

Subcommands: parse, check, run, trace, graph, outcomes. Exit codes are a
total, disjoint contract: 0 success, 1 parse error, 2 type error, 3 stuck,
4 budget exhausted or graph truncated.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import env as envmod
from .env import Env, render_store
from .explorer import (
    DEFAULT_MAX_DEPTH, DEFAULT_MAX_STATES, DEFAULT_MAX_STEPS, BudgetExceeded,
    Stuck, Terminated, explore, outcomes, run, to_dot, to_json_trace,
)
from .parser import ParseError, parse_program
from .semantics import Configuration
from .syntax import pretty, value_text
from .typesys import TypeCheckError, check_program, render_derivation

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_TYPE = 2
EXIT_STUCK = 3
EXIT_BUDGET = 4


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="whilelang",
        description="Parse, type-check, run, and explore While programs.")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, runner: bool = False,
               graphish: bool = False) -> None:
        p.add_argument("input", help="program file")
        p.add_argument("--out", help="write output to this file")
        if runner:
            p.add_argument("--schedule", choices=("first", "random"),
                           default="first")
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS)
            p.add_argument("--initial-store",
                           help="file holding a store rendering like ({a=3, b=5})")
            p.add_argument("--checked", action="store_true",
                           help="type-check before running")
        if graphish:
            p.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)
            p.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH)
            p.add_argument("--initial-store",
                           help="file holding a store rendering like ({a=3, b=5})")
            p.add_argument("--checked", action="store_true",
                           help="type-check before exploring")

    common(sub.add_parser("parse", help="parse and pretty-print"))
    check = sub.add_parser("check", help="type-check")
    common(check)
    check.add_argument("--emit-derivation", action="store_true",
                       help="write the full derivation tree")
    common(sub.add_parser("run", help="reduce under one schedule"), runner=True)
    common(sub.add_parser("trace", help="run and write a JSON-lines trace"),
           runner=True)
    common(sub.add_parser("graph", help="explore all interleavings, write DOT"),
           graphish=True)
    common(sub.add_parser("outcomes", help="explore and list final results"),
           graphish=True)
    return top


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_program(path: str):
    return parse_program(Path(path).read_text(encoding="utf-8"))


def _initial_configuration(args, stmt) -> Configuration:
    store = Env()
    if getattr(args, "initial_store", None):
        store = envmod.parse_store(
            Path(args.initial_store).read_text(encoding="utf-8"))
    return Configuration(store, Env(), stmt)


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        stmt = _load_program(args.input)
    except ParseError as err:
        print(err, file=sys.stderr)
        return EXIT_PARSE

    if getattr(args, "checked", False) or args.command == "check":
        try:
            judgment = check_program(stmt)
        except TypeCheckError as err:
            print(err, file=sys.stderr)
            return EXIT_TYPE
    if args.command == "parse":
        _emit(pretty(stmt) + "\n", args.out)
        return EXIT_OK
    if args.command == "check":
        if args.emit_derivation:
            _emit(render_derivation(judgment), args.out)
        else:
            _emit(f"ok: {judgment.type}\n", args.out)
        return EXIT_OK

    c0 = _initial_configuration(args, stmt)
    if args.command in ("run", "trace"):
        trace = run(c0, schedule=args.schedule, seed=args.seed,
                    max_steps=args.max_steps)
        if args.command == "trace":
            _emit(to_json_trace(trace), args.out)
        match trace.status:
            case Terminated(value):
                if args.command == "run":
                    final = trace.configurations()[-1]
                    _emit(f"{value_text(value)} {render_store(final.store)}\n",
                          args.out)
                return EXIT_OK
            case Stuck(info):
                print(f"stuck: {info.reason}", file=sys.stderr)
                return EXIT_STUCK
            case BudgetExceeded():
                print(f"budget exceeded after {len(trace.steps)} steps",
                      file=sys.stderr)
                return EXIT_BUDGET

    graph = explore(c0, max_states=args.max_states, max_depth=args.max_depth)
    if args.command == "graph":
        _emit(to_dot(graph), args.out)
        return EXIT_BUDGET if graph.truncated else EXIT_OK
    if args.command == "outcomes":
        summary = outcomes(graph)
        lines = [f"terminal: {value_text(v)} {store}"
                 for v, store in sorted(summary.terminals,
                                        key=lambda p: (p[1], value_text(p[0])))]
        lines += sorted(f"stuck: {info.reason}" for info in summary.stuck)
        lines.append(f"complete: {'true' if summary.complete else 'false'}")
        _emit("\n".join(lines) + "\n", args.out)
        return EXIT_BUDGET if graph.truncated else EXIT_OK
    raise AssertionError(args.command)


if __name__ == "__main__":
    sys.exit(main())
