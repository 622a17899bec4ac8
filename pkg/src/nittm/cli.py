"""Command-line interface: ``nittm <subcommand> ...``.

Programs are named either by a built-in sample (``pc-scratch``, ``pc-output``,
``count-through``, ``codex``, ``guess-check:<checker-file>``) or by a path to
a DSL file.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import coding
from .explorer import (Accept, PolicyBounds, TreeTooLarge, co_recognizes, explore,
                       expand_tree, recognizes, report, tree_to_json)
from .machine import Program, ProgramError, initial_snapshot, parse_program
from .ordinal import render_ordinal
from .policy import ChoicePolicy, PolicyError, parse_policy
from .programs import SAMPLES, emit_sample, sample
from .semantics import (AccelerationFailed, BudgetExceeded, Halted, NonHalting, RunBudget,
                        RunOutcome, Stuck, initial_tapes, outcome_name, output_bit,
                        record_to_json, run_transfinite, snapshot_to_json)
from .streams import StreamError, parse_stream, render_stream

EXIT_ACCEPT, EXIT_REJECT, EXIT_RESOURCE, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def load_program(ref: str) -> Program:
    if ref in SAMPLES or ref.startswith("guess-check:"):
        return sample(ref, load=load_program)
    try:
        with open(ref, encoding="utf-8") as fh:
            return parse_program(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read program {ref!r}: {exc.strerror}") from None


def exit_code(outcome: RunOutcome) -> int:
    if isinstance(outcome, Halted):
        return EXIT_ACCEPT if output_bit(outcome) == 1 else EXIT_REJECT
    if isinstance(outcome, (BudgetExceeded, AccelerationFailed, NonHalting)):
        return EXIT_RESOURCE
    return EXIT_USAGE


def _budget(args) -> RunBudget:
    return RunBudget(args.max_steps, args.max_limits)


def _bounds(args) -> PolicyBounds:
    if args.script_len < 0 or args.tail_len < 1:
        raise UsageError("--script-len must be >= 0 and --tail-len >= 1")
    return PolicyBounds(args.script_len, args.tail_len)


def _emit(obj) -> None:
    print(json.dumps(obj), flush=True)


def _summary(outcome: RunOutcome, certs) -> dict:
    d = {"outcome": outcome_name(outcome), "stage": render_ordinal(outcome.snapshot.stage),
         "output_bit": output_bit(outcome),
         "certificates": [{"m": c.m, "n": c.n, "shift": c.shift, "base": c.base} for c in certs]}
    if isinstance(outcome, (Stuck, AccelerationFailed)):
        d["reason"] = outcome.reason
    return d


def cmd_run(args) -> int:
    p = load_program(args.program)
    if args.policy is None:
        if not p.is_deterministic():
            raise UsageError(f"program {p.name!r} branches; pass --policy (e.g. --policy tail=1)")
        policy = ChoicePolicy()
    else:
        policy = parse_policy(args.policy)
    on_record = (lambda rec: _emit(record_to_json(rec))) if args.format == "jsonl" else None
    r = run_transfinite(p, parse_stream(args.input), policy, _budget(args),
                        keep_trace=False, on_record=on_record)
    if args.format == "summary":
        _emit(_summary(r.outcome, r.certificates))
    if isinstance(r.outcome, Stuck):
        print(f"stuck: {r.outcome.reason}", file=sys.stderr)
    return exit_code(r.outcome)


def cmd_explore(args) -> int:
    p = load_program(args.program)
    paths = explore(p, parse_stream(args.input), _bounds(args), _budget(args))
    rep = report(paths)
    _emit(rep)
    if rep["summary"]["accepted"]:
        return EXIT_ACCEPT
    if paths and all(isinstance(r.outcome, (BudgetExceeded, AccelerationFailed)) for r in paths):
        return EXIT_RESOURCE
    return EXIT_REJECT


def cmd_recognize(args, complement: bool = False) -> int:
    p = load_program(args.program)
    fn = co_recognizes if complement else recognizes
    res = fn(p, parse_stream(args.input), _bounds(args), _budget(args))
    label = "in_complement" if complement else "member"
    if isinstance(res, Accept):
        _emit({"result": "accept", label: True, "witness": res.witness.to_json(),
               "halt_stage": str(res.path.halt_stage)})
        return EXIT_ACCEPT
    _emit({"result": "no_witness_found", label: None, "explored": res.explored})
    return EXIT_REJECT


def cmd_tree(args) -> int:
    p = load_program(args.program)
    if args.depth < 0 or args.node_cap < 1:
        raise UsageError("--depth must be >= 0 and --node-cap >= 1")
    try:
        root = expand_tree(p, parse_stream(args.input), args.depth, args.node_cap)
    except TreeTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    _emit(tree_to_json(root))
    return EXIT_ACCEPT


def _read_operand(value: Optional[str]) -> str:
    if value is not None:
        return value
    text = sys.stdin.read().strip()
    if not text:
        raise UsageError("no operand given and standard input is empty")
    return text


def _parse_pairs(text: str) -> list[tuple[int, int]]:
    out = []
    for part in filter(None, text.replace(" ", "").split(";")):
        i, _, j = part.partition(",")
        try:
            out.append((int(i), int(j)))
        except ValueError:
            raise UsageError(f"bad pair {part!r}; use i,j;i,j") from None
    return out


def cmd_encode(args) -> int:
    kind = args.kind
    if kind == "pair":
        if args.i is None or args.j is None:
            raise UsageError("encode pair needs --i and --j")
        print(coding.pos_of_pair(args.i, args.j))
    elif kind == "relation":
        rel = coding.RelationCode.of(_parse_pairs(_read_operand(args.pairs)))
        if args.layout == "matrix":
            print(render_stream(coding.encode_relation_matrix(rel, args.field)))
        else:
            print(render_stream(coding.encode_relation(rel)))
    else:
        if args.program is None:
            raise UsageError(f"encode {kind} needs --program")
        p = load_program(args.program)
        reg = coding.Registry([p])
        inp = parse_stream(args.input)
        if kind == "snapshot":
            print(coding.encode_snapshot(initial_snapshot(p, initial_tapes(inp)), reg))
        else:
            policy = parse_policy(args.policy) if args.policy else ChoicePolicy()
            r = run_transfinite(p, inp, policy, _budget(args))
            snaps = [rec.snapshot for rec in r.trace[:args.length]]
            print(render_stream(coding.encode_run(snaps, reg)))
    return EXIT_ACCEPT


def cmd_decode(args) -> int:
    kind = args.kind
    if kind == "pair":
        i, j = coding.pair_of_pos(int(_read_operand(args.code)))
        print(f"({i},{j})")
    elif kind == "relation":
        s = parse_stream(_read_operand(args.stream))
        print(coding.decode_relation(s, args.field))
    else:
        if args.program is None:
            raise UsageError(f"decode {kind} needs --program")
        reg = coding.Registry([load_program(args.program)])
        if kind == "snapshot":
            try:
                code = int(_read_operand(args.code))
            except ValueError:
                raise coding.MalformedCode("snapshot codes are decimal naturals") from None
            _emit(snapshot_to_json(coding.decode_snapshot(code, reg)))
        else:
            for snap in coding.decode_run(parse_stream(_read_operand(args.stream)), reg):
                _emit(snapshot_to_json(snap))
    return EXIT_ACCEPT


def cmd_samples(args) -> int:
    if args.action == "list":
        for name in SAMPLES:
            print(name)
        print("guess-check:<checker-file>")
        return EXIT_ACCEPT
    if not args.name:
        raise UsageError("samples emit needs a sample name")
    try:
        sys.stdout.write(emit_sample(args.name, load_program))
    except KeyError:
        raise UsageError(f"unknown sample {args.name!r}") from None
    return EXIT_ACCEPT


def _add_budget(sp, policy_bounds=False):
    sp.add_argument("--max-steps", type=int, default=100_000,
                    help="successor steps allowed between limits")
    sp.add_argument("--max-limits", type=int, default=4, help="limit jumps allowed")
    if policy_bounds:
        sp.add_argument("--script-len", type=int, default=4)
        sp.add_argument("--tail-len", type=int, default=3)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="nittm", description="Nondeterministic infinite time Turing machines")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("run", help="run one computation sequence")
    sp.add_argument("program")
    sp.add_argument("--input", default="prefix=,period=0")
    sp.add_argument("--policy")
    sp.add_argument("--format", choices=("jsonl", "summary"), default="jsonl")
    _add_budget(sp)
    sp.set_defaults(func=cmd_run)

    for name, func in (("explore", cmd_explore), ("recognize", cmd_recognize),
                       ("co-recognize", lambda a: cmd_recognize(a, complement=True))):
        sp = sub.add_parser(name)
        sp.add_argument("program")
        sp.add_argument("--input", default="prefix=,period=0")
        _add_budget(sp, policy_bounds=True)
        sp.set_defaults(func=func)

    sp = sub.add_parser("tree", help="finite levels of the computation tree")
    sp.add_argument("program")
    sp.add_argument("--input", default="prefix=,period=0")
    sp.add_argument("--depth", type=int, default=10)
    sp.add_argument("--node-cap", type=int, default=2 ** 20)
    sp.set_defaults(func=cmd_tree)

    sp = sub.add_parser("encode")
    sp.add_argument("kind", choices=("pair", "relation", "snapshot", "run"))
    sp.add_argument("--i", type=int)
    sp.add_argument("--j", type=int)
    sp.add_argument("--pairs", help="relation as i,j;i,j;... (default: stdin)")
    sp.add_argument("--layout", choices=("pairs", "matrix"), default="pairs")
    sp.add_argument("--field", type=int, default=8)
    sp.add_argument("--program")
    sp.add_argument("--input", default="prefix=,period=0")
    sp.add_argument("--policy")
    sp.add_argument("--length", type=int, default=4, help="trace snapshots to encode")
    _add_budget(sp)
    sp.set_defaults(func=cmd_encode)

    sp = sub.add_parser("decode")
    sp.add_argument("kind", choices=("pair", "relation", "snapshot", "run"))
    sp.add_argument("--code", help="decimal code (default: stdin)")
    sp.add_argument("--stream", help="stream-spec (default: stdin)")
    sp.add_argument("--field", type=int, default=8)
    sp.add_argument("--program")
    sp.set_defaults(func=cmd_decode)

    sp = sub.add_parser("samples")
    sp.add_argument("action", choices=("list", "emit"))
    sp.add_argument("name", nargs="?")
    sp.set_defaults(func=cmd_samples)
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if getattr(args, "max_steps", 1) < 1 or getattr(args, "max_limits", 1) < 1:
            raise UsageError("budgets must be positive")
        return args.func(args)
    except (UsageError, ProgramError, StreamError, PolicyError, coding.CodingError,
            ValueError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
