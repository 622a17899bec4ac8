"""Nondeterministic ITTM programs, the rule DSL, and snapshots.

A program is a transition *relation*: one (state, read) may fire any number
of instructions.  The machine has three tapes (input, scratch, output)
sharing a single head; the read under the head is a bit triple.

DSL::

    program <name>
    states start=<id> limit=<id> halt=<id> [others: <id> ...]
    rule <state> <i><s><o> -> <wi><ws><wo> <L|R> <state>

Read symbols are ``0``, ``1`` or ``*`` (any); write symbols ``0``, ``1``
or ``-`` (keep).  ``#`` starts a comment.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, replace
from functools import cached_property

from .ordinal import ZERO, Ordinal
from .streams import TapeTriple, write_bit


class StateKind(enum.Enum):
    START = "start"
    LIMIT = "limit"
    HALT = "halt"
    ORDINARY = "ordinary"


class Move(enum.Enum):
    LEFT = "L"
    RIGHT = "R"


@dataclass(frozen=True)
class ProgramState:
    id: str
    kind: StateKind


@dataclass(frozen=True)
class Instruction:
    write: str  # three of 0/1/-
    move: Move
    next: str

    def __str__(self):
        return f"{self.write} {self.move.value} {self.next}"


@dataclass(frozen=True)
class Rule:
    state: str
    pattern: str  # three of 0/1/*
    instruction: Instruction
    line: int = 0  # file order

    def matches(self, read: tuple[int, int, int]) -> bool:
        return all(p == "*" or int(p) == r for p, r in zip(self.pattern, read))


class ProgramError(ValueError):
    pass


class ParseError(ProgramError):
    def __init__(self, kind: str, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.kind = kind
        self.line = line
        self.column = column


class NoSuccessor(ProgramError):
    pass


@dataclass(frozen=True, eq=False)
class Program:
    name: str
    start: str
    limit: str
    halt: str
    others: tuple[str, ...]
    rules: tuple[Rule, ...]

    def __eq__(self, other):
        if not isinstance(other, Program):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    @cached_property
    def _key(self):
        return (self.name, self.start, self.limit, self.halt, self.others,
                tuple((r.state, r.pattern, r.instruction) for r in self.rules))

    @cached_property
    def state_ids(self) -> tuple[str, ...]:
        return (self.start, self.limit, self.halt) + self.others

    @cached_property
    def states(self) -> frozenset[ProgramState]:
        kinds = {self.start: StateKind.START, self.limit: StateKind.LIMIT, self.halt: StateKind.HALT}
        return frozenset(ProgramState(s, kinds.get(s, StateKind.ORDINARY)) for s in self.state_ids)

    @cached_property
    def relation(self) -> dict[tuple[str, str], list[Instruction]]:
        """(state, pattern) -> ordered alternatives, in file order."""
        out: dict[tuple[str, str], list[Instruction]] = {}
        for r in self.rules:
            out.setdefault((r.state, r.pattern), []).append(r.instruction)
        return out

    @cached_property
    def _by_state(self) -> dict[str, list[Rule]]:
        out: dict[str, list[Rule]] = {}
        # specific patterns before wildcards, then file order
        for r in sorted(self.rules, key=lambda r: (r.pattern.count("*"), r.line)):
            out.setdefault(r.state, []).append(r)
        return out

    @cached_property
    def _table(self) -> dict:
        return {}

    def lookup(self, state: str, read: tuple[int, int, int]) -> tuple[Instruction, ...]:
        key = (state, read)
        hit = self._table.get(key)
        if hit is None:
            hit = tuple(r.instruction for r in self._by_state.get(state, ()) if r.matches(read))
            self._table[key] = hit
        return hit

    def has_rules(self, state: str) -> bool:
        return state in self._by_state

    @cached_property
    def width(self) -> int:
        """Largest number of alternatives at any (state, read)."""
        reads = list(itertools.product((0, 1), repeat=3))
        return max([1] + [len(self.lookup(s, r)) for s in self._by_state for r in reads])

    def is_deterministic(self) -> bool:
        return self.width <= 1


@dataclass(frozen=True)
class Snapshot:
    program: str
    tapes: TapeTriple
    head: int
    state: str
    stage: Ordinal = ZERO

    def read(self) -> tuple[int, int, int]:
        return self.tapes.read(self.head)


def initial_snapshot(p: Program, tapes: TapeTriple) -> Snapshot:
    return Snapshot(p.name, tapes, 1, p.start, ZERO)


def successors(p: Program, snap: Snapshot) -> list[Instruction]:
    if snap.state == p.halt:
        raise NoSuccessor("the halt state has no successors")
    return list(p.lookup(snap.state, snap.read()))


def apply_instruction(snap: Snapshot, instr: Instruction) -> Snapshot:
    """One successor step.  Raises ReadOnlyStream when writing a query tape."""
    tapes = snap.tapes
    for i, w in enumerate(instr.write):
        if w != "-":
            tapes = tapes.replace(i, write_bit(tapes[i], snap.head, int(w)))
    if instr.move is Move.RIGHT:
        head = snap.head + 1
    else:
        head = max(1, snap.head - 1)
    return Snapshot(snap.program, tapes, head, instr.next, snap.stage + 1)


def is_halting(p: Program, snap: Snapshot) -> bool:
    return snap.state == p.halt


# -- DSL -------------------------------------------------------------------

def _tokens(line: str):
    """Yield (column, token) pairs, ignoring comments."""
    line = line.split("#", 1)[0]
    col = 0
    for tok in line.split():
        col = line.index(tok, col)
        yield col + 1, tok
        col += len(tok)


def parse_program(text: str) -> Program:
    name = None
    decl = None
    rules: list[Rule] = []
    rule_lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = list(_tokens(raw))
        if not toks:
            continue
        col, head = toks[0]
        if head == "program":
            if len(toks) != 2:
                raise ParseError("syntax", "expected 'program <name>'", lineno, col)
            if name is not None:
                raise ParseError("syntax", "duplicate program header", lineno, col)
            name = toks[1][1]
        elif head == "states":
            if decl is not None:
                raise ParseError("syntax", "duplicate states declaration", lineno, col)
            decl = _parse_states(toks[1:], lineno)
        elif head == "rule":
            rule_lines.append((lineno, toks))
        else:
            raise ParseError("syntax", f"unknown directive {head!r}", lineno, col)
    if name is None:
        raise ParseError("missing-program", "missing 'program <name>' header", 1)
    if decl is None:
        raise ParseError("missing-states", "missing 'states' declaration", 1)
    start, limit, halt, others = decl
    known = {start, limit, halt, *others}
    for lineno, toks in rule_lines:
        rules.append(_parse_rule(toks, lineno, known, limit, halt))
    return Program(name, start, limit, halt, tuple(others), tuple(rules))


def _parse_states(toks, lineno):
    roles = {}
    others = []
    in_others = False
    for col, tok in toks:
        if tok == "others:":
            in_others = True
            continue
        if in_others:
            others.append((col, tok))
            continue
        key, eq, val = tok.partition("=")
        if not eq or key not in ("start", "limit", "halt") or not val:
            raise ParseError("syntax", f"bad state declaration {tok!r}", lineno, col)
        if key in roles:
            raise ParseError("syntax", f"duplicate {key}= declaration", lineno, col)
        roles[key] = val
    for key in ("start", "limit", "halt"):
        if key not in roles:
            raise ParseError(f"missing-{key}", f"missing {key}= state", lineno)
    seen = set(roles.values())
    if len(seen) != 3:
        raise ParseError("syntax", "start, limit and halt must be distinct states", lineno)
    for col, s in others:
        if s in seen:
            raise ParseError("syntax", f"state {s!r} declared twice", lineno, col)
        seen.add(s)
    return roles["start"], roles["limit"], roles["halt"], [s for _, s in others]


def _parse_rule(toks, lineno, known, limit, halt) -> Rule:
    if len(toks) != 7 or toks[3][1] != "->":
        raise ParseError("syntax", "expected 'rule <state> <read> -> <write> <L|R> <state>'",
                         lineno, toks[0][0])
    (_, _), (cs, state), (cp, pat), _, (cw, write), (cm, move), (cn, nxt) = toks
    if state not in known:
        raise ParseError("unknown-state", f"unknown state {state!r}", lineno, cs)
    if state == halt:
        raise ParseError("rule-from-halt", "rules may not fire from the halt state", lineno, cs)
    if len(pat) != 3 or set(pat) - set("01*"):
        raise ParseError("syntax", f"bad read pattern {pat!r}", lineno, cp)
    if len(write) != 3 or set(write) - set("01-"):
        raise ParseError("syntax", f"bad write pattern {write!r}", lineno, cw)
    if move not in ("L", "R"):
        raise ParseError("syntax", f"bad move {move!r}", lineno, cm)
    if nxt not in known:
        raise ParseError("unknown-state", f"unknown state {nxt!r}", lineno, cn)
    if nxt == limit:
        raise ParseError("targets-limit", "the limit state is entered only at limit stages",
                         lineno, cn)
    return Rule(state, pat, Instruction(write, Move(move), nxt), lineno)


def render_program(p: Program) -> str:
    head = f"states start={p.start} limit={p.limit} halt={p.halt}"
    if p.others:
        head += " others: " + " ".join(p.others)
    lines = [f"program {p.name}", head]
    for r in p.rules:
        lines.append(f"rule {r.state} {r.pattern} -> {r.instruction}")
    return "\n".join(lines) + "\n"


def build_program(name, start, limit, halt, others, rules) -> Program:
    """Assemble a program from ``(state, pattern, write, move, next)`` tuples, validated like parsed text."""
    p = Program(name, start, limit, halt, tuple(others), tuple(
        Rule(s, pat, Instruction(w, Move(m), n), i) for i, (s, pat, w, m, n) in enumerate(rules, 1)))
    validate(p)
    return p


def validate(p: Program) -> None:
    known = set(p.state_ids)
    if len(known) != len(p.state_ids):
        raise ProgramError("duplicate state ids")
    for r in p.rules:
        if r.state not in known or r.instruction.next not in known:
            raise ProgramError(f"rule {r} names an unknown state")
        if r.state == p.halt:
            raise ProgramError("rules may not fire from the halt state")
        if r.instruction.next == p.limit:
            raise ProgramError("instructions may not target the limit state")


def with_name(p: Program, name: str) -> Program:
    return replace(p, name=name)


__all__ = [
    "Instruction", "Move", "NoSuccessor", "ParseError", "Program", "ProgramError",
    "ProgramState", "Rule", "Snapshot", "StateKind", "apply_instruction", "build_program",
    "initial_snapshot", "is_halting", "parse_program", "render_program", "successors",
    "validate", "with_name",
]
