"""Built-in machines: p_c, guess-and-check, count-through and the co-dex checker.

The deterministic checkers are generated by :class:`_Flow`, which compiles a
small control description into rules.  Every generated state knows the
head position, so walking to a cell is a fixed chain of moves and no tape
markers are needed.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Callable, Optional

from .coding import matrix_cell, pos_of_pair
from .machine import Program, ProgramError, build_program, render_program, validate
from .machine import Snapshot
from .ordinal import ZERO
from .policy import ChoicePolicy
from .semantics import RunBudget, RunResult, run_transfinite
from .streams import BitStream, TapeTriple, ZEROS, materialize

HALT = ("halt",)


class InvalidChecker(ProgramError):
    pass


def make_pc(target_tape: str = "scratch") -> Program:
    """Branch on every step between writing 0 and 1, moving right; halt at the limit."""
    if target_tape not in ("scratch", "output"):
        raise ValueError("p_c writes to the scratch or the output tape")
    w0, w1 = ("-0-", "-1-") if target_tape == "scratch" else ("--0", "--1")
    return build_program(f"pc-{target_tape}", "s", "L", "halt", (), [
        ("s", "***", w0, "R", "s"),
        ("s", "***", w1, "R", "s"),
        ("L", "***", "---", "L", "halt"),
    ])


def check_deterministic(p: Program) -> None:
    if not p.is_deterministic():
        raise InvalidChecker(f"checker {p.name!r} is not deterministic")


def make_guess_and_check(checker: Program, name: Optional[str] = None) -> Program:
    """p_c guesses a real on scratch for w steps; at the limit the checker takes over.

    The limit state answers with the checker's own first instructions, so the
    checker starts at cell 1 exactly as if run on (input, guess).
    """
    validate(checker)
    check_deterministic(checker)
    ren = {s: f"c_{s}" for s in checker.state_ids}
    ren[checker.halt] = "halt"
    rules = [("s", "***", "-0-", "R", "s"), ("s", "***", "-1-", "R", "s")]
    for r in checker.rules:
        i = r.instruction
        rules.append((ren[r.state], r.pattern, i.write, i.move.value, ren[i.next]))
        if r.state == checker.start:
            rules.append(("L", r.pattern, i.write, i.move.value, ren[i.next]))
    others = [ren[s] for s in checker.state_ids if s != checker.halt]
    return build_program(name or f"guess-check-{checker.name}", "s", "L", "halt", others, rules)


# -- position-aware compiler ---------------------------------------------------

class _Flow:
    """Compile ``step(node, pos)`` into a deterministic program.

    ``step`` returns either ``("goto", cell, node)`` or ``("do", branches)``
    with branches ``(pattern, write, move, next_node)``.  ``("finish", b)``
    is a built-in node: walk to cell 1, write ``b`` on the output tape, halt.
    """

    def __init__(self, name: str, step: Callable, start, max_pos: int):
        self.name = name
        self.step = step
        self.max_pos = max_pos
        self.ids: dict = {}
        self.rules: list = []
        self.start = start

    def _act(self, node, pos):
        if node[0] == "finish":
            return ("goto", 1, ("_fin", node[1]))
        if node[0] == "_fin":
            return ("do", [("***", f"--{node[1]}", "L", HALT)])
        return self.step(node, pos)

    def _resolve(self, node, pos):
        while True:
            if node[0] == "goto":
                if node[1] == pos:
                    node = node[2]
                    continue
                return node
            act = self._act(node, pos)
            if act[0] == "goto":
                node = act
                continue
            return node

    def _id(self, key, todo) -> str:
        sid = self.ids.get(key)
        if sid is None:
            sid = "start" if not self.ids else f"q{len(self.ids)}"
            self.ids[key] = sid
            todo.append(key)
        return sid

    def compile(self) -> Program:
        todo: list = []
        self._id((self._resolve(self.start, 1), 1), todo)
        while todo:
            node, pos = todo.pop()
            if pos > self.max_pos:
                raise ProgramError(f"{self.name}: walked past cell {self.max_pos}")
            sid = self.ids[(node, pos)]
            if node[0] == "goto":
                move = "R" if node[1] > pos else "L"
                npos = pos + 1 if move == "R" else pos - 1
                nxt = self._id((self._resolve(node, npos), npos), todo)
                self.rules.append((sid, "***", "---", move, nxt))
                continue
            _, branches = self._act(node, pos)
            for pattern, write, move, nxt_node in branches:
                if nxt_node == HALT:
                    self.rules.append((sid, pattern, write, move, "halt"))
                    continue
                npos = pos + 1 if move == "R" else max(1, pos - 1)
                nxt = self._id((self._resolve(nxt_node, npos), npos), todo)
                self.rules.append((sid, pattern, write, move, nxt))
        others = [s for s in self.ids.values() if s != "start"]
        p = build_program(self.name, "start", "limit", "halt", others, self.rules)
        check_deterministic(p)
        return p


def _read(tape: str, bit: int) -> str:
    k = ("input", "scratch", "output").index(tape)
    return "".join(str(bit) if t == k else "*" for t in range(3))


def _write(tape: str, bit: int) -> str:
    k = ("input", "scratch", "output").index(tape)
    return "".join(str(bit) if t == k else "-" for t in range(3))


# -- simple checkers -------------------------------------------------------------

def make_constant_checker(bit: int) -> Program:
    """Write ``bit`` to output cell 1 and halt."""
    return build_program(f"const{bit}", "start", "limit", "halt", (), [
        ("start", "***", f"--{bit}", "L", "halt"),
    ])


def make_word_checker(word: str, tape: str = "scratch") -> Program:
    """Output 1 iff cells 1..len(word) of ``tape`` spell ``word``."""
    if set(word) - {"0", "1"}:
        raise ValueError("word must be binary")

    def step(node, pos):
        k = node[1]
        if k == len(word):
            return ("goto", pos, ("finish", 1))
        if pos != k + 1:
            return ("goto", k + 1, node)
        b = int(word[k])
        return ("do", [(_read(tape, b), "---", "R", ("cmp", k + 1)),
                       (_read(tape, 1 - b), "---", "R", ("finish", 0))])

    return _Flow(f"word-{word or 'empty'}", step, ("cmp", 0), len(word) + 2).compile()


def make_cell_match_checker() -> Program:
    """Output 1 iff scratch cell 1 equals input cell 1."""
    def step(node, pos):
        return ("do", [("00*", "---", "L", ("finish", 1)), ("11*", "---", "L", ("finish", 1)),
                       ("01*", "---", "L", ("finish", 0)), ("10*", "---", "L", ("finish", 0))])
    return _Flow("cell-match", step, ("eq",), 2).compile()


def make_cell_mismatch_checker() -> Program:
    """Negation of :func:`make_cell_match_checker`."""
    def step(node, pos):
        return ("do", [("00*", "---", "L", ("finish", 0)), ("11*", "---", "L", ("finish", 0)),
                       ("01*", "---", "L", ("finish", 1)), ("10*", "---", "L", ("finish", 1))])
    return _Flow("cell-mismatch", step, ("eq",), 2).compile()


# -- co-dex -----------------------------------------------------------------------

def _log6(pos: int) -> Optional[int]:
    n = 0
    while pos % 6 == 0:
        pos //= 6
        n += 1
    return n if pos == 1 else None


@lru_cache(maxsize=8)
def make_codex_checker(frontier: int = 2000) -> Program:
    """Check that scratch is selected by the co-dex, up to cell ``frontier``.

    The first 1 must sit at ``6**n`` for some ``n >= 1``; after it the 1s
    must be exactly the cells ``6**(k*n)``.
    """
    def step(node, pos):
        if node[0] == "seek":
            if pos > frontier:
                return ("goto", pos, ("finish", 0))
            n = _log6(pos)
            hit = ("chk", n) if n else ("finish", 0)
            return ("do", [("*0*", "---", "R", ("seek",)), ("*1*", "---", "R", hit)])
        n = node[1]
        if pos > frontier:
            return ("goto", pos, ("finish", 1))
        e = _log6(pos)
        want = 1 if e and e % n == 0 else 0
        return ("do", [(_read("scratch", want), "---", "R", node),
                       (_read("scratch", 1 - want), "---", "R", ("finish", 0))])

    return _Flow(f"codex-{frontier}", step, ("seek",), frontier + 2).compile()


# -- count-through --------------------------------------------------------------------

@lru_cache(maxsize=8)
def make_count_through(field_bound: int = 8, layout: str = "matrix") -> Program:
    """Decide whether a finite relation code is a strict linear (hence well-) order.

    The relation is copied to scratch.  Each round guesses a least element,
    revising the guess whenever a smaller one turns up and marking each
    revision in the odd cells after the matrix; the guess is then verified
    against every remaining element and erased.  Output 1 once nothing
    remains, 0 on the first violation.

    ``layout="matrix"`` reads pair (i, j) at :func:`~nittm.coding.matrix_cell`;
    ``layout="pairs"`` reads it at ``2**i * 3**j`` and is practical for small
    field bounds only.  Every round costs the same number of steps, so the
    halting stage grows with the field size.
    """
    F = field_bound
    if F < 1:
        raise ValueError("field bound must be >= 1")
    if layout not in ("matrix", "pairs"):
        raise ValueError(f"unknown layout {layout!r}")
    last = matrix_cell(F - 1, F - 1, F)
    coord = {matrix_cell(i, j, F): (i, j) for i in range(F) for j in range(F)}
    marks = last + 1 if (last + 1) % 2 else last + 2
    touching = {e: sorted({matrix_cell(e, x, F) for x in range(F) if x != e}
                          | {matrix_cell(x, e, F) for x in range(F) if x != e}) for e in range(F)}
    column = {e: [matrix_cell(i, e, F) for i in range(F)] for e in range(F)}
    pairs = sorted(((i, j) for i in range(F) for j in range(F)), key=lambda p: pos_of_pair(*p))
    R = "R"
    keep = "---"

    def step(node, pos):
        kind = node[0]
        if kind == "copy":
            c = node[1]
            if c > last:
                return ("goto", pos, ("men", 0, 0, 0))
            if pos != c:
                return ("goto", c, node)
            i, j = coord[c]
            nxt = ("copy", c + 1)
            if i == j:
                return ("do", [("0**", keep, R, nxt), ("1**", keep, R, ("finish", 0))])
            return ("do", [("0**", keep, R, nxt), ("1**", "-1-", R, nxt)])
        if kind == "dec":
            k = node[1]
            if k == len(pairs):
                return ("goto", pos, ("men", 0, 0, 0))
            p = pos_of_pair(*pairs[k])
            if pos != p:
                return ("goto", p, node)
            return ("do", [("0**", keep, R, ("dec", k + 1)), ("1**", keep, R, ("put", k))])
        if kind == "put":
            k = node[1]
            i, j = pairs[k]
            if i == j:
                return ("goto", pos, ("finish", 0))
            c = matrix_cell(i, j, F)
            if pos != c:
                return ("goto", c, node)
            return ("do", [("***", "-1-", R, ("dec", k + 1))])
        if kind == "men":
            _, e, k, m = node
            if e == F:
                return ("goto", pos, ("guess", 2, None, 0))
            if k == len(touching[e]):
                return ("goto", pos, ("flag", e, 0, m))
            c = touching[e][k]
            if pos != c:
                return ("goto", c, node)
            return ("do", [("*0*", keep, R, ("men", e, k + 1, m)),
                           ("*1*", keep, R, ("men", e, k + 1, 1))])
        if kind == "flag":
            _, e, k, m = node
            if k == F:
                return ("goto", pos, ("men", e + 1, 0, 0))
            c = column[e][k]
            if pos != c:
                return ("goto", c, node)
            return ("do", [("***", "--1" if m else keep, R, ("flag", e, k + 1, m))])
        if kind == "guess":
            _, c, g, k = node
            if k >= F:
                return ("goto", pos, ("finish", 0))
            if c > last:
                return ("goto", pos, ("marks", 0, g, k))
            if pos != c:
                return ("goto", c, node)
            i, j = coord[c]
            nxt = ("guess", c + 1, g, k)
            if i == 0:
                if g is None:
                    found = ("guess", c + 1, j, k)
                    empty = ("finish", 1) if j == F - 1 else nxt
                    return ("do", [("**1", keep, R, found), ("**0", keep, R, empty)])
                return ("do", [("***", keep, R, nxt)])
            if j == g and i != g:
                return ("do", [("*1*", keep, R, ("guess", c + 1, i, k + 1)), ("*0*", keep, R, nxt)])
            return ("do", [("***", keep, R, nxt)])
        if kind == "marks":
            _, t, g, k = node
            if t == F:
                return ("goto", pos, ("ver", 2, g))
            c = marks + 2 * t
            if pos != c:
                return ("goto", c, node)
            return ("do", [("***", _write("scratch", 1 if t < k else 0), R, ("marks", t + 1, g, k))])
        if kind == "ver":
            _, c, g = node
            if c > last:
                return ("goto", pos, ("guess", 2, None, 0))
            if pos != c:
                return ("goto", c, node)
            i, j = coord[c]
            nxt = ("ver", c + 1, g)
            if i == g and j != g:
                # a remaining x needs (g, x); every (g, x) is erased either way
                return ("do", [("*01", keep, R, ("finish", 0)),
                               ("*00", keep, R, nxt),
                               ("*1*", "-0-", R, nxt)])
            if j == g and i != g:
                return ("do", [("*1*", keep, R, ("finish", 0)), ("*0*", "--0", R, nxt)])
            if i == g:
                return ("do", [("***", "--0", R, nxt)])
            return ("do", [("***", keep, R, nxt)])
        raise AssertionError(node)

    start = ("copy", 2) if layout == "matrix" else ("dec", 0)
    max_pos = max(marks + 2 * F, pos_of_pair(*pairs[-1]) if layout == "pairs" else 0) + 2
    name = f"count-through-{F}" + ("" if layout == "matrix" else "-pairs")
    return _Flow(name, step, start, max_pos).compile()


# -- running helpers ------------------------------------------------------------------

def run_checker(p: Program, input: BitStream = ZEROS, scratch: BitStream = ZEROS,
                budget: RunBudget = RunBudget(), keep_trace: bool = False) -> RunResult:
    """Run a deterministic checker on given input and scratch contents."""
    snap = Snapshot(p.name, TapeTriple(materialize(input), materialize(scratch), ZEROS),
                    1, p.start, ZERO)
    return run_transfinite(p, input, ChoicePolicy(), budget, keep_trace=keep_trace, start=snap)


SAMPLES = ("pc-scratch", "pc-output", "count-through", "codex")


def sample(name: str, load: Optional[Callable[[str], Program]] = None) -> Program:
    """Built-in program by CLI name; ``guess-check:<file>`` needs ``load`` for the checker."""
    if name == "pc-scratch":
        return make_pc("scratch")
    if name == "pc-output":
        return make_pc("output")
    if name == "count-through":
        return make_count_through()
    if name == "codex":
        return make_codex_checker()
    if name.startswith("guess-check:") and load is not None:
        return make_guess_and_check(load(name.split(":", 1)[1]))
    raise KeyError(name)


def emit_sample(name: str, load=None) -> str:
    return render_program(sample(name, load))
