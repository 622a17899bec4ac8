"""Transfinite runs: successor steps, recurrence certificates and limit jumps.

A run is stepped concretely until it halts, gets stuck, or repeats itself.
Repetition is witnessed by a :class:`RecurrenceCertificate`: steps ``m < n``
in the same state and policy phase such that the configuration at ``n`` is
the one at ``m`` moved ``shift`` cells to the right, on every cell from
``base`` (the lowest cell the cycle visits) onwards.  Cells below ``base``
are never visited again.  From such a witness the limit stage follows in
closed form:

* ``shift == 0``: the loop repeats exactly and a cell's limsup is 1 iff it
  holds a 1 at some step of the loop;
* ``shift > 0``: each cell is eventually abandoned by the drifting head and
  keeps its final value, which repeats with period ``shift`` from ``base``.
"""
from __future__ import annotations

import bisect
import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

from .machine import Move, Program, Snapshot, apply_instruction, initial_snapshot
from .ordinal import ord_next_limit
from .policy import ChoicePolicy
from .streams import (TAPE_NAMES, BitStream, Periodic, Query, ReadOnlyStream, TapeTriple,
                      ZEROS, bit_at, bits, canonicalize, combine, materialize, shift_eq,
                      stream_to_json, suffix)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunBudget:
    max_successor_steps_per_block: int = 100_000
    max_limit_jumps: int = 4
    window: int = 4096  # how far back recurrence candidates are searched

    def __post_init__(self):
        if min(self.max_successor_steps_per_block, self.max_limit_jumps, self.window) < 1:
            raise ValueError("budgets must be >= 1")


@dataclass(frozen=True)
class RecurrenceCertificate:
    m: int
    n: int
    shift: int
    base: int = 1

    @property
    def period(self) -> int:
        return self.n - self.m


@dataclass(frozen=True)
class Halted:
    snapshot: Snapshot


@dataclass(frozen=True)
class Stuck:
    snapshot: Snapshot
    reason: str = "no applicable rule"


@dataclass(frozen=True)
class BudgetExceeded:
    snapshot: Snapshot


@dataclass(frozen=True)
class AccelerationFailed:
    snapshot: Snapshot
    reason: str


@dataclass(frozen=True)
class NonHalting:
    certificate: RecurrenceCertificate
    snapshot: Snapshot  # the limit snapshot the run ends on


RunOutcome = Union[Halted, Stuck, BudgetExceeded, AccelerationFailed, NonHalting]


@dataclass(frozen=True)
class TraceRecord:
    snapshot: Snapshot
    choice: Optional[int]
    event: str  # step | limit | halt | stuck


@dataclass
class History:
    """Snapshots of one block (between limits) plus per-step bookkeeping."""
    snaps: list[Snapshot] = field(default_factory=list)
    phases: list[int] = field(default_factory=list)
    choices: list[Optional[int]] = field(default_factory=list)
    bumps: list[int] = field(default_factory=list)  # steps that were a LeftMove at cell 1

    def heads(self, lo: int, hi: int) -> list[int]:
        return [s.head for s in self.snaps[lo:hi]]


@dataclass(frozen=True)
class BlockResult:
    kind: str  # halted | stuck | certificate | budget | accel_failed
    snapshot: Snapshot
    history: History
    branches: int
    certificate: Optional[RecurrenceCertificate] = None
    reason: str = ""


def _key(snap: Snapshot, phase: int):
    parts = []
    for t in snap.tapes:
        parts.append("query" if isinstance(t, Query) else suffix(t, snap.head))
    return (snap.state, phase, *parts)


def check_certificate(hist: History, m: int, n: int) -> Optional[RecurrenceCertificate]:
    """Certificate for steps ``m < n`` if the shifted-recurrence condition holds.

    Raises UndecidableComparison when the only obstruction is a query tape.
    """
    a, b = hist.snaps[m], hist.snaps[n]
    d = b.head - a.head
    if d < 0 or a.state != b.state or hist.phases[m] != hist.phases[n]:
        return None
    if d > 0 and bisect.bisect_left(hist.bumps, m) < bisect.bisect_left(hist.bumps, n):
        return None
    base = min(hist.heads(m, n))
    queries = []
    for ta, tb in zip(a.tapes, b.tapes):
        if isinstance(ta, Query) or isinstance(tb, Query):
            queries.append((ta, tb))
        elif not shift_eq(ta, tb, d, base):
            return None
    for ta, tb in queries:
        if d > 0 or ta != tb:
            shift_eq(ta, tb, d, base)  # raises: undecidable
    return RecurrenceCertificate(m, n, d, base)


def run_block(p: Program, snap: Snapshot, policy: ChoicePolicy, budget: RunBudget,
              branches: int = 0, emit: Optional[Callable[[Snapshot, Optional[int]], None]] = None
              ) -> BlockResult:
    """Step from ``snap`` until halt, stuck, a recurrence certificate, or the step budget."""
    hist = History([snap], [policy.phase(branches)], [None], [])
    seen: dict = {_key(snap, hist.phases[0]): [0]}
    cur = snap
    for _ in range(budget.max_successor_steps_per_block):
        if cur.state == p.halt:
            return BlockResult("halted", cur, hist, branches)
        alts = p.lookup(cur.state, cur.read())
        if not alts:
            return BlockResult("stuck", cur, hist, branches, reason="no applicable rule")
        if len(alts) > 1:
            idx = policy.choice(branches) % len(alts)
            branches += 1
        else:
            idx = 0
        instr = alts[idx]
        try:
            nxt = apply_instruction(cur, instr)
        except ReadOnlyStream as exc:
            return BlockResult("stuck", cur, hist, branches, reason=str(exc))
        if instr.move is Move.LEFT and cur.head == 1:
            hist.bumps.append(len(hist.snaps) - 1)
        hist.snaps.append(nxt)
        hist.phases.append(policy.phase(branches))
        hist.choices.append(idx)
        if emit:
            emit(nxt, idx)
        cur = nxt
        n = len(hist.snaps) - 1
        if cur.state == p.halt:
            return BlockResult("halted", cur, hist, branches)
        key = _key(cur, hist.phases[n])
        cands = seen.setdefault(key, [])
        for m in reversed(cands):
            if n - m > budget.window:
                break
            try:
                cert = check_certificate(hist, m, n)
            except ValueError as exc:
                return BlockResult("accel_failed", cur, hist, branches,
                                   reason=f"cannot compare a drifting window over a query tape: {exc}")
            if cert:
                log.debug("certificate %s at stage %s", cert, cur.stage)
                return BlockResult("certificate", cur, hist, branches, certificate=cert)
        cands.append(n)
    return BlockResult("budget", cur, hist, branches)


def _limit_tape(cert: RecurrenceCertificate, hist: History, i: int) -> BitStream:
    loop = [hist.snaps[t].tapes[i] for t in range(cert.m, cert.n)]
    end = hist.snaps[cert.n].tapes[i]
    if cert.shift == 0:
        if all(t == loop[0] for t in loop):
            return loop[0]
        return combine(loop, max)
    # frozen cells below base + shift; beyond, the block [base, base + shift) repeats
    return canonicalize(Periodic(bits(end, cert.base - 1), bits(end, cert.shift, cert.base)))


def limit_jump(cert: RecurrenceCertificate, hist: History, limit_state: str) -> Snapshot:
    """The limit snapshot: limsup tapes, head at cell 1, limit state, next limit stage."""
    first = hist.snaps[cert.m]
    tapes = TapeTriple(*(_limit_tape(cert, hist, i) for i in range(3)))
    return Snapshot(first.program, tapes, 1, limit_state, ord_next_limit(first.stage))


@dataclass
class RunResult:
    outcome: RunOutcome
    trace: list[TraceRecord]
    certificates: list[RecurrenceCertificate] = field(default_factory=list)
    limits: list[Snapshot] = field(default_factory=list)

    @property
    def final(self) -> Snapshot:
        return self.outcome.snapshot


def initial_tapes(input: BitStream) -> TapeTriple:
    return TapeTriple(materialize(input), ZEROS, ZEROS)


def run_transfinite(p: Program, input: BitStream, policy: ChoicePolicy = ChoicePolicy(),
                    budget: RunBudget = RunBudget(), keep_trace: bool = True,
                    on_record: Optional[Callable[[TraceRecord], None]] = None,
                    start: Optional[Snapshot] = None) -> RunResult:
    """Run ``p`` on ``input`` through successor and limit stages under ``policy``."""
    trace: list[TraceRecord] = []
    pending: list[TraceRecord] = []

    def flush(event=None):
        if pending:
            rec = pending.pop()
            if event:
                rec = TraceRecord(rec.snapshot, rec.choice, event)
            if keep_trace:
                trace.append(rec)
            if on_record:
                on_record(rec)

    def emit(snap, choice, event="step"):
        flush()
        pending.append(TraceRecord(snap, choice, "halt" if snap.state == p.halt else event))

    snap = start or initial_snapshot(p, initial_tapes(input))
    emit(snap, None)
    result = RunResult(None, trace)  # type: ignore[arg-type]
    branches = 0
    jumps = 0
    while True:
        block = run_block(p, snap, policy, budget, branches, emit)
        branches = block.branches
        if block.kind == "halted":
            outcome: RunOutcome = Halted(block.snapshot)
        elif block.kind == "stuck":
            flush("stuck")
            outcome = Stuck(block.snapshot, block.reason)
        elif block.kind == "budget":
            outcome = BudgetExceeded(block.snapshot)
        elif block.kind == "accel_failed":
            outcome = AccelerationFailed(block.snapshot, block.reason)
        else:
            cert = block.certificate
            if jumps >= budget.max_limit_jumps:
                outcome = BudgetExceeded(block.snapshot)
            else:
                jumps += 1
                snap = limit_jump(cert, block.history, p.limit)
                result.certificates.append(cert)
                result.limits.append(snap)
                emit(snap, None, "limit")
                if not p.has_rules(p.limit):
                    outcome = NonHalting(cert, snap)
                else:
                    continue
        flush()
        result.outcome = outcome
        return result


def outcome_name(o: RunOutcome) -> str:
    return {Halted: "halted", Stuck: "stuck", BudgetExceeded: "budget",
            AccelerationFailed: "accel_failed", NonHalting: "nonhalting"}[type(o)]


def output_bit(o: RunOutcome) -> Optional[int]:
    if isinstance(o, Halted):
        return bit_at(o.snapshot.tapes.output, 1)
    return None


def snapshot_to_json(snap: Snapshot) -> dict:
    return {
        "stage": str(snap.stage),
        "state": snap.state,
        "head": snap.head,
        "tapes": {name: stream_to_json(snap.tapes[i]) for i, name in enumerate(TAPE_NAMES)},
    }


def record_to_json(rec: TraceRecord) -> dict:
    """One JSONL trace line; key order is fixed."""
    d = snapshot_to_json(rec.snapshot)
    return {"stage": d["stage"], "state": d["state"], "head": d["head"], "choice": rec.choice,
            "tapes": d["tapes"], "event": rec.event}
