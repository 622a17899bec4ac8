import json
import random

from hypothesis import given, settings, strategies as st

from nittm.machine import build_program, parse_program
from nittm.ordinal import OMEGA, parse_ordinal
from nittm.policy import ChoicePolicy
from nittm.programs import make_pc
from nittm.semantics import (AccelerationFailed, BudgetExceeded, Halted, NonHalting, RunBudget,
                             Stuck, initial_tapes, outcome_name, record_to_json, run_block,
                             run_transfinite)
from nittm.machine import initial_snapshot
from nittm.streams import ONES, ZEROS, Periodic, Query, bits, finite_support

from oracles import ArrayMachine, function_program

ONE = ChoicePolicy((), (1,))

FLIP = build_program("flip", "a", "L", "halt", ["b"], [
    ("a", "***", "-1-", "L", "b"),
    ("b", "***", "-0-", "L", "a"),
])

RIGHT = build_program("right", "s", "L", "halt", [], [("s", "***", "---", "R", "s")])

# first limit: scratch cell 1 is still 0, so mark it and drift again; second limit: halt
TWO_PHASE = parse_program("""program two-phase
states start=s limit=L halt=h others: t
rule s *** -> --- R s
rule L *0* -> -1- R t
rule L *1* -> --- L h
rule t *** -> --- R t
""")


def block(p, policy=ChoicePolicy()):
    snap = initial_snapshot(p, initial_tapes(ZEROS))
    return run_block(p, snap, policy, RunBudget())


def test_pc_constant_one_block():
    b = block(make_pc(), ONE)
    assert b.kind == "certificate"
    c = b.certificate
    assert (c.shift, c.period) == (1, 1) and c.n <= 2


def test_flip_loop_block():
    b = block(FLIP)
    c = b.certificate
    assert (c.shift, c.period) == (0, 2)
    # exact loop: identical configurations
    assert b.history.snaps[c.m].tapes == b.history.snaps[c.n].tapes


def test_immediate_halt():
    p = build_program("h", "s", "L", "halt", [], [("s", "***", "--1", "R", "halt")])
    o = run_transfinite(p, ZEROS).outcome
    assert isinstance(o, Halted) and str(o.snapshot.stage) == "1"


def test_pc_limits():
    r = run_transfinite(make_pc(), ZEROS, ONE)
    lim = r.limits[0]
    assert (lim.state, lim.head, lim.stage) == ("L", 1, OMEGA)
    assert lim.tapes.scratch == ONES
    assert isinstance(r.outcome, Halted) and str(r.outcome.snapshot.stage) == "w*1 + 1"
    r = run_transfinite(make_pc(), ZEROS, ChoicePolicy((), (0, 1)))
    assert r.limits[0].tapes.scratch == Periodic("", "01")


def test_flip_limsup():
    r = run_transfinite(FLIP, ZEROS)
    assert isinstance(r.outcome, NonHalting)
    assert bits(r.limits[0].tapes.scratch, 4) == "1000"


def test_no_limit_rules_is_nonhalting_at_omega():
    o = run_transfinite(RIGHT, ZEROS).outcome
    assert isinstance(o, NonHalting)
    assert o.snapshot.stage == OMEGA and o.snapshot.state == "L"
    assert outcome_name(o) == "nonhalting"


def test_two_phase_reaches_omega_two():
    r = run_transfinite(TWO_PHASE, ZEROS)
    assert [str(s.stage) for s in r.limits] == ["w*1", "w*2"]
    assert isinstance(r.outcome, Halted)
    assert r.outcome.snapshot.stage == parse_ordinal("w*2 + 1")


def test_budgets():
    o = run_transfinite(FLIP, ZEROS, budget=RunBudget(max_successor_steps_per_block=1)).outcome
    assert isinstance(o, BudgetExceeded)
    again = parse_program("""program again
states start=s limit=L halt=h
rule s *** -> --- R s
rule L *** -> --- R s
""")
    r = run_transfinite(again, ZEROS, budget=RunBudget(max_limit_jumps=2))
    assert isinstance(r.outcome, BudgetExceeded) and len(r.limits) == 2


def test_query_input():
    codex = Query(((1, 6),))
    o = run_transfinite(RIGHT, codex).outcome
    assert isinstance(o, AccelerationFailed)
    # an exact loop over a query tape is still fine
    assert isinstance(run_transfinite(FLIP, codex).outcome, NonHalting)
    writer = build_program("w", "s", "L", "halt", [], [("s", "***", "1--", "R", "s")])
    o = run_transfinite(writer, codex).outcome
    assert isinstance(o, Stuck) and "read-only" in o.reason
    # finite support inputs become ordinary periodic tapes
    assert isinstance(run_transfinite(writer, finite_support({3})).outcome, NonHalting)


def test_trace_events_and_json():
    r = run_transfinite(make_pc(), ZEROS, ONE)
    events = [t.event for t in r.trace]
    assert events[-2:] == ["limit", "halt"] and set(events[:-2]) == {"step"}
    assert r.trace[0].choice is None and r.trace[1].choice == 1
    line = json.dumps(record_to_json(r.trace[-1]))
    rec = json.loads(line)
    assert list(rec) == ["stage", "state", "head", "choice", "tapes", "event"]
    assert rec["tapes"]["scratch"] == {"kind": "periodic", "prefix": "", "period": "1"}
    stuck = parse_program("program x\nstates start=a limit=b halt=c\nrule a 1** -> --- R a\n")
    r = run_transfinite(stuck, Periodic("11", "0"))
    assert [t.event for t in r.trace] == ["step", "step", "stuck"]
    assert isinstance(r.outcome, Stuck)


def test_streaming_records_match_kept_trace():
    seen = []
    r = run_transfinite(TWO_PHASE, ZEROS, on_record=seen.append)
    assert seen == r.trace


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_successor_steps_match_array_machine(seed):
    rng = random.Random(seed)
    p = function_program(rng, "f", states=rng.randint(1, 4))
    inp = Periodic("1011", "01")
    r = run_transfinite(p, inp, budget=RunBudget(500, 2))
    sim = ArrayMachine(p, initial_tapes(inp), ChoicePolicy())
    for rec in r.trace[1:]:
        if rec.event == "limit":
            break
        assert sim.step()
        s = rec.snapshot
        assert (s.head, s.state) == (sim.head, sim.state)
        for t in range(3):
            assert bits(s.tapes[t], 30) == sim.window(t, 30)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_certificates_are_sound(seed):
    """A certificate's cycle, replayed concretely, keeps recurring with the same shift."""
    rng = random.Random(seed)
    p = function_program(rng, "f", states=rng.randint(1, 4), halting=False)
    r = run_transfinite(p, ZEROS, budget=RunBudget(2000, 1))
    for c in r.certificates:
        sim = ArrayMachine(p, initial_tapes(ZEROS), ChoicePolicy())
        for _ in range(c.m):
            sim.step()
        states, heads = [], []
        for _ in range(4 * c.period):
            states.append(sim.state)
            heads.append(sim.head)
            assert sim.step()
        for k in range(c.period, 4 * c.period):
            assert states[k] == states[k - c.period]
            assert heads[k] == heads[k - c.period] + c.shift
