"""The eight primary acceptance criteria, one test each.

A PASS/FAIL line per criterion is printed in the terminal summary.
"""
import itertools
import random
import time

import pytest

from nittm.coding import (Registry, decode_run, decode_snapshot, encode_run, encode_snapshot,
                          encode_relation_matrix, RelationCode, pos_of_pair)
from nittm.explorer import Accept, NoWitnessFound, PolicyBounds, enumerate_policies, expand_tree, explore, recognizes
from nittm.ordinal import Cmp, Ordinal, ord_add, ord_compare, ord_is_limit, ord_next_limit
from nittm.policy import ChoicePolicy
from nittm.programs import make_count_through, make_guess_and_check, make_pc, make_word_checker, run_checker
from nittm.semantics import (Halted, RunBudget, initial_tapes, output_bit, run_transfinite)
from nittm.streams import ZEROS, Periodic, bits, canonicalize

from oracles import (drift_program, eventual_tapes, function_program, is_strict_linear_order,
                     next_limit_triple, order_of, triple, triple_add)


def _word(bits_):
    return "".join(map(str, bits_))


@pytest.mark.criterion(1, "full binary tree: 2^n leaves enumerate all words, n <= 12")
def test_full_binary_tree():
    t0 = time.perf_counter()
    pc = make_pc("scratch")
    for n in range(13):
        leaves = expand_tree(pc, ZEROS, n).leaves()
        assert len(leaves) == 2 ** n
        words = sorted(bits(leaf.snapshot.tapes.scratch, n) for leaf in leaves)
        assert words == sorted(_word(w) for w in itertools.product((0, 1), repeat=n))
        # the choice word along each path is exactly what was written
        assert all(bits(leaf.snapshot.tapes.scratch, n) == _word(leaf.prefix) for leaf in leaves)
    assert time.perf_counter() - t0 < 10


def _check_limit(p, inp, policy):
    r = run_transfinite(p, inp, policy, RunBudget(20_000, 1))
    assert r.certificates, f"{p.name}: no certificate"
    cert, lim = r.certificates[0], r.limits[0]
    last_successor = r.trace[cert.n].snapshot
    assert lim.state == p.limit and lim.head == 1
    assert ord_is_limit(lim.stage) and lim.stage == ord_next_limit(last_successor.stage)
    frontier = max(rec.snapshot.head for rec in r.trace[:cert.n + 1]) + 8
    upto = frontier + 3 * cert.shift
    want = eventual_tapes(p, initial_tapes(inp), policy, cert.m, cert.n, cert.shift, upto)
    got = [bits(lim.tapes[t], upto) for t in range(3)]
    assert got == want, (p.name, policy, cert)


@pytest.mark.criterion(2, "limit rule: accelerated limits equal concrete eventual values")
def test_limit_rule_conformance():
    pc = make_pc("scratch")
    for policy in enumerate_policies(4, 3, 2):
        _check_limit(pc, ZEROS, policy)
    rng = random.Random(2024)
    for k in range(10):
        _check_limit(drift_program(rng, f"drift{k}"), ZEROS, ChoicePolicy())
    inp = Periodic("1101", "01")
    for k in range(10):
        p = function_program(rng, f"loop{k}", states=rng.randint(1, 4), halting=False)
        _check_limit(p, inp, ChoicePolicy())


@pytest.mark.criterion(3, "p_c halts at w+1 with the predicted limit scratch")
def test_pc_end_to_end():
    pc = make_pc("scratch")
    paths = explore(pc, ZEROS, PolicyBounds(4, 3), keep_traces=True)
    assert len(paths) == len(enumerate_policies(4, 3, 2))
    for path in paths:
        assert isinstance(path.outcome, Halted)
        assert str(path.halt_stage) == "w*1 + 1"
        pol = path.policy
        predicted = canonicalize(Periodic(_word(pol.script), _word(pol.tail)))
        limit = [rec for rec in path.trace if rec.event == "limit"]
        assert len(limit) == 1
        assert limit[0].snapshot.tapes.scratch == predicted
        assert path.outcome.snapshot.tapes.scratch == predicted


def _expressible(w, bounds):
    k = len(w)
    for s in range(bounds.max_script + 1):
        for script in itertools.product((0, 1), repeat=s):
            for t in range(1, bounds.max_tail + 1):
                for tail in itertools.product((0, 1), repeat=t):
                    if ChoicePolicy(script, tail).word(k) == w:
                        return True
    return False


@pytest.mark.criterion(4, "guess-and-check accepts exactly the expressible guesses")
def test_guess_and_check():
    all_bounds = [PolicyBounds(0, 1), PolicyBounds(1, 1), PolicyBounds(2, 1),
                  PolicyBounds(0, 2), PolicyBounds(1, 2), PolicyBounds(4, 3)]
    for k in range(5):
        for w in itertools.product((0, 1), repeat=k):
            g = make_guess_and_check(make_word_checker(_word(w)))
            for bounds in all_bounds:
                res = recognizes(g, ZEROS, bounds)
                if _expressible(w, bounds):
                    assert isinstance(res, Accept), (w, bounds)
                    assert res.witness.word(k) == w
                    assert bits(res.path.outcome.snapshot.tapes.scratch, k) == _word(w)
                else:
                    assert isinstance(res, NoWitnessFound), (w, bounds)


def _reachable_runs(rng):
    pc = make_pc("scratch")
    progs = [pc, make_pc("output")]
    progs += [drift_program(rng, f"d{k}") for k in range(5)]
    progs += [function_program(rng, f"f{k}") for k in range(5)]
    runs = []
    for p in progs:
        for _ in range(4):
            policy = ChoicePolicy(tuple(rng.randint(0, 1) for _ in range(rng.randint(0, 3))),
                                  tuple(rng.randint(0, 1) for _ in range(rng.randint(1, 3))))
            inp = Periodic(_word(rng.randint(0, 1) for _ in range(rng.randint(0, 5))),
                           _word(rng.randint(0, 1) for _ in range(rng.randint(1, 3))))
            r = run_transfinite(p, inp, policy, RunBudget(200, 2))
            runs.append([rec.snapshot for rec in r.trace])
    return progs, runs


@pytest.mark.criterion(5, "coding round trips for snapshots and traces; pos_of_pair(2,2) = 36")
def test_coding_round_trips():
    t0 = time.perf_counter()
    assert pos_of_pair(2, 2) == 36
    rng = random.Random(5)
    progs, runs = _reachable_runs(rng)
    reg = Registry(progs)
    pool = [s for run in runs for s in run]
    for snap in rng.sample(pool, 100):
        assert decode_snapshot(encode_snapshot(snap, reg), reg) == snap
    for _ in range(100):
        run = rng.choice(runs)
        a = rng.randrange(len(run))
        trace = run[a:a + rng.randint(1, 6)]
        assert decode_run(encode_run(trace, reg), reg) == trace
    assert time.perf_counter() - t0 < 5


@pytest.mark.criterion(6, "count-through: accepts linear orders, rejects violations, monotone stage")
def test_count_through():
    F = 8
    p = make_count_through(F)
    rng = random.Random(6)
    stages: dict[int, set] = {}
    for _ in range(100):
        n = rng.randint(1, F)
        elements = rng.sample(range(F), n)
        rel = order_of(elements)
        assert is_strict_linear_order(rel)
        o = run_checker(p, encode_relation_matrix(RelationCode.of(rel), F)).outcome
        assert isinstance(o, Halted) and output_bit(o) == 1, elements
        stages.setdefault(len({x for pr in rel for x in pr}), set()).add(o.snapshot.stage)
    bad = 0
    while bad < 100:
        n = rng.randint(1, F)
        elements = rng.sample(range(F), n)
        rel = order_of(elements)
        # perturb: drop, add or flip pairs
        for _ in range(rng.randint(1, 3)):
            a, b = rng.choice(range(F)), rng.choice(range(F))
            rel ^= {(a, b)}
        if is_strict_linear_order(rel):
            continue
        bad += 1
        o = run_checker(p, encode_relation_matrix(RelationCode.of(rel), F)).outcome
        assert isinstance(o, Halted) and output_bit(o) == 0, sorted(rel)
    sizes = sorted(stages)
    for small, big in zip(sizes, sizes[1:]):
        assert max(stages[small]) <= min(stages[big])


@pytest.mark.criterion(7, "determinism collapse: explore yields the single run_transfinite path")
def test_determinism_collapse():
    rng = random.Random(7)
    budget = RunBudget(2_000, 3)
    for k in range(20):
        p = function_program(rng, f"fn{k}", states=rng.randint(1, 4))
        assert p.is_deterministic()
        inp = Periodic(_word(rng.randint(0, 1) for _ in range(4)), rng.choice(["0", "1", "01"]))
        paths = explore(p, inp, budget=budget, keep_traces=True)
        assert len(paths) == 1
        direct = run_transfinite(p, inp, ChoicePolicy(), budget)
        assert paths[0].trace == direct.trace
        assert paths[0].outcome == direct.outcome


def _rand_ordinal(rng):
    return Ordinal(tuple((e, c) for e, c in ((2, rng.randint(0, 4)), (1, rng.randint(0, 4)),
                                             (0, rng.randint(0, 4))) if c))


@pytest.mark.criterion(8, "ordinal arithmetic against the triple oracle below w^3")
def test_ordinal_arithmetic():
    rng = random.Random(8)
    for _ in range(1000):
        a, b, c = (_rand_ordinal(rng) for _ in range(3))
        ta, tb = triple(a), triple(b)
        cmp = ord_compare(a, b)
        assert [a < b, a == b, b < a].count(True) == 1
        assert cmp == (Cmp.LESS if ta < tb else Cmp.EQUAL if ta == tb else Cmp.GREATER)
        assert triple(ord_add(a, b)) == triple_add(ta, tb)
        assert ord_add(ord_add(a, b), c) == ord_add(a, ord_add(b, c))
        if b < c:
            assert ord_add(a, b) < ord_add(a, c)
        assert triple(ord_next_limit(a)) == next_limit_triple(ta)
