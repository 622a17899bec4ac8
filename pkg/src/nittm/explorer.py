"""Computation trees and bounded recognizability.

Finite levels of the computation tree are expanded breadth first.  Paths
that cross a limit are sampled one choice policy at a time; each policy
picks out a single computation sequence, run by :func:`run_transfinite`.

A search that finds no accepting path answers ``NoWitnessFound``, never
"reject": membership quantifies over every branch, which no finite search
covers.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .machine import Program, Snapshot, apply_instruction, initial_snapshot
from .ordinal import Ordinal
from .policy import ChoicePolicy
from .semantics import (Halted, RunBudget, RunOutcome, TraceRecord, initial_tapes,
                        outcome_name, output_bit, run_transfinite)
from .streams import BitStream, ReadOnlyStream, bits


class TreeTooLarge(RuntimeError):
    pass


@dataclass
class TreeNode:
    prefix: tuple[int, ...]
    snapshot: Snapshot
    children: dict[int, TreeNode] = field(default_factory=dict)
    status: str = "open"  # open | halted | stuck

    def leaves(self) -> list[TreeNode]:
        if not self.children:
            return [self]
        out = []
        for k in sorted(self.children):
            out.extend(self.children[k].leaves())
        return out

    def level(self, depth: int) -> list[TreeNode]:
        nodes = [self]
        for _ in range(depth):
            nodes = [c for n in nodes for _, c in sorted(n.children.items())]
        return nodes

    def count(self) -> int:
        return 1 + sum(c.count() for c in self.children.values())


def expand_tree(p: Program, input: BitStream, depth: int, node_cap: int = 2 ** 20) -> TreeNode:
    """All choice prefixes up to ``depth`` successor steps, built breadth first.

    A prefix holds one index per step (0 where the step was forced).
    """
    root = TreeNode((), initial_snapshot(p, initial_tapes(input)))
    queue = deque([root])
    count = 1
    while queue:
        node = queue.popleft()
        snap = node.snapshot
        if snap.state == p.halt:
            node.status = "halted"
            continue
        if len(node.prefix) >= depth:
            continue
        alts = p.lookup(snap.state, snap.read())
        if not alts:
            node.status = "stuck"
            continue
        for i, instr in enumerate(alts):
            try:
                child = apply_instruction(snap, instr)
            except ReadOnlyStream:
                node.status = "stuck"
                break
            count += 1
            if count > node_cap:
                raise TreeTooLarge(f"computation tree exceeds {node_cap} nodes")
            c = TreeNode(node.prefix + (i,), child)
            node.children[i] = c
            queue.append(c)
    return root


def enumerate_policies(max_script: int, max_tail: int, width: int) -> list[ChoicePolicy]:
    """Every policy over indices ``0..width-1`` within the bounds, canonical and deduplicated."""
    alphabet = range(max(width, 1))
    seen = set()
    for s in range(max_script + 1):
        for script in itertools.product(alphabet, repeat=s):
            for t in range(1, max_tail + 1):
                for tail in itertools.product(alphabet, repeat=t):
                    seen.add(ChoicePolicy(script, tail).canonical())
    return sorted(seen, key=ChoicePolicy.sort_key)


@dataclass(frozen=True)
class PolicyBounds:
    max_script: int = 4
    max_tail: int = 3


@dataclass
class PathResult:
    policy: ChoicePolicy
    outcome: RunOutcome
    halt_stage: Optional[Ordinal]
    output_bit: Optional[int]
    trace: Optional[list[TraceRecord]] = None


def run_path(p: Program, input: BitStream, policy: ChoicePolicy, budget: RunBudget,
             keep_trace: bool = False) -> PathResult:
    r = run_transfinite(p, input, policy, budget, keep_trace=keep_trace)
    o = r.outcome
    stage = o.snapshot.stage if isinstance(o, Halted) else None
    return PathResult(policy, o, stage, output_bit(o), r.trace if keep_trace else None)


def explore(p: Program, input: BitStream, bounds: PolicyBounds = PolicyBounds(),
            budget: RunBudget = RunBudget(), keep_traces: bool = False) -> list[PathResult]:
    """Run every policy within ``bounds``, in canonical policy order."""
    return [run_path(p, input, pol, budget, keep_traces)
            for pol in enumerate_policies(bounds.max_script, bounds.max_tail, p.width)]


@dataclass(frozen=True)
class Accept:
    witness: ChoicePolicy
    path: PathResult


@dataclass(frozen=True)
class NoWitnessFound:
    explored: int


def recognizes(p: Program, input: BitStream, bounds: PolicyBounds = PolicyBounds(),
               budget: RunBudget = RunBudget()):
    """Accept with the first policy (canonical order) whose run halts with output 1."""
    policies = enumerate_policies(bounds.max_script, bounds.max_tail, p.width)
    for pol in policies:
        path = run_path(p, input, pol, budget)
        if path.output_bit == 1:
            return Accept(pol, path)
    return NoWitnessFound(len(policies))


def co_recognizes(p: Program, input: BitStream, bounds: PolicyBounds = PolicyBounds(),
                  budget: RunBudget = RunBudget()):
    """``p`` recognizes the complement; Accept here means ``input`` is outside the set."""
    return recognizes(p, input, bounds, budget)


def report(paths: list[PathResult]) -> dict:
    rows = []
    for r in paths:
        rows.append({
            "policy": r.policy.to_json(),
            "outcome": outcome_name(r.outcome),
            "halt_stage": str(r.halt_stage) if r.halt_stage is not None else None,
            "output_bit": r.output_bit,
        })
    witness = next((r.policy.to_json() for r in paths if r.output_bit == 1), None)
    return {"paths": rows, "summary": {"accepted": witness is not None, "witness": witness}}


def tree_to_json(node: TreeNode) -> dict:
    s = node.snapshot
    return {
        "prefix": list(node.prefix),
        "state": s.state,
        "head": s.head,
        "stage": str(s.stage),
        "scratch": bits(s.tapes.scratch, max(len(node.prefix), 1)),
        "status": node.status,
        "children": [tree_to_json(node.children[k]) for k in sorted(node.children)],
    }
