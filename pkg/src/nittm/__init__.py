"""Nondeterministic infinite time Turing machines at desk scale."""
from .coding import (Registry, RelationCode, decode_relation, decode_run, decode_snapshot,
                     encode_relation, encode_run, encode_snapshot, pair_of_pos, pair_real,
                     pos_of_pair, unpair_real)
from .explorer import (Accept, NoWitnessFound, PolicyBounds, co_recognizes, enumerate_policies,
                       expand_tree, explore, recognizes)
from .machine import Program, Snapshot, parse_program, render_program
from .ordinal import OMEGA, ZERO, Ordinal, ord_add, ord_compare, ord_next_limit
from .policy import ChoicePolicy, parse_policy
from .programs import (make_codex_checker, make_count_through, make_guess_and_check, make_pc)
from .semantics import RunBudget, run_transfinite
from .streams import ONES, ZEROS, Periodic, Query, finite_support, parse_stream

__version__ = "0.1.0"

__all__ = [
    "Accept",
    "ChoicePolicy",
    "NoWitnessFound",
    "OMEGA",
    "ONES",
    "Ordinal",
    "Periodic",
    "PolicyBounds",
    "Program",
    "Query",
    "Registry",
    "RelationCode",
    "RunBudget",
    "Snapshot",
    "ZERO",
    "ZEROS",
    "co_recognizes",
    "decode_relation",
    "decode_run",
    "decode_snapshot",
    "encode_relation",
    "encode_run",
    "encode_snapshot",
    "enumerate_policies",
    "expand_tree",
    "explore",
    "finite_support",
    "make_codex_checker",
    "make_count_through",
    "make_guess_and_check",
    "make_pc",
    "ord_add",
    "ord_compare",
    "ord_next_limit",
    "pair_of_pos",
    "pair_real",
    "parse_policy",
    "parse_program",
    "parse_stream",
    "pos_of_pair",
    "recognizes",
    "render_program",
    "run_transfinite",
    "unpair_real",
]
