"""Codes for relations, snapshots and finite runs.

* A pair ``(i, j)`` lives at cell ``2**i * 3**j``; a finite relation is the
  stream with 1s at the cells of its pairs.
* A snapshot is a natural number: the binary numeral ``1`` followed by the
  Elias-gamma codes of its fields (program index, head, state index, stage
  terms, then prefix and period of each tape).
* A finite run is the real carrying bit ``b`` of snapshot ``k`` at cell
  ``2**k * 3**b`` (bit 0 is the least significant).
* Two reals interleave into one: cell ``2k-1`` from the first, ``2k`` from
  the second.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .machine import Program, Snapshot
from .ordinal import Ordinal
from .streams import BitStream, Periodic, Query, TapeTriple, bits, canonicalize, finite_support

MAX_EXPONENT = 1 << 16


class CodingError(ValueError):
    pass


class MalformedCode(CodingError):
    pass


class NotEncodable(CodingError):
    pass


def pos_of_pair(i: int, j: int) -> int:
    if i < 0 or j < 0:
        raise CodingError("pair coordinates are natural numbers")
    if i > MAX_EXPONENT or j > MAX_EXPONENT:
        raise OverflowError(f"pair ({i}, {j}) exceeds the exponent range {MAX_EXPONENT}")
    return (1 << i) * 3 ** j


def pair_of_pos(pos: int) -> tuple[int, int]:
    """Inverse of :func:`pos_of_pair`; MalformedCode unless ``pos == 2**i * 3**j``."""
    if pos < 1:
        raise MalformedCode(f"cell {pos} does not exist")
    i = (pos & -pos).bit_length() - 1
    rest = pos >> i
    j = 0
    while rest % 3 == 0:
        rest //= 3
        j += 1
    if rest != 1:
        raise MalformedCode(f"cell {pos} is not of the form 2^i 3^j")
    return i, j


@dataclass(frozen=True)
class RelationCode:
    pairs: frozenset[tuple[int, int]]

    @classmethod
    def of(cls, pairs: Iterable[tuple[int, int]]) -> RelationCode:
        return cls(frozenset(pairs))

    def field(self) -> set[int]:
        return {x for p in self.pairs for x in p}

    def __str__(self):
        ps = sorted(self.pairs, key=lambda p: pos_of_pair(*p))
        return "{" + ",".join(f"({i},{j})" for i, j in ps) + "}"


def encode_relation(r: RelationCode) -> BitStream:
    return finite_support(pos_of_pair(i, j) for i, j in r.pairs)


def _ones(s: BitStream) -> list[int]:
    if isinstance(s, Query):
        if s.families:
            raise MalformedCode("a relation code has finitely many 1s")
        return sorted(s.support)
    s = canonicalize(s)
    if s.period != "0":
        raise MalformedCode("a relation code has finitely many 1s")
    return [k + 1 for k, b in enumerate(s.prefix) if b == "1"]


def decode_relation(s: BitStream, field_bound: int) -> RelationCode:
    pairs = set()
    for pos in _ones(s):
        i, j = pair_of_pos(pos)
        if i >= field_bound or j >= field_bound:
            raise MalformedCode(f"pair ({i},{j}) at cell {pos} is outside the field bound {field_bound}")
        pairs.add((i, j))
    return RelationCode(frozenset(pairs))


def matrix_cell(i: int, j: int, field_bound: int) -> int:
    """Cell of pair (i, j) in the compact layout read by the count-through machine."""
    return 2 + i * field_bound + j


def encode_relation_matrix(r: RelationCode, field_bound: int) -> Periodic:
    if any(i >= field_bound or j >= field_bound for i, j in r.pairs):
        raise CodingError("relation exceeds the field bound")
    return canonicalize(finite_support(matrix_cell(i, j, field_bound) for i, j in r.pairs))


# -- self-delimiting naturals ------------------------------------------------

def _gamma(n: int) -> str:
    """Elias gamma code of ``n + 1`` (so 0 is encodable)."""
    b = bin(n + 1)[2:]
    return "0" * (len(b) - 1) + b


def _ungamma(s: str, at: int) -> tuple[int, int]:
    z = at
    while z < len(s) and s[z] == "0":
        z += 1
    width = z - at + 1
    end = z + width
    if end > len(s):
        raise MalformedCode("truncated code")
    return int(s[z:end], 2) - 1, end


def pack(values: Sequence[int]) -> int:
    return int("1" + "".join(_gamma(v) for v in values), 2)


def unpack(code: int) -> list[int]:
    if code < 1:
        raise MalformedCode("codes are positive")
    s = bin(code)[3:]
    out, at = [], 0
    while at < len(s):
        v, at = _ungamma(s, at)
        out.append(v)
    return out


def _word(w: str) -> int:
    return int("1" + w, 2)


def _unword(n: int) -> str:
    if n < 1:
        raise MalformedCode("bad bit-word numeral")
    return bin(n)[3:]


class Registry:
    """Programs indexed for snapshot codes, in registration order."""

    def __init__(self, programs: Iterable[Program] = ()):
        self.programs: list[Program] = []
        for p in programs:
            self.add(p)

    def add(self, p: Program) -> int:
        for k, q in enumerate(self.programs):
            if q.name == p.name:
                return k
        self.programs.append(p)
        return len(self.programs) - 1

    def index(self, name: str) -> int:
        for k, q in enumerate(self.programs):
            if q.name == name:
                return k
        raise CodingError(f"program {name!r} is not registered")

    def __getitem__(self, k: int) -> Program:
        try:
            return self.programs[k]
        except IndexError:
            raise MalformedCode(f"no program with index {k}") from None


def encode_snapshot(snap: Snapshot, registry: Registry) -> int:
    prog = registry[registry.index(snap.program)]
    try:
        state = prog.state_ids.index(snap.state)
    except ValueError:
        raise CodingError(f"state {snap.state!r} is not in program {prog.name!r}") from None
    fields = [registry.index(snap.program), snap.head, state, len(snap.stage.terms)]
    for e, c in snap.stage.terms:
        fields += [e, c]
    for t in snap.tapes:
        if not isinstance(t, Periodic):
            raise NotEncodable("query tapes have no finite code")
        fields += [_word(t.prefix), _word(t.period)]
    return pack(fields)


def decode_snapshot(code: int, registry: Registry) -> Snapshot:
    f = unpack(code)
    try:
        prog = registry[f[0]]
        head, state = f[1], prog.state_ids[f[2]]
        nterms = f[3]
        terms = tuple((f[4 + 2 * k], f[5 + 2 * k]) for k in range(nterms))
        rest = f[4 + 2 * nterms:]
        if len(rest) != 6 or head < 1:
            raise MalformedCode("wrong number of snapshot fields")
        tapes = TapeTriple(*(Periodic(_unword(rest[2 * k]), _unword(rest[2 * k + 1]))
                             for k in range(3)))
        return Snapshot(prog.name, tapes, head, state, Ordinal(terms))
    except (IndexError, ValueError) as exc:
        if isinstance(exc, MalformedCode):
            raise
        raise MalformedCode(f"not a snapshot code: {exc}") from None


def encode_run(trace: Sequence[Snapshot], registry: Registry) -> Query:
    cells = set()
    for k, snap in enumerate(trace):
        code = encode_snapshot(snap, registry)
        b = 0
        while code:
            if code & 1:
                cells.add(pos_of_pair(k, b))
            code >>= 1
            b += 1
    return finite_support(cells)


def decode_run(s: BitStream, registry: Registry) -> list[Snapshot]:
    rows: dict[int, int] = {}
    for pos in _ones(s):
        k, b = pair_of_pos(pos)
        rows[k] = rows.get(k, 0) | (1 << b)
    if sorted(rows) != list(range(len(rows))):
        raise MalformedCode("run code has a missing row")
    return [decode_snapshot(rows[k], registry) for k in range(len(rows))]


def pair_real(a: BitStream, b: BitStream) -> Periodic:
    if not (isinstance(a, Periodic) and isinstance(b, Periodic)):
        raise NotEncodable("only periodic reals can be paired")
    head = max(len(a.prefix), len(b.prefix))
    per = math.lcm(len(a.period), len(b.period))
    xa, xb = bits(a, head + per), bits(b, head + per)
    out = "".join(x + y for x, y in zip(xa, xb))
    return canonicalize(Periodic(out[:2 * head], out[2 * head:]))


def unpair_real(s: BitStream) -> tuple[Periodic, Periodic]:
    if not isinstance(s, Periodic):
        raise NotEncodable("only periodic reals can be unpaired")
    head = -(-len(s.prefix) // 2)
    per = len(s.period) if len(s.period) % 2 == 0 else 2 * len(s.period)
    w = bits(s, 2 * head + per)
    a, b = w[0::2], w[1::2]
    return (canonicalize(Periodic(a[:head], a[head:])),
            canonicalize(Periodic(b[:head], b[head:])))


__all__ = [
    "CodingError", "MalformedCode", "NotEncodable", "Registry", "RelationCode",
    "decode_relation", "decode_run", "decode_snapshot",
    "encode_relation", "encode_relation_matrix", "encode_run", "encode_snapshot",
    "matrix_cell", "pack", "pair_of_pos", "pair_real", "pos_of_pair", "unpack", "unpair_real",
]
