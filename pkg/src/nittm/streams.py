"""Finitely described infinite binary words used as tape contents.

Cells are 1-indexed.  Two descriptions exist:

* :class:`Periodic` -- ``prefix`` followed by ``period`` repeated forever.
  Every writable tape is periodic; equality and shifted equality are
  decidable on this form.
* :class:`Query` -- a read-only membership test: a finite support set plus
  geometric families ``{a * b**k : k >= 0}``.  Used for input reals such
  as the co-dex that are not eventually periodic.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Union


class StreamError(ValueError):
    pass


class InvalidPosition(StreamError):
    pass


class ReadOnlyStream(StreamError):
    pass


class UndecidableComparison(StreamError):
    pass


@dataclass(frozen=True)
class Periodic:
    prefix: str = ""
    period: str = "0"

    def __post_init__(self):
        if not self.period:
            raise StreamError("period must be nonempty")
        if set(self.prefix + self.period) - {"0", "1"}:
            raise StreamError("streams are binary")

    def __str__(self):
        return render_stream(self)


@dataclass(frozen=True)
class Query:
    families: tuple[tuple[int, int], ...] = ()
    support: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        for a, b in self.families:
            if a < 1 or b < 2:
                raise StreamError(f"bad geometric family {a}x{b}^k")
        if any(p < 1 for p in self.support):
            raise InvalidPosition("query positions are >= 1")

    def __str__(self):
        return render_stream(self)


BitStream = Union[Periodic, Query]

ZEROS = Periodic("", "0")
ONES = Periodic("", "1")


def finite_support(positions: Iterable[int]) -> Query:
    return Query((), frozenset(positions))


def is_power(n: int, b: int) -> bool:
    while n % b == 0:
        n //= b
    return n == 1


def bit_at(s: BitStream, pos: int) -> int:
    if pos < 1:
        raise InvalidPosition(f"cell {pos} does not exist (cells start at 1)")
    if isinstance(s, Periodic):
        if pos <= len(s.prefix):
            return int(s.prefix[pos - 1])
        return int(s.period[(pos - len(s.prefix) - 1) % len(s.period)])
    if pos in s.support:
        return 1
    for a, b in s.families:
        if pos % a == 0 and is_power(pos // a, b):
            return 1
    return 0


def bits(s: BitStream, n: int, start: int = 1) -> str:
    """The ``n`` cells starting at ``start`` as a bit string."""
    if isinstance(s, Periodic):
        need = start - 1 + n
        if need <= len(s.prefix):
            return s.prefix[start - 1:need]
        reps = (need - len(s.prefix)) // len(s.period) + 1
        return (s.prefix + s.period * reps)[start - 1:need]
    return "".join(str(bit_at(s, p)) for p in range(start, start + n))


def _min_period(word: str) -> str:
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and word[:p] * (n // p) == word:
            return word[:p]
    return word


def canonicalize(s: BitStream) -> BitStream:
    """Minimal-period, minimal-prefix form.  Finite-support queries become periodic."""
    if isinstance(s, Query):
        if s.families:
            return s
        top = max(s.support, default=0)
        cells = ["0"] * top
        for p in s.support:
            cells[p - 1] = "1"
        return canonicalize(Periodic("".join(cells), "0"))
    prefix, period = s.prefix, _min_period(s.period)
    # roll the period back over a prefix that already repeats it
    while prefix and prefix[-1] == period[-1]:
        prefix = prefix[:-1]
        period = period[-1] + period[:-1]
    if prefix == s.prefix and period == s.period:
        return s
    return Periodic(prefix, period)


def materialize(s: BitStream) -> BitStream:
    """Periodic form of a finite-support query; other streams unchanged."""
    if isinstance(s, Query) and not s.families:
        return canonicalize(s)
    return s


def write_bit(s: BitStream, pos: int, b: int) -> Periodic:
    if isinstance(s, Query):
        raise ReadOnlyStream("cannot write to a read-only query stream")
    if pos < 1:
        raise InvalidPosition(f"cell {pos} does not exist (cells start at 1)")
    if bit_at(s, pos) == b:
        return s
    prefix = s.prefix
    period = s.period
    if pos > len(prefix):
        # unroll whole periods so the tail keeps its phase
        extra = pos - len(prefix)
        reps = -(-extra // len(period))
        prefix = prefix + period * reps
    prefix = prefix[:pos - 1] + str(b) + prefix[pos:]
    return canonicalize(Periodic(prefix, period))


def shift_eq(s1: BitStream, s2: BitStream, d: int, start: int = 1) -> bool:
    """True iff ``s1[c] == s2[c + d]`` for every cell ``c >= start``."""
    if not (isinstance(s1, Periodic) and isinstance(s2, Periodic)):
        raise UndecidableComparison("shifted equality needs periodic streams")
    if d < 0:
        raise ValueError("shift must be non-negative")
    # past both prefixes each side is periodic, so one joint period settles it
    lo = max(len(s1.prefix), len(s2.prefix) - d, start - 1)
    window = lo - start + 1 + math.lcm(len(s1.period), len(s2.period))
    return bits(s1, window, start) == bits(s2, window, start + d)


def stream_eq(s1: BitStream, s2: BitStream) -> bool:
    if isinstance(s1, Periodic) and isinstance(s2, Periodic):
        return canonicalize(s1) == canonicalize(s2)
    if isinstance(s1, Query) and isinstance(s2, Query):
        return s1 == s2
    raise UndecidableComparison("cannot compare a query stream with a periodic one")


def suffix(s: Periodic, start: int) -> Periodic:
    """The stream read from cell ``start`` onwards, canonicalized."""
    if start <= len(s.prefix):
        return canonicalize(Periodic(s.prefix[start - 1:], s.period))
    k = (start - len(s.prefix) - 1) % len(s.period)
    return canonicalize(Periodic("", s.period[k:] + s.period[:k]))


def combine(streams: list[Periodic], op) -> Periodic:
    """Cellwise combination of periodic streams with ``op`` over lists of bits."""
    head = max(len(s.prefix) for s in streams)
    per = math.lcm(*(len(s.period) for s in streams))
    cols = [bits(s, head + per) for s in streams]
    out = "".join(str(op([int(c[i]) for c in cols])) for i in range(head + per))
    return canonicalize(Periodic(out[:head], out[head:]))


# -- stream-spec strings -------------------------------------------------

_BITS = re.compile(r"^[01]*$")
_FAMILY = re.compile(r"^(\d+)x(\d+)\^k$")


def parse_stream(spec: str) -> BitStream:
    """Parse ``prefix=..,period=..``, ``support=p1,p2`` or ``family=AxB^k[+support=..]``."""
    spec = spec.strip()
    if spec.startswith("prefix="):
        m = re.match(r"^prefix=([01]*),period=([01]+)$", spec)
        if not m:
            raise StreamError(f"bad periodic stream spec {spec!r}")
        return canonicalize(Periodic(m.group(1), m.group(2)))
    families = []
    support: set[int] = set()
    for part in spec.split("+"):
        key, _, value = part.partition("=")
        if key == "family":
            m = _FAMILY.match(value)
            if not m:
                raise StreamError(f"bad family {value!r}")
            families.append((int(m.group(1)), int(m.group(2))))
        elif key == "support":
            try:
                support.update(int(p) for p in value.split(",") if p)
            except ValueError:
                raise StreamError(f"bad support list {value!r}") from None
        else:
            raise StreamError(f"bad stream spec {spec!r}")
    return Query(tuple(families), frozenset(support))


def render_stream(s: BitStream) -> str:
    if isinstance(s, Periodic):
        return f"prefix={s.prefix},period={s.period}"
    parts = [f"family={a}x{b}^k" for a, b in s.families]
    if s.support or not parts:
        parts.append("support=" + ",".join(str(p) for p in sorted(s.support)))
    return "+".join(parts)


def stream_to_json(s: BitStream) -> dict:
    if isinstance(s, Periodic):
        return {"kind": "periodic", "prefix": s.prefix, "period": s.period}
    return {
        "kind": "query",
        "families": [list(f) for f in s.families],
        "support": sorted(s.support),
    }


def stream_from_json(obj: dict) -> BitStream:
    if obj["kind"] == "periodic":
        return Periodic(obj["prefix"], obj["period"])
    if obj["kind"] == "query":
        return Query(tuple(tuple(f) for f in obj["families"]), frozenset(obj["support"]))
    raise StreamError(f"unknown stream kind {obj['kind']!r}")


@dataclass(frozen=True)
class TapeTriple:
    input: BitStream = ZEROS
    scratch: BitStream = ZEROS
    output: BitStream = ZEROS

    def __getitem__(self, i: int) -> BitStream:
        return (self.input, self.scratch, self.output)[i]

    def replace(self, i: int, s: BitStream) -> TapeTriple:
        t = [self.input, self.scratch, self.output]
        t[i] = s
        return TapeTriple(*t)

    def read(self, pos: int) -> tuple[int, int, int]:
        return (bit_at(self.input, pos), bit_at(self.scratch, pos), bit_at(self.output, pos))


TAPE_NAMES = ("input", "scratch", "output")
