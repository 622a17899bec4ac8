"""Ordinals below w^w in Cantor normal form.

Stages of a run are ordinals of the shape ``w^k*c + ... + n``.  Only the
additive structure is needed: successor steps add 1 and limit jumps move
to the next limit ordinal.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import total_ordering


class Cmp(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


class OrdinalParseError(ValueError):
    pass


@total_ordering
@dataclass(frozen=True)
class Ordinal:
    # (exponent, coefficient) pairs, exponents strictly decreasing, coefficients >= 1
    terms: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        prev = None
        for e, c in self.terms:
            if e < 0 or c < 1:
                raise ValueError(f"bad CNF term {(e, c)}")
            if prev is not None and e >= prev:
                raise ValueError("CNF exponents must strictly decrease")
            prev = e

    @classmethod
    def of(cls, n: int) -> Ordinal:
        if n < 0:
            raise ValueError("ordinals are non-negative")
        return cls(((0, n),)) if n else cls()

    @classmethod
    def omega(cls, k: int = 1, c: int = 1) -> Ordinal:
        return cls(((k, c),))

    def __lt__(self, other):
        if not isinstance(other, Ordinal):
            return NotImplemented
        return ord_compare(self, other) is Cmp.LESS

    def __add__(self, other):
        if isinstance(other, int):
            other = Ordinal.of(other)
        if not isinstance(other, Ordinal):
            return NotImplemented
        return ord_add(self, other)

    def __radd__(self, other):
        if isinstance(other, int):
            return ord_add(Ordinal.of(other), self)
        return NotImplemented

    @property
    def is_limit(self) -> bool:
        return ord_is_limit(self)

    @property
    def finite_part(self) -> int:
        if self.terms and self.terms[-1][0] == 0:
            return self.terms[-1][1]
        return 0

    def is_finite(self) -> bool:
        return all(e == 0 for e, _ in self.terms)

    def __int__(self):
        if not self.is_finite():
            raise ValueError(f"{self} is infinite")
        return self.finite_part

    def __str__(self):
        return render_ordinal(self)

    def __repr__(self):
        return f"Ordinal({render_ordinal(self)!r})"


ZERO = Ordinal()
OMEGA = Ordinal.omega()


def ord_compare(a: Ordinal, b: Ordinal) -> Cmp:
    # canonical forms compare lexicographically, term by term
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        if ea != eb:
            return Cmp.GREATER if ea > eb else Cmp.LESS
        if ca != cb:
            return Cmp.GREATER if ca > cb else Cmp.LESS
    if len(a.terms) == len(b.terms):
        return Cmp.EQUAL
    return Cmp.GREATER if len(a.terms) > len(b.terms) else Cmp.LESS


def ord_add(a: Ordinal, b: Ordinal) -> Ordinal:
    if not b.terms:
        return a
    lead, coeff = b.terms[0]
    kept = [t for t in a.terms if t[0] > lead]
    same = [c for e, c in a.terms if e == lead]
    if same:
        coeff += same[0]
    return Ordinal(tuple(kept) + ((lead, coeff),) + b.terms[1:])


def ord_is_limit(a: Ordinal) -> bool:
    return bool(a.terms) and a.terms[-1][0] >= 1


def ord_next_limit(a: Ordinal) -> Ordinal:
    """Least limit ordinal strictly above ``a``: for a = mu + n, returns mu + w."""
    terms = a.terms
    if terms and terms[-1][0] == 0:
        terms = terms[:-1]
    return ord_add(Ordinal(terms), OMEGA)


def render_ordinal(a: Ordinal) -> str:
    if not a.terms:
        return "0"
    parts = []
    for e, c in a.terms:
        if e == 0:
            parts.append(str(c))
        elif e == 1:
            parts.append(f"w*{c}")
        else:
            parts.append(f"w^{e}*{c}")
    return " + ".join(parts)


_TERM = re.compile(r"^(?:w(?:\^(\d+))?(?:\*(\d+))?|(\d+))$")


def parse_ordinal(text: str) -> Ordinal:
    """Parse ``w^2*3 + w*1 + 4`` style notation; ``w``, ``w^2`` and ``w*2`` are accepted too."""
    text = text.strip()
    if not text:
        raise OrdinalParseError("empty ordinal")
    result = ZERO
    for raw in text.split("+"):
        m = _TERM.match(raw.replace(" ", ""))
        if not m:
            raise OrdinalParseError(f"bad ordinal term {raw.strip()!r}")
        if m.group(3) is not None:
            term = Ordinal.of(int(m.group(3)))
        else:
            e = int(m.group(1)) if m.group(1) else 1
            c = int(m.group(2)) if m.group(2) else 1
            term = Ordinal(((e, c),)) if c else ZERO
        result = result + term
    return result
