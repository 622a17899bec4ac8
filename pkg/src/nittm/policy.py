"""Choice policies: a finite script followed by a periodic tail of branch indices.

A policy is consulted only at branch points (two or more alternatives);
the supplied index is reduced modulo the number of alternatives, so every
policy is total on every program.
"""
from __future__ import annotations

import re
from dataclasses import dataclass


class PolicyError(ValueError):
    pass


def _min_period(word: tuple[int, ...]) -> tuple[int, ...]:
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and word[:p] * (n // p) == word:
            return word[:p]
    return word


@dataclass(frozen=True)
class ChoicePolicy:
    script: tuple[int, ...] = ()
    tail: tuple[int, ...] = (0,)

    def __post_init__(self):
        if not self.tail:
            raise PolicyError("policy tail must be nonempty")
        if any(i < 0 for i in self.script + self.tail):
            raise PolicyError("choice indices are non-negative")

    def choice(self, b: int) -> int:
        """Raw index for the ``b``-th branch point (0-based)."""
        if b < len(self.script):
            return self.script[b]
        return self.tail[(b - len(self.script)) % len(self.tail)]

    def phase(self, b: int) -> int:
        """Equal phases give equal future choice sequences."""
        if b < len(self.script):
            return b
        return len(self.script) + (b - len(self.script)) % len(self.tail)

    def word(self, n: int) -> tuple[int, ...]:
        return tuple(self.choice(b) for b in range(n))

    def canonical(self) -> ChoicePolicy:
        script, tail = self.script, _min_period(self.tail)
        while script and script[-1] == tail[-1]:
            script = script[:-1]
            tail = tail[-1:] + tail[:-1]
        return ChoicePolicy(script, tail)

    def sort_key(self):
        return (len(self.script), self.script, len(self.tail), self.tail)

    def to_json(self) -> dict:
        return {"script": list(self.script), "tail": list(self.tail)}

    def __str__(self):
        return render_policy(self)


def _indices(value: str) -> tuple[int, ...]:
    if "," in value:
        return tuple(int(v) for v in value.split(",") if v)
    return tuple(int(c) for c in value)


def parse_policy(text: str) -> ChoicePolicy:
    """``script=101;tail=0`` -- digit strings, or comma lists for indices above 9."""
    script: tuple[int, ...] = ()
    tail = None
    for part in filter(None, re.split(r"[;\s]+", text.strip())):
        key, eq, value = part.partition("=")
        try:
            if key == "script" and eq:
                script = _indices(value)
            elif key == "tail" and eq:
                tail = _indices(value)
            else:
                raise PolicyError(f"bad policy part {part!r}")
        except ValueError as exc:
            if isinstance(exc, PolicyError):
                raise
            raise PolicyError(f"bad indices in {part!r}") from None
    if not tail:
        raise PolicyError("policy needs a nonempty tail=...")
    return ChoicePolicy(script, tail)


def render_policy(p: ChoicePolicy) -> str:
    def word(w):
        if any(i > 9 for i in w):
            return ",".join(map(str, w))
        return "".join(map(str, w))
    if p.script:
        return f"script={word(p.script)};tail={word(p.tail)}"
    return f"tail={word(p.tail)}"
