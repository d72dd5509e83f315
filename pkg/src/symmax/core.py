"""The symmetric maximum, signed sequences and their occurrence-count encoding.

A signed sequence is a finite multiset of nonzero integers.  Because the
symmetric maximum is commutative, a sequence is fully described by its
occurrence-count encoding: for each distinct magnitude ``n`` (listed in
decreasing order) the number ``pos`` of occurrences of ``+n`` and the number
``neg`` of occurrences of ``-n``.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import NotAssociative, ParseError

__all__ = [
    "Element",
    "Level",
    "PsiEncoding",
    "symmax",
    "signed_sequence",
    "encode",
    "decode",
    "fulfills_associativity",
    "is_nonassociative",
    "value",
    "parse_sequence",
    "parse_encoding",
    "format_encoding",
]


def symmax(a: int, b: int) -> int:
    """Symmetric maximum of two signed integers.

    ``a (+) -a`` is 0; otherwise the argument with the larger absolute value
    wins (the two have equal magnitude only when ``a == b``).
    """
    if b == -a:
        return 0
    return a if abs(a) > abs(b) or a == b else b


@dataclass(frozen=True)
class Element:
    magnitude: int
    sign: int  # +1 or -1

    def __post_init__(self):
        if self.magnitude < 1:
            raise ValueError("magnitude must be a positive integer")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @property
    def value(self) -> int:
        return self.sign * self.magnitude

    @classmethod
    def of(cls, x: int) -> "Element":
        return cls(abs(x), 1 if x > 0 else -1)


def signed_sequence(values: Iterable[int]) -> tuple[int, ...]:
    """Ingest raw integers: zeros are neutral and dropped."""
    return tuple(int(v) for v in values if int(v) != 0)


@dataclass(frozen=True)
class Level:
    magnitude: int
    pos: int
    neg: int

    @property
    def pair(self) -> tuple[int, int]:
        return (self.pos, self.neg)

    @property
    def total(self) -> int:
        return self.pos + self.neg


@dataclass(frozen=True)
class PsiEncoding:
    """Occurrence counts per magnitude, magnitudes strictly decreasing."""

    levels: tuple[Level, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))
        prev = None
        for lv in self.levels:
            if lv.magnitude < 1:
                raise ValueError("magnitudes must be positive")
            if prev is not None and lv.magnitude >= prev:
                raise ValueError("magnitudes must be strictly decreasing")
            if lv.pos < 0 or lv.neg < 0:
                raise ValueError("counts must be nonnegative")
            if lv.pos == 0 and lv.neg == 0:
                raise ValueError("a level cannot have the pair (0, 0)")
            prev = lv.magnitude

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[int, int]],
                   magnitudes: Sequence[int] | None = None) -> "PsiEncoding":
        """Build from ``(p, m)`` pairs; magnitudes default to ``q, q-1, ..., 1``."""
        pairs = [tuple(p) for p in pairs]
        if magnitudes is None:
            magnitudes = range(len(pairs), 0, -1)
        magnitudes = list(magnitudes)
        if len(magnitudes) != len(pairs):
            raise ValueError("one magnitude per pair is required")
        return cls(tuple(Level(n, p, m) for n, (p, m) in zip(magnitudes, pairs)))

    @property
    def theta(self) -> tuple[int, ...]:
        return tuple(lv.magnitude for lv in self.levels)

    @property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple(lv.pair for lv in self.levels)

    @property
    def total(self) -> int:
        return sum(lv.total for lv in self.levels)

    def __len__(self):
        return len(self.levels)

    def __iter__(self):
        return iter(self.levels)

    def __str__(self):
        return format_encoding(self)

    def concat(self, other: "PsiEncoding") -> "PsiEncoding":
        """Stack ``other`` below ``self``, renumbering magnitudes implicitly."""
        return PsiEncoding.from_pairs(self.pairs + other.pairs)

    def negate(self) -> "PsiEncoding":
        return PsiEncoding(tuple(Level(lv.magnitude, lv.neg, lv.pos) for lv in self.levels))


def encode(s: Iterable[int]) -> PsiEncoding:
    counts = Counter(signed_sequence(s))
    mags = sorted({abs(x) for x in counts}, reverse=True)
    return PsiEncoding(tuple(Level(n, counts[n], counts[-n]) for n in mags))


def decode(e: PsiEncoding) -> tuple[int, ...]:
    out: list[int] = []
    for lv in e.levels:
        out.extend([lv.magnitude] * lv.pos)
        out.extend([-lv.magnitude] * lv.neg)
    return tuple(out)


def _as_encoding(s) -> PsiEncoding:
    return s if isinstance(s, PsiEncoding) else encode(s)


def is_nonassociative(e: PsiEncoding) -> bool:
    """Membership in the set the computation rules act on: top level carries both signs."""
    return bool(e.levels) and e.levels[0].pos > 0 and e.levels[0].neg > 0


def fulfills_associativity(s) -> bool:
    """True iff the sequence has at most two terms or ``max != -min``.

    Accepts either raw integers or an encoding.
    """
    e = _as_encoding(s)
    return e.total <= 2 or not is_nonassociative(e)


def value(e: PsiEncoding) -> int:
    """Aggregate of an associative residue."""
    if not e.levels:
        return 0
    top = e.levels[0]
    if top.pos > 0 and top.neg > 0:
        if e.total == 2:
            return 0
        raise NotAssociative(f"encoding {format_encoding(e)} does not fulfil associativity")
    return top.magnitude if top.pos > 0 else -top.magnitude


# -- text forms ---------------------------------------------------------------

_INT = re.compile(r"\s*([+-]?\d+)\s*")


def parse_sequence(text: str) -> tuple[int, ...]:
    """Parse ``"3,2,1,0,-2"``; zeros are dropped."""
    text = text.strip()
    if not text or text in ("ε", "eps"):
        return ()
    out = []
    pos = 0
    for chunk in text.split(","):
        m = _INT.fullmatch(chunk)
        if not m:
            raise ParseError(f"expected a signed integer, got {chunk.strip()!r}", pos, text)
        out.append(int(m.group(1)))
        pos += len(chunk) + 1
    return signed_sequence(out)


_PAIR = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)")
_EXPLICIT = re.compile(r"\s*(\d+)\s*:\s*\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*")


def parse_encoding(text: str) -> PsiEncoding:
    """Parse ``"(p,m)(p,m)..."`` or ``"n:(p,m);n:(p,m)..."``."""
    text = text.strip()
    if not text or text in ("ε", "eps"):
        return PsiEncoding()
    try:
        if ":" in text:
            levels = []
            for part in text.split(";"):
                if not part.strip():
                    continue
                m = _EXPLICIT.fullmatch(part)
                if not m:
                    raise ParseError(f"malformed level {part.strip()!r}", text.find(part), text)
                n, p, q = (int(g) for g in m.groups())
                levels.append(Level(n, p, q))
            return PsiEncoding(tuple(levels))
        pairs = []
        pos = 0
        compact = text.replace(" ", "")
        while pos < len(compact):
            m = _PAIR.match(compact, pos)
            if not m:
                raise ParseError("expected '(p,m)'", pos, text)
            pairs.append((int(m.group(1)), int(m.group(2))))
            pos = m.end()
        return PsiEncoding.from_pairs(pairs)
    except ValueError as exc:
        raise ParseError(str(exc), None, text) from None


def format_encoding(e: PsiEncoding, explicit: bool = False) -> str:
    if not e.levels:
        return "ε"
    if explicit:
        return ";".join(f"{lv.magnitude}:({lv.pos},{lv.neg})" for lv in e.levels)
    return "".join(f"({lv.pos},{lv.neg})" for lv in e.levels)
