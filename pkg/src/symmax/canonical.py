"""Factorized irredundant forms of computation rules.

Every well-formed rule is equivalent to a stream of factors
``omega r1^a r2^b r3`` where ``omega`` is a word over r4/r5.  The stream is
either finite, ending in a factor whose ``omega`` is absorbing, or infinite and
eventually periodic.  Two well-formed rules are equivalent exactly when their
streams coincide term by term, so equality of :class:`CanonicalRule` values
decides equivalence.

The factorization works bottom-up over the rule tree with a small algebra of
partial words (:class:`_Open`, :class:`_Closed`, :class:`_Periodic`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .errors import NotWellFormed
from .rules import Concat, Letter, RuleExpr, Star, parse

__all__ = [
    "INF",
    "OmegaWord",
    "Factor",
    "CanonicalRule",
    "EMPTY_OMEGA",
    "INFINITE_ALTERNATION",
    "factorize",
    "well_formed",
    "equivalent",
    "canonical_print",
    "canonical_rule",
    "factor_text",
    "LEAST",
]

INF = math.inf


@dataclass(frozen=True)
class OmegaWord:
    """Runs of r4/r5 (``(letter, count)`` with ``count`` a positive int or INF),
    or the infinite alternation ``(r4 r5)*`` when ``alternating`` is set."""

    runs: tuple[tuple[int, float], ...] = ()
    alternating: bool = False

    @property
    def absorbing(self) -> bool:
        return self.alternating or (bool(self.runs) and self.runs[-1][1] == INF)

    @property
    def is_empty(self) -> bool:
        return not self.alternating and not self.runs

    @property
    def letters(self) -> frozenset:
        if self.alternating:
            return frozenset((4, 5))
        return frozenset(l for l, _ in self.runs)

    @property
    def single_letter(self) -> bool:
        """Word in L(r4) or L(r5), the empty word included."""
        return not self.alternating and len(self.runs) <= 1

    @property
    def max_finite_count(self) -> int:
        return max((int(c) for _, c in self.runs if c != INF), default=0)

    def append_run(self, letter: int, count: float) -> "OmegaWord":
        if self.alternating:
            return self
        runs = list(self.runs)
        if runs and runs[-1][0] == letter:
            if runs[-1][1] == INF:
                return self
            runs[-1] = (letter, runs[-1][1] + count)
        else:
            runs.append((letter, count))
        return OmegaWord(tuple(runs))

    def then(self, other: "OmegaWord") -> "OmegaWord":
        if self.alternating:
            return self
        if other.alternating:
            return other
        out = self
        for letter, count in other.runs:
            out = out.append_run(letter, count)
        return out

    def starred(self) -> "OmegaWord":
        ls = self.letters
        if len(ls) == 2:
            return INFINITE_ALTERNATION
        if not ls:
            return self
        return OmegaWord(((next(iter(ls)), INF),))

    def text(self) -> str:
        if self.alternating:
            return "(r4 r5)*"
        parts = []
        for letter, count in self.runs:
            if count == INF:
                parts.append(f"r{letter}*")
            else:
                parts.extend([f"r{letter}"] * int(count))
        return " ".join(parts)


EMPTY_OMEGA = OmegaWord()
INFINITE_ALTERNATION = OmegaWord((), True)


@dataclass(frozen=True)
class Factor:
    omega: OmegaWord = EMPTY_OMEGA
    a: int = 0
    b: int = 0

    @property
    def absorbing(self) -> bool:
        return self.omega.absorbing

    @property
    def bits(self) -> tuple[int, int]:
        return (self.a, self.b)

    def merge(self, other: "Factor") -> "Factor":
        """Concatenation of two r3-free segments."""
        return Factor(self.omega.then(other.omega), self.a | other.a, self.b | other.b)

    def to_rule(self) -> RuleExpr:
        return parse(factor_text(self))

    def __str__(self):
        return factor_text(self)


def factor_text(f: Factor) -> str:
    parts = []
    if not f.omega.is_empty:
        parts.append(f.omega.text())
    if f.a:
        parts.append("r1")
    if f.b:
        parts.append("r2")
    parts.append("r3")
    return " ".join(parts)


@dataclass(frozen=True)
class CanonicalRule:
    """``prefix`` then either nothing (``cycle is None``, the last prefix
    factor is absorbing) or ``cycle`` repeated forever."""

    prefix: tuple[Factor, ...]
    cycle: Optional[tuple[Factor, ...]] = None

    @property
    def finite(self) -> bool:
        return self.cycle is None

    @property
    def periodic(self) -> bool:
        return self.cycle is not None

    def factor(self, i: int) -> Optional[Factor]:
        """The ``i``-th factor (0-based), or None past the end of a finite stream."""
        if i < len(self.prefix):
            return self.prefix[i]
        if self.cycle is None:
            return None
        return self.cycle[(i - len(self.prefix)) % len(self.cycle)]

    def suffix(self, i: int) -> "CanonicalRule":
        """The stream with its first ``i`` factors removed."""
        if i <= len(self.prefix):
            return _normalize_periodic(self.prefix[i:], self.cycle) if self.cycle else \
                CanonicalRule(self.prefix[i:], None)
        shift = (i - len(self.prefix)) % len(self.cycle)
        return _normalize_periodic((), self.cycle[shift:] + self.cycle[:shift])

    def horizon(self) -> int:
        """Number of leading factors after which the stream repeats (or ends)."""
        return len(self.prefix) + (len(self.cycle) if self.cycle else 0)

    def factors(self):
        """Iterate over the prefix and one copy of the cycle."""
        yield from self.prefix
        if self.cycle:
            yield from self.cycle

    @property
    def in_r123(self) -> bool:
        return self.periodic and all(f.omega.is_empty for f in self.factors())

    @property
    def max_finite_count(self) -> int:
        return max((f.omega.max_finite_count for f in self.factors()), default=0)

    def to_rule(self) -> RuleExpr:
        return parse(canonical_print(self))

    def __str__(self):
        return canonical_print(self)


def _primitive(cycle: tuple[Factor, ...]) -> tuple[Factor, ...]:
    n = len(cycle)
    for d in range(1, n + 1):
        if n % d == 0 and cycle[:d] * (n // d) == cycle:
            return cycle[:d]
    return cycle


def _normalize_periodic(prefix, cycle) -> CanonicalRule:
    prefix, cycle = tuple(prefix), _primitive(tuple(cycle))
    while prefix and prefix[-1] == cycle[-1]:
        prefix = prefix[:-1]
        cycle = cycle[-1:] + cycle[:-1]
    return CanonicalRule(prefix, cycle)


# -- word algebra -------------------------------------------------------------

@dataclass(frozen=True)
class _Open:
    """Finite word: ``segments[:-1]`` each closed by r3, ``segments[-1]`` pending."""

    segments: tuple[Factor, ...]


@dataclass(frozen=True)
class _Closed:
    """Complete finite stream ending in an absorbing factor."""

    factors: tuple[Factor, ...]


@dataclass(frozen=True)
class _Periodic:
    prefix: tuple[Factor, ...]
    cycle: tuple[Factor, ...]


def _first_absorbing(factors) -> Optional[int]:
    for i, f in enumerate(factors):
        if f.absorbing:
            return i
    return None


def _settle(word):
    """Truncate at the first absorbing closed factor."""
    if isinstance(word, _Open):
        j = _first_absorbing(word.segments[:-1])
        return word if j is None else _Closed(word.segments[:j + 1])
    if isinstance(word, _Closed):
        j = _first_absorbing(word.factors)
        return _Closed(word.factors[:j + 1])
    j = _first_absorbing(word.prefix)
    if j is not None:
        return _Closed(word.prefix[:j + 1])
    j = _first_absorbing(word.cycle)
    if j is not None:
        return _Closed(word.prefix + word.cycle[:j + 1])
    c = _normalize_periodic(word.prefix, word.cycle)
    return _Periodic(c.prefix, c.cycle)


def _concat(left, right):
    if not isinstance(left, _Open):
        return left
    segs = left.segments
    pending = segs[-1]
    if isinstance(right, _Open):
        return _settle(_Open(segs[:-1] + (pending.merge(right.segments[0]),) + right.segments[1:]))
    if isinstance(right, _Closed):
        fs = right.factors
        return _settle(_Closed(segs[:-1] + (pending.merge(fs[0]),) + fs[1:]))
    if right.prefix:
        prefix = segs[:-1] + (pending.merge(right.prefix[0]),) + right.prefix[1:]
        return _settle(_Periodic(prefix, right.cycle))
    cyc = right.cycle
    return _settle(_Periodic(segs[:-1] + (pending.merge(cyc[0]),), cyc[1:] + cyc[:1]))


def _star(word):
    if not isinstance(word, _Open):
        return word
    segs = word.segments
    if len(segs) == 1:
        s = segs[0]
        return _Open((Factor(s.omega.starred(), s.a, s.b),))
    first, middle, last = segs[0], segs[1:-1], segs[-1]
    return _settle(_Periodic((first,), middle + (last.merge(first),)))


_LETTER_WORDS = {
    1: _Open((Factor(a=1),)),
    2: _Open((Factor(b=1),)),
    3: _Open((Factor(), Factor())),
    4: _Open((Factor(OmegaWord(((4, 1),))),)),
    5: _Open((Factor(OmegaWord(((5, 1),))),)),
}


@lru_cache(maxsize=4096)
def _word(expr: RuleExpr):
    if isinstance(expr, Letter):
        return _LETTER_WORDS[expr.index]
    if isinstance(expr, Star):
        return _star(_word(expr.body))
    if isinstance(expr, Concat):
        out = _Open((Factor(),))
        for item in expr.items:
            out = _concat(out, _word(item))
        return out
    raise TypeError(f"not a rule expression: {expr!r}")


def well_formed(rule: RuleExpr) -> bool:
    """True iff the rule makes every sequence associative."""
    return not isinstance(_word(rule), _Open)


def factorize(rule: RuleExpr) -> CanonicalRule:
    """The factorized irredundant form of a well-formed rule."""
    if isinstance(rule, CanonicalRule):
        return rule
    word = _word(rule)
    if isinstance(word, _Open):
        raise NotWellFormed("rule is not well formed: its factor stream is finite and never absorbs")
    if isinstance(word, _Closed):
        return CanonicalRule(word.factors, None)
    return CanonicalRule(word.prefix, word.cycle)


canonical_rule = factorize


def equivalent(r1: RuleExpr, r2: RuleExpr) -> bool:
    return factorize(r1) == factorize(r2)


def canonical_print(c) -> str:
    if not isinstance(c, CanonicalRule):
        c = factorize(c)
    parts = [factor_text(f) for f in c.prefix]
    if c.cycle is not None:
        parts.append("(" + " ".join(factor_text(f) for f in c.cycle) + ")*")
    return " ".join(parts)


LEAST = CanonicalRule((Factor(INFINITE_ALTERNATION, 1, 1),), None)
