"""Brute-force ground truth: every value reachable by bracketing a sequence.

``achievable_values`` runs a dynamic program over sub-multisets (permutations
are redundant because the operation is commutative); ``naive_achievable``
enumerates permutations times binary bracketings directly and is kept as a
second, independent oracle for tiny inputs.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

from .core import PsiEncoding, decode, encode, is_nonassociative, signed_sequence, symmax
from .engine import construct_target_rule, evaluate
from .errors import NotMadeAssociative, NotWellFormed, PreconditionFailed, TooLarge
from .rules import RuleExpr, to_text

__all__ = [
    "AchievableSet",
    "DEFAULT_CAP",
    "achievable_values",
    "naive_achievable",
    "enumerate_sequences",
    "count_sequences",
    "check_rules",
    "RuleCheckReport",
]

DEFAULT_CAP = 10


@dataclass(frozen=True)
class AchievableSet:
    base: PsiEncoding
    values: frozenset

    def __contains__(self, x):
        return x in self.values

    def sorted(self) -> list[int]:
        return sorted(self.values)


def _as_values(s) -> tuple[int, ...]:
    if isinstance(s, PsiEncoding):
        return decode(s)
    return signed_sequence(s)


def achievable_values(s, cap: int = DEFAULT_CAP) -> AchievableSet:
    """All results of bracketing ``s`` in any order."""
    vals = _as_values(s)
    if len(vals) > cap:
        raise TooLarge(f"{len(vals)} occurrences exceed the cap of {cap}")
    base = encode(vals)
    if not vals:
        return AchievableSet(base, frozenset({0}))
    distinct = tuple(sorted(set(vals)))
    counts = tuple(vals.count(v) for v in distinct)
    return AchievableSet(base, _dp(distinct, counts))


def _dp(distinct: tuple[int, ...], counts: tuple[int, ...]) -> frozenset:
    @lru_cache(maxsize=None)
    def table(vec: tuple[int, ...]) -> frozenset:
        if sum(vec) == 1:
            return frozenset({distinct[vec.index(1)]})
        out = set()
        # proper splits vec = left + right; each unordered split once
        for left in itertools.product(*(range(c + 1) for c in vec)):
            right = tuple(c - l for c, l in zip(vec, left))
            if not any(left) or not any(right) or left > right:
                continue
            for x in table(left):
                for y in table(right):
                    out.add(symmax(x, y))
        return frozenset(out)

    return table(counts)


def naive_achievable(s) -> frozenset:
    """Permutations x binary bracketings; exponential, for tiny inputs only."""
    vals = _as_values(s)
    if not vals:
        return frozenset({0})

    @lru_cache(maxsize=None)
    def brackets(seq: tuple[int, ...]) -> frozenset:
        if len(seq) == 1:
            return frozenset(seq)
        out = set()
        for i in range(1, len(seq)):
            for x in brackets(seq[:i]):
                for y in brackets(seq[i:]):
                    out.add(symmax(x, y))
        return frozenset(out)

    out = set()
    for perm in set(itertools.permutations(vals)):
        out |= brackets(perm)
    return frozenset(out)


def enumerate_sequences(max_levels: int, max_count: int,
                        only_nonassociative: bool = False) -> Iterator[PsiEncoding]:
    """Every encoding with at most ``max_levels`` levels and counts at most ``max_count``.

    Ordered by number of levels, then lexicographically by pairs.
    """
    if max_levels < 1 or max_count < 1:
        raise ValueError("max_levels and max_count must be at least 1")
    any_pair = [(p, m) for p in range(max_count + 1) for m in range(max_count + 1) if p or m]
    top_pairs = [(p, m) for (p, m) in any_pair if p and m] if only_nonassociative else any_pair
    for q in range(1, max_levels + 1):
        for top in top_pairs:
            for rest in itertools.product(any_pair, repeat=q - 1):
                yield PsiEncoding.from_pairs((top,) + rest)


def count_sequences(max_levels: int, max_count: int, only_nonassociative: bool = False) -> int:
    k = (max_count + 1) ** 2 - 1
    top = max_count ** 2 if only_nonassociative else k
    return sum(top * k ** (q - 1) for q in range(1, max_levels + 1))


@dataclass
class RuleCheckReport:
    sequence: tuple[int, ...]
    achievable: list[int]
    rule_values: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    constructed: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        return {
            "sequence": list(self.sequence),
            "achievable": self.achievable,
            "rule_values": self.rule_values,
            "constructed": self.constructed,
            "failures": self.failures,
            "ok": self.ok,
        }


def check_rules(s, rules: Sequence[RuleExpr], cap: int = DEFAULT_CAP) -> RuleCheckReport:
    """Check rule values against the bracketing oracle on one sequence.

    (a) every rule's value is achievable by some bracketing; (b) achievable
    values are signed magnitudes of ``s`` or 0; (c) every achievable signed
    magnitude that the constructive builder accepts is reproduced by its rule.
    """
    from .canonical import well_formed

    vals = _as_values(s)
    ach = achievable_values(vals, cap)
    e = ach.base
    report = RuleCheckReport(vals, ach.sorted())
    allowed = {0} | {lv.magnitude for lv in e.levels} | {-lv.magnitude for lv in e.levels}
    stray = sorted(ach.values - allowed)
    if stray:
        report.failures.append(f"achievable values outside the signed magnitudes: {stray}")
    for rule in rules:
        text = to_text(rule)
        if not well_formed(rule):
            raise NotWellFormed(f"rule {text} is not well formed")
        try:
            v = evaluate(rule, e)
        except NotMadeAssociative as exc:
            report.failures.append(f"{text}: {exc}")
            continue
        report.rule_values[text] = v
        if v not in ach.values:
            report.failures.append(f"{text}: value {v} is not achievable")
    if is_nonassociative(e):
        for k, lv in enumerate(e.levels, 1):
            for sign in (1, -1):
                target = sign * lv.magnitude
                if target not in ach.values:
                    continue
                try:
                    built = construct_target_rule(e, k, sign)
                except PreconditionFailed:
                    continue
                got = evaluate(built, e)
                report.constructed[str(target)] = to_text(built)
                if got != target:
                    report.failures.append(f"constructed rule {to_text(built)} gives {got}, not {target}")
    return report
