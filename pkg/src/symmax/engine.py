"""Operational semantics of computation rules on occurrence-count encodings.

Rules act on a working copy of the encoding whose levels remember which
original level they came from, so that every run also yields a deletion
profile: how many positive and negative occurrences of each original level
were removed.

``Star(w)`` applies ``w`` until one full pass leaves the encoding unchanged.
Every effective action strictly lowers the total multiplicity, which bounds
the number of passes.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .core import Level, PsiEncoding, encode, fulfills_associativity, format_encoding, value
from .errors import NotMadeAssociative, PreconditionFailed
from .rules import Concat, Letter, RuleExpr, Star

__all__ = [
    "BasicRule",
    "DeletionProfile",
    "TraceStep",
    "RunResult",
    "apply_elementary",
    "apply_basic",
    "run",
    "run_basic_word",
    "evaluate",
    "residue",
    "construct_target_rule",
    "basic_word",
]


@dataclass(frozen=True)
class BasicRule:
    """Single-unit decrement ``kind`` applied at current level ``k`` (1-based)."""

    kind: int
    k: int

    def __post_init__(self):
        if self.kind not in (1, 2, 3, 4, 5):
            raise ValueError(f"no basic rule of kind {self.kind}")
        if self.k < 1 or (self.kind in (4, 5) and self.k < 2):
            raise ValueError(f"basic rule of kind {self.kind} needs k >= {2 if self.kind in (4, 5) else 1}")

    def __str__(self):
        return f"r'{self.kind}^{self.k}"


BasicWord = Union[BasicRule, Concat, Star]


def basic_word(*items) -> Concat:
    return Concat(tuple(items))


@dataclass(frozen=True)
class DeletionProfile:
    """Deleted ``(pos, neg)`` counts for every level of ``base``."""

    base: PsiEncoding
    deleted: tuple[tuple[int, int], ...]

    @property
    def is_total(self) -> bool:
        return all(d == lv.pair for d, lv in zip(self.deleted, self.base.levels))

    @property
    def is_empty(self) -> bool:
        return all(d == (0, 0) for d in self.deleted)

    @property
    def count(self) -> int:
        return sum(p + m for p, m in self.deleted)

    def survivors(self) -> PsiEncoding:
        """The encoding of the occurrences that were not deleted."""
        levels = []
        for (dp, dm), lv in zip(self.deleted, self.base.levels):
            p, m = lv.pos - dp, lv.neg - dm
            if p or m:
                levels.append(Level(lv.magnitude, p, m))
        return PsiEncoding(tuple(levels))

    def removed(self) -> PsiEncoding:
        levels = [Level(lv.magnitude, dp, dm)
                  for (dp, dm), lv in zip(self.deleted, self.base.levels) if dp or dm]
        return PsiEncoding(tuple(levels))


@dataclass(frozen=True)
class TraceStep:
    action: str
    before: PsiEncoding
    after: PsiEncoding

    def __str__(self):
        return f"{self.action}: {format_encoding(self.before)} -> {format_encoding(self.after)}"


@dataclass(frozen=True)
class RunResult:
    encoding: PsiEncoding
    profile: DeletionProfile
    trace: tuple[TraceStep, ...] | None = None
    max_passes: int = 0

    @property
    def value(self) -> int:
        return value(self.encoding)


class _State:
    """Mutable working encoding; ``src[i]`` is the original index of level ``i``."""

    __slots__ = ("base", "src", "p", "m", "version", "steps", "max_passes")

    def __init__(self, base: PsiEncoding, record: bool):
        self.base = base
        self.src = list(range(len(base.levels)))
        self.p = [lv.pos for lv in base.levels]
        self.m = [lv.neg for lv in base.levels]
        self.version = 0
        self.steps = [] if record else None
        self.max_passes = 0

    def nonassociative(self) -> bool:
        return bool(self.p) and self.p[0] > 0 and self.m[0] > 0

    def snapshot(self) -> PsiEncoding:
        levels = self.base.levels
        return PsiEncoding(tuple(Level(levels[s].magnitude, p, m)
                                 for s, p, m in zip(self.src, self.p, self.m)))

    def set(self, i: int, p: int, m: int, action: str):
        before = self.snapshot() if self.steps is not None else None
        if p == 0 and m == 0:
            del self.src[i], self.p[i], self.m[i]
        else:
            self.p[i] = p
            self.m[i] = m
        self.version += 1
        if before is not None:
            self.steps.append(TraceStep(action, before, self.snapshot()))

    def elementary(self, l: int):
        p, m = self.p, self.m
        if not p or p[0] == 0 or m[0] == 0:
            return
        if l == 1:
            if p[0] > 1:
                self.set(0, 1, m[0], "r1")
        elif l == 2:
            if m[0] > 1:
                self.set(0, p[0], 1, "r2")
        elif l == 3:
            c = min(p[0], m[0])
            self.set(0, p[0] - c, m[0] - c, "r3")
        elif l == 4:
            if len(p) > 1 and p[1] > 0:
                self.set(1, 0, m[1], "r4")
        else:
            if len(p) > 1 and m[1] > 0:
                self.set(1, p[1], 0, "r5")

    def basic(self, b: BasicRule):
        i = b.k - 1
        if i >= len(self.p):
            return
        p, m = self.p[i], self.m[i]
        kind = b.kind
        if kind == 1:
            if p > 1:
                self.set(i, p - 1, m, str(b))
        elif kind == 2:
            if m > 1:
                self.set(i, p, m - 1, str(b))
        elif kind == 3:
            if p > 0 and m > 0:
                self.set(i, p - 1, m - 1, str(b))
        elif kind == 4:
            if p > 0:
                self.set(i, p - 1, m, str(b))
        else:
            if m > 0:
                self.set(i, p, m - 1, str(b))

    def profile(self) -> DeletionProfile:
        left = {s: (p, m) for s, p, m in zip(self.src, self.p, self.m)}
        deleted = []
        for i, lv in enumerate(self.base.levels):
            p, m = left.get(i, (0, 0))
            deleted.append((lv.pos - p, lv.neg - m))
        return DeletionProfile(self.base, tuple(deleted))


def _exec(expr, st: _State, elementary: bool):
    if isinstance(expr, Letter):
        st.elementary(expr.index)
    elif isinstance(expr, BasicRule):
        st.basic(expr)
    elif isinstance(expr, Concat):
        for item in expr.items:
            # every elementary condition requires both signs on the top level
            if elementary and not st.nonassociative():
                return
            _exec(item, st, elementary)
    elif isinstance(expr, Star):
        passes = 0
        while True:
            if elementary and not st.nonassociative():
                break
            v = st.version
            _exec(expr.body, st, elementary)
            passes += 1
            if st.version == v:
                break
        st.max_passes = max(st.max_passes, passes)
    else:
        raise TypeError(f"not a rule expression: {expr!r}")


def _as_encoding(e) -> PsiEncoding:
    return e if isinstance(e, PsiEncoding) else encode(e)


def run(rule: RuleExpr, e, trace: bool = False) -> RunResult:
    """Execute ``rule`` on an encoding (or raw sequence)."""
    e = _as_encoding(e)
    st = _State(e, trace)
    _exec(rule, st, True)
    return RunResult(st.snapshot(), st.profile(),
                     tuple(st.steps) if trace else None, st.max_passes)


def run_basic_word(word, e, trace: bool = False) -> RunResult:
    """Execute a word over basic rules; no associativity short-circuit applies."""
    e = _as_encoding(e)
    st = _State(e, trace)
    _exec(word, st, False)
    return RunResult(st.snapshot(), st.profile(),
                     tuple(st.steps) if trace else None, st.max_passes)


def apply_elementary(letter, e: PsiEncoding) -> PsiEncoding:
    idx = letter.index if isinstance(letter, Letter) else int(letter)
    return run(Letter(idx), e).encoding


def apply_basic(b: BasicRule, e: PsiEncoding) -> PsiEncoding:
    return run_basic_word(b, e).encoding


def residue(rule: RuleExpr, e) -> PsiEncoding:
    return run(rule, e).encoding


def evaluate(rule: RuleExpr, s) -> int:
    """Aggregate of ``s`` under ``rule``."""
    out = run(rule, s).encoding
    if not fulfills_associativity(out):
        raise NotMadeAssociative(f"rule leaves nonassociative residue {format_encoding(out)}")
    return value(out)


def construct_target_rule(e, k: int, sign: int) -> RuleExpr:
    """Build a rule whose value on ``e`` is ``sign * n_k``.

    ``k`` is a 1-based level index and ``sign`` is +1 or -1.
    """
    e = _as_encoding(e)
    levels = e.levels
    if not levels or levels[0].pos == 0 or levels[0].neg == 0:
        raise PreconditionFailed("the encoding already fulfils associativity")
    if sign not in (1, -1):
        raise PreconditionFailed("sign must be +1 or -1")
    if not 1 <= k <= len(levels):
        raise PreconditionFailed(f"level {k} does not exist")
    if k == 1:
        if sign == 1:
            if levels[0].pos <= 1:
                raise PreconditionFailed("+n_1 needs p_1 > 1")
            return Concat((Letter(2), Letter(3)))
        if levels[0].neg <= 1:
            raise PreconditionFailed("-n_1 needs m_1 > 1")
        return Concat((Letter(1), Letter(3)))
    target = levels[k - 1]
    if (sign == 1 and target.pos == 0) or (sign == -1 and target.neg == 0):
        raise PreconditionFailed(f"level {k} has no occurrence of sign {sign:+d}")
    word: list[RuleExpr] = []
    for lv in levels[1:k - 1]:
        if lv.pos == 0:
            word.append(Letter(5))
        elif lv.neg == 0:
            word.append(Letter(4))
        else:
            word += [Letter(4), Letter(5)]
    if sign == 1 and target.neg > 0:
        word.append(Letter(5))
    if sign == -1 and target.pos > 0:
        word.append(Letter(4))
    word += [Letter(1), Letter(2), Letter(3)]
    return Concat(tuple(word))
