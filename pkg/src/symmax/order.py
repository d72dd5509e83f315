"""The deletion order on well-formed rules.

``R <= R'`` when, on every sequence, ``R`` deletes at least the occurrences
``R'`` deletes.  There is no general decision procedure; :func:`compare` is
exact on the fragments with a structural characterization and falls back to
an exhaustive search over a bounded family of sequences, reporting
``Undecided`` rather than guessing when that search is inconclusive.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

from .canonical import (INF, LEAST, CanonicalRule, Factor, canonical_print, factorize)
from .core import PsiEncoding
from .engine import DeletionProfile, run
from .errors import (AbsorbingFactor, InfiniteSupport, MismatchedBase,
                     NoCommonUpperBoundInInterval, PreconditionFailed)
from .rules import parse
from .search import DEFAULT_BUDGET, Budget, SearchResult, bounded_search

__all__ = [
    "Relation",
    "Classification",
    "Witness",
    "OrderVerdict",
    "R123Labels",
    "profile_dominates",
    "compare",
    "scaled_budget",
    "kernel_compare",
    "classify",
    "meet123",
    "join123",
    "interval123",
    "leq123",
    "witness_for_factor",
    "LABELED_RULES",
    "labeled_rules",
]


class Relation(str, enum.Enum):
    EQUAL = "Equal"
    LESS = "Less"
    GREATER = "Greater"
    INCOMPARABLE = "Incomparable"
    UNDECIDED = "Undecided"

    def flipped(self) -> "Relation":
        return {Relation.LESS: Relation.GREATER,
                Relation.GREATER: Relation.LESS}.get(self, self)


class Classification(str, enum.Enum):
    LEAST = "Least"
    ATOM = "Atom"
    MAXIMAL = "Maximal"
    NONE = "None"


def profile_dominates(p1: DeletionProfile, p2: DeletionProfile) -> bool:
    """True iff ``p1`` deletes at least what ``p2`` deletes, level by level."""
    if p1.base != p2.base:
        raise MismatchedBase("profiles were recorded on different encodings")
    return all(a >= c and b >= d for (a, b), (c, d) in zip(p1.deleted, p2.deleted))


@dataclass(frozen=True)
class Witness:
    """A sequence with the deletion profiles of both rules on it."""

    sequence: PsiEncoding
    first: DeletionProfile
    second: DeletionProfile

    @property
    def first_deletes_more(self) -> bool:
        return profile_dominates(self.first, self.second) and self.first != self.second

    @property
    def second_deletes_more(self) -> bool:
        return profile_dominates(self.second, self.first) and self.first != self.second

    def as_dict(self) -> dict:
        return {
            "sequence": [list(p) for p in self.sequence.pairs],
            "first_deleted": [list(d) for d in self.first.deleted],
            "second_deleted": [list(d) for d in self.second.deleted],
        }


@dataclass(frozen=True)
class OrderVerdict:
    relation: Relation
    method: str
    exact: bool
    witnesses: tuple[Witness, ...] = ()
    budget: Optional[Budget] = None
    surviving: Optional[str] = None  # direction still consistent after an inconclusive search

    def as_dict(self) -> dict:
        return {
            "relation": self.relation.value,
            "method": self.method,
            "exact": self.exact,
            "witnesses": [w.as_dict() for w in self.witnesses],
            "budget": None if self.budget is None else
            {"max_levels": self.budget.max_levels, "max_count": self.budget.max_count},
            "surviving": self.surviving,
        }


# -- R123 labels --------------------------------------------------------------

Label = tuple[int, int]
_LABELS = ((0, 0), (0, 1), (1, 0), (1, 1))


def _normalize(prefix, cycle):
    prefix, cycle = tuple(prefix), tuple(cycle)
    n = len(cycle)
    for d in range(1, n + 1):
        if n % d == 0 and cycle[:d] * (n // d) == cycle:
            cycle = cycle[:d]
            break
    while prefix and prefix[-1] == cycle[-1]:
        prefix = prefix[:-1]
        cycle = cycle[-1:] + cycle[:-1]
    return prefix, cycle


@dataclass(frozen=True)
class R123Labels:
    """Eventually periodic labelling ``i -> (a_i, b_i)`` of a rule over r1, r2, r3."""

    prefix: tuple[Label, ...]
    cycle: tuple[Label, ...]

    def __post_init__(self):
        if not self.cycle:
            raise ValueError("the cycle must be non-empty")
        for lab in self.prefix + self.cycle:
            if tuple(lab) not in _LABELS:
                raise ValueError(f"not a label: {lab!r}")
        prefix, cycle = _normalize(tuple(map(tuple, self.prefix)), tuple(map(tuple, self.cycle)))
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "cycle", cycle)

    @classmethod
    def of(cls, rule) -> "R123Labels":
        c = factorize(rule if not isinstance(rule, str) else parse(rule))
        if not c.in_r123:
            raise PreconditionFailed(f"{canonical_print(c)} does not use r1, r2, r3 only")
        return cls(tuple(f.bits for f in c.prefix), tuple(f.bits for f in c.cycle))

    def label(self, i: int) -> Label:
        """Label of factor ``i`` (0-based)."""
        if i < len(self.prefix):
            return self.prefix[i]
        return self.cycle[(i - len(self.prefix)) % len(self.cycle)]

    def span(self, other: "R123Labels") -> int:
        """Positions to inspect so that both labellings have repeated."""
        return max(len(self.prefix), len(other.prefix)) + math.lcm(len(self.cycle), len(other.cycle))

    def support(self) -> list[int]:
        """Positions whose label differs from (1, 1); requires an all-(1,1) cycle."""
        if any(lab != (1, 1) for lab in self.cycle):
            raise InfiniteSupport("the labelling differs from (1, 1) infinitely often")
        return [i for i, lab in enumerate(self.prefix) if lab != (1, 1)]

    def to_canonical(self) -> CanonicalRule:
        return CanonicalRule(tuple(Factor(a=a, b=b) for a, b in self.prefix),
                             tuple(Factor(a=a, b=b) for a, b in self.cycle))

    def text(self) -> str:
        return canonical_print(self.to_canonical())

    def __str__(self):
        return self.text()


def _zip_labels(t1: R123Labels, t2: R123Labels):
    n = t1.span(t2)
    return [(t1.label(i), t2.label(i)) for i in range(n)], n


def leq123(t1: R123Labels, t2: R123Labels) -> bool:
    """``t1 <= t2``: wherever the labels differ, ``t1`` carries (1, 1)."""
    pairs, _ = _zip_labels(t1, t2)
    return all(x == y or x == (1, 1) for x, y in pairs)


def _rebuild(t1: R123Labels, t2: R123Labels, labels) -> R123Labels:
    split = max(len(t1.prefix), len(t2.prefix))
    return R123Labels(tuple(labels[:split]), tuple(labels[split:]))


def meet123(t1: R123Labels, t2: R123Labels) -> R123Labels:
    pairs, _ = _zip_labels(t1, t2)
    return _rebuild(t1, t2, [x if x == y else (1, 1) for x, y in pairs])


def join123(t1: R123Labels, t2: R123Labels) -> R123Labels:
    pairs, _ = _zip_labels(t1, t2)
    out = []
    for i, (x, y) in enumerate(pairs):
        if x == y or y == (1, 1):
            out.append(x)
        elif x == (1, 1):
            out.append(y)
        else:
            raise NoCommonUpperBoundInInterval(
                f"labels {x} and {y} at position {i + 1} have no common upper bound")
    return _rebuild(t1, t2, out)


def interval123(r: R123Labels) -> list[R123Labels]:
    """Every labelling between the all-(1,1) rule and ``r``, one per subset of the support."""
    support = r.support()
    out = []
    for mask in range(2 ** len(support)):
        prefix = list(r.prefix)
        for bit, pos in enumerate(support):
            if not mask >> bit & 1:
                prefix[pos] = (1, 1)
        out.append(R123Labels(tuple(prefix), r.cycle))
    return out


# -- witness gadgets ----------------------------------------------------------

def witness_for_factor(f: Factor) -> PsiEncoding:
    """A block consumed entirely by ``f`` that leaves whatever follows it untouched."""
    if f.omega.absorbing:
        raise AbsorbingFactor(f"factor {f} absorbs everything below its top level")
    pairs = [(1, 1)]
    for letter, count in f.omega.runs:
        # one level is enough for an unbounded run: the next run's level has the other sign only
        n = 1 if count == INF else int(count)
        pairs += [(1, 0) if letter == 4 else (0, 1)] * n
    return PsiEncoding.from_pairs(pairs)


# -- structural deciders ------------------------------------------------------

def _finite_runs(f: Factor) -> bool:
    return not f.omega.alternating and all(n != INF for _, n in f.omega.runs)


def _blocks(f: Factor) -> list[tuple[int, int]]:
    """``omega`` as blocks ``r4^a_i r5^b_i`` with a_i != 0 for i >= 2 and b_i != 0 for i < n."""
    out: list[list[int]] = []
    for letter, n in f.omega.runs:
        if letter == 4:
            out.append([int(n), 0])
        else:
            if not out:
                out.append([0, 0])
            out[-1][1] = int(n)
    return [tuple(b) for b in out]


def _least_tailed(c: CanonicalRule) -> Optional[Factor]:
    """The factor ``f`` when ``c`` is exactly ``f`` followed by the least rule."""
    if c.finite and len(c.prefix) == 2 and c.prefix[1] == LEAST.prefix[0] \
            and _finite_runs(c.prefix[0]):
        return c.prefix[0]
    return None


def _tail_blocks(f1: Factor, f2: Factor) -> Optional[Relation]:
    x, y = _blocks(f1), _blocks(f2)
    n = len(x)
    # differing block counts are left to the search: such pairs can be comparable
    if n != len(y) or n == 0 or x == y:
        return None
    an, bn = x[-1]
    an2, bn2 = y[-1]
    if bn != bn2 or (bn == 0 and an != an2):
        return Relation.INCOMPARABLE
    if bn != 0:
        if x[:-1] != y[:-1]:
            return Relation.INCOMPARABLE
        # only the last r4 exponent differs: the larger one deletes more
        return Relation.LESS if an > an2 else Relation.GREATER
    # b_n = 0 and a_n equal
    if n == 1:
        return None
    if x[-2][0] != y[-2][0] or x[:-2] != y[:-2]:
        return Relation.INCOMPARABLE
    return Relation.LESS if x[-2][1] > y[-2][1] else Relation.GREATER


def _prop36(s1: CanonicalRule, s2: CanonicalRule) -> Optional[Relation]:
    if not (s1.periodic and s2.periodic):
        return None
    for c in (s1, s2):
        for f in c.factors():
            if not f.omega.single_letter or not _finite_runs(f):
                return None
    n = max(len(s1.prefix), len(s2.prefix)) + math.lcm(len(s1.cycle), len(s2.cycle))
    if any(s1.factor(i).bits != s2.factor(i).bits for i in range(n)):
        return None
    return Relation.INCOMPARABLE


def _structural(c1: CanonicalRule, c2: CanonicalRule, depth: int = 0):
    """Exact relation and method name, or None outside the characterized fragments."""
    if c1 == c2:
        return Relation.EQUAL, "canonical-form"
    if c1 == LEAST:
        return Relation.LESS, "least-element"
    if c2 == LEAST:
        return Relation.GREATER, "least-element"
    if c1.in_r123 and c2.in_r123:
        t1, t2 = R123Labels.of(c1), R123Labels.of(c2)
        le, ge = leq123(t1, t2), leq123(t2, t1)
        rel = Relation.LESS if le else Relation.GREATER if ge else Relation.INCOMPARABLE
        return rel, "r123-labels"
    # drop the longest common run of leading factors; none of them alternates forever
    bound = max(len(c1.prefix), len(c2.prefix)) + \
        math.lcm(len(c1.cycle or (0,)), len(c2.cycle or (0,)))
    k = 0
    while k <= bound and c1.factor(k) is not None and c1.factor(k) == c2.factor(k):
        k += 1
    if k:
        s1, s2 = c1.suffix(k), c2.suffix(k)
        got = _structural(s1, s2, depth)
        if got is None:
            return None
        rel, method = got
        return rel, f"common-prefix({k})+{method}"
    f1, f2 = c1.factor(0), c2.factor(0)
    if f1.bits == f2.bits and f1.omega.alternating != f2.omega.alternating:
        return (Relation.LESS if f1.omega.alternating else Relation.GREATER), "alternation-first"
    if f1.omega == f2.omega and f1.bits != f2.bits:
        if (1, 1) not in (f1.bits, f2.bits):
            return Relation.INCOMPARABLE, "first-factor-bits"
        if depth < 8:
            t1, t2 = c1.suffix(1), c2.suffix(1)
            if not t1.prefix and not t1.cycle and not t2.prefix and not t2.cycle:
                tail = Relation.EQUAL
            else:
                got = _structural(t1, t2, depth + 1)
                tail = got[0] if got else None
            # the side with bits (1,1) is strictly below when its tail is not above
            if f2.bits == (1, 1) and tail in (Relation.GREATER, Relation.EQUAL):
                return Relation.GREATER, "first-factor-bits"
            if f1.bits == (1, 1) and tail in (Relation.LESS, Relation.EQUAL):
                return Relation.LESS, "first-factor-bits"
        return None
    if f1.bits == f2.bits:
        g1, g2 = _least_tailed(c1), _least_tailed(c2)
        if g1 is not None and g2 is not None:
            rel = _tail_blocks(g1, g2)
            if rel is not None:
                return rel, "least-tailed-blocks"
    rel = _prop36(c1, c2)
    if rel is not None:
        return rel, "single-letter-streams"
    return None


# -- compare ------------------------------------------------------------------

def _witness(c1, c2, e: PsiEncoding) -> Witness:
    r1, r2 = c1.to_rule(), c2.to_rule()
    return Witness(e, run(r1, e).profile, run(r2, e).profile)


def _witnesses(c1, c2, res: SearchResult) -> tuple[Witness, ...]:
    out = []
    for e in (res.refutes_le, res.refutes_ge):
        if e is not None and all(w.sequence != e for w in out):
            out.append(_witness(c1, c2, e))
    return tuple(out)


def _hunt(c1, c2, budget: Budget) -> tuple[Witness, ...]:
    """Witnesses for a known incomparability, widening the search if needed."""
    b = budget
    for _ in range(6):
        res = bounded_search(c1, c2, b)
        if res.refutes_le is not None and res.refutes_ge is not None:
            return _witnesses(c1, c2, res)
        b = Budget(b.max_levels + 2, b.max_count)
    return ()


def scaled_budget(budget: Budget, c1: CanonicalRule, c2: CanonicalRule) -> Budget:
    """Raise the count bound to one past the largest finite exponent of either rule."""
    need = max(c1.max_finite_count, c2.max_finite_count) + 1
    if need <= budget.max_count:
        return budget
    return Budget(budget.max_levels, need)


def compare(r1, r2, budget: Budget = DEFAULT_BUDGET) -> OrderVerdict:
    """Relation of ``r1`` to ``r2`` in the deletion order."""
    c1, c2 = factorize(r1), factorize(r2)
    budget = scaled_budget(budget, c1, c2)
    got = _structural(c1, c2)
    if got is not None:
        rel, method = got
        if rel is Relation.INCOMPARABLE:
            return OrderVerdict(rel, method, True, _hunt(c1, c2, budget), budget)
        return OrderVerdict(rel, method, True, (), budget)
    res = bounded_search(c1, c2, budget)
    return _from_search(c1, c2, res, "bounded-search")


def _from_search(c1, c2, res: SearchResult, method: str) -> OrderVerdict:
    le_refuted = res.refutes_le is not None
    ge_refuted = res.refutes_ge is not None
    if le_refuted and ge_refuted:
        return OrderVerdict(Relation.INCOMPARABLE, method, True, _witnesses(c1, c2, res), res.budget)
    if ge_refuted:
        surviving = Relation.LESS.value
    elif le_refuted:
        surviving = Relation.GREATER.value
    else:
        surviving = "Less or Greater"
    return OrderVerdict(Relation.UNDECIDED, method, False, _witnesses(c1, c2, res),
                        res.budget, surviving)


def kernel_compare(r1, r2, budget: Budget = DEFAULT_BUDGET) -> OrderVerdict:
    """Compare by kernels: the sequences each rule deletes entirely.

    Only search evidence is used, so a one-sided result is reported as a
    ``Less``/``Greater`` candidate with ``exact`` unset.
    """
    c1, c2 = factorize(r1), factorize(r2)
    budget = scaled_budget(budget, c1, c2)
    if c1 == c2:
        return OrderVerdict(Relation.EQUAL, "canonical-form", True, (), budget)
    res = bounded_search(c1, c2, budget, mode="kernel")
    le_refuted = res.refutes_le is not None
    ge_refuted = res.refutes_ge is not None
    wit = _witnesses(c1, c2, res)
    if le_refuted and ge_refuted:
        return OrderVerdict(Relation.INCOMPARABLE, "bounded-kernel-search", True, wit, budget)
    if ge_refuted:
        return OrderVerdict(Relation.LESS, "bounded-kernel-search", False, wit, budget, "Less")
    if le_refuted:
        return OrderVerdict(Relation.GREATER, "bounded-kernel-search", False, wit, budget, "Greater")
    return OrderVerdict(Relation.UNDECIDED, "bounded-kernel-search", False, (), budget,
                        "Less or Greater")


# -- classification -----------------------------------------------------------

def _atom_omega(f: Factor) -> bool:
    runs = f.omega.runs
    return not f.omega.alternating and len(runs) >= 2 and runs[-2][1] == INF


def classify(rule) -> Classification:
    c = factorize(rule)
    if c == LEAST:
        return Classification.LEAST
    if c.finite and len(c.prefix) == 1:
        f = c.prefix[0]
        if f.omega.alternating and f.bits != (1, 1):
            return Classification.ATOM
        if f.bits == (1, 1) and _atom_omega(f):
            return Classification.ATOM
    if c.finite and len(c.prefix) == 2 and c.prefix[1] == LEAST.prefix[0]:
        f = c.prefix[0]
        if f.bits == (1, 1) and _atom_omega(f):
            return Classification.ATOM
    if all(f.omega.single_letter and f.bits != (1, 1) for f in c.factors()):
        return Classification.MAXIMAL
    return Classification.NONE


# name -> (rule text, expected classification)
LABELED_RULES: dict[str, tuple[str, Classification]] = {
    "least": ("(r4 r5)* r1 r2 r3", Classification.LEAST),
    "atom-r3": ("(r4 r5)* r3", Classification.ATOM),
    "atom-pess": ("(r4 r5)* r1 r3", Classification.ATOM),
    "atom-opt": ("(r4 r5)* r2 r3", Classification.ATOM),
    "atom-r4-inf": ("r4* r5 r1 r2 r3 (r4 r5)* r1 r2 r3", Classification.ATOM),
    "atom-r5-inf": ("r4 r5* r4 r1 r2 r3 (r4 r5)* r1 r2 r3", Classification.ATOM),
    "zero": ("r3*", Classification.MAXIMAL),
    "r4-zero": ("(r4 r3)*", Classification.MAXIMAL),
    "plus": ("(r1 r2 r3)*", Classification.NONE),
    "plus-least": ("r1 r2 r3 (r4 r5)* r1 r2 r3", Classification.NONE),
    "alt-zero": ("(r4 r5 r3)*", Classification.NONE),
    "r4-plus-zero": ("r4 r1 r2 r3 r3*", Classification.NONE),
}


def labeled_rules() -> dict:
    return {name: (parse(text), label) for name, (text, label) in LABELED_RULES.items()}
