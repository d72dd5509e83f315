"""Exhaustive bounded comparison of two rules over every short sequence.

A rule in factorized form reads the levels of an encoding top-down through a
window of at most two levels (the current top and the level below it), and a
level's fate is settled by the levels at or above it: the deletions on the
first ``j`` levels of a sequence are those of its ``j``-level prefix.  So the
search walks prefixes breadth-first, feeding one level at a time to a pair of
streaming machines, and merges prefixes whose joint state (machine positions,
window contents, comparison flags) coincides.  Every prefix is itself a
candidate sequence, so the walk covers all encodings with at most ``Q`` levels
and counts at most ``B`` while visiting far fewer nodes than there are
sequences.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .canonical import INF, CanonicalRule, factorize
from .core import PsiEncoding

__all__ = [
    "Budget",
    "DEFAULT_BUDGET",
    "SearchResult",
    "bounded_search",
    "machine_profile",
]


@dataclass(frozen=True)
class Budget:
    max_levels: int = 6
    max_count: int = 3

    def __post_init__(self):
        if self.max_levels < 1 or self.max_count < 1:
            raise ValueError("budget bounds must be at least 1")

    @classmethod
    def parse(cls, text: str) -> "Budget":
        q, b = (int(x) for x in text.split(","))
        return cls(q, b)

    def __str__(self):
        return f"Q={self.max_levels},B={self.max_count}"


DEFAULT_BUDGET = Budget()


# -- compiled factor streams --------------------------------------------------

@dataclass(frozen=True)
class _Compiled:
    factors: tuple  # (alternating, runs, a, b); runs use None for an infinite count
    next: tuple     # successor index of each factor, None at the end of a finite stream


@lru_cache(maxsize=1024)
def _compile(c: CanonicalRule) -> _Compiled:
    fs = list(c.prefix) + list(c.cycle or ())
    factors = tuple(
        (f.omega.alternating,
         tuple((l, None if n == INF else int(n)) for l, n in f.omega.runs),
         f.a, f.b)
        for f in fs)
    nxt = []
    for i in range(len(fs)):
        if i + 1 < len(fs):
            nxt.append(i + 1)
        else:
            nxt.append(len(c.prefix) if c.cycle else None)
    return _Compiled(factors, tuple(nxt))


# machine state: (phase, factor index, run index, used, top, second)
# phase: "start" | "top" (awaiting a new top) | "om" (awaiting a second level) | "done"
# top/second: (level id, p, m, original pair) or None
_START = ("start", 0, 0, 0, None, None)


def _advance(comp: _Compiled, st, feed):
    """Resume a paused machine with ``feed = (level id, (p, m))`` or None (end of sequence).

    Returns the new state and a list of ``(level id, (dp, dm))`` settlements.
    Window entries are ``(level id, p, m, original pair)``.
    """
    phase, fi, ri, used, top, sec = st
    events = []

    def settle(entry):
        idx, p, m, (op, om) = entry
        events.append((idx, (op - p, om - m)))

    if phase == "done":
        if feed is not None:
            events.append((feed[0], (0, 0)))
        return st, events
    eof = feed is None
    if phase in ("start", "top"):
        if eof:
            return ("done", fi, 0, 0, None, None), events
        top = (feed[0], feed[1][0], feed[1][1], feed[1])
        phase = "begin"
    elif phase == "om" and not eof:
        sec = (feed[0], feed[1][0], feed[1][1], feed[1])

    while True:
        if phase == "begin":
            if fi is None or not (top[1] > 0 and top[2] > 0):
                settle(top)
                if sec is not None:
                    settle(sec)
                return ("done", fi, 0, 0, None, None), events
            ri, used, phase = 0, 0, "om"
        if phase == "om":
            alternating, runs, a, b = comp.factors[fi]
            if alternating:
                # (r4 r5)* wipes out every level below the top
                if sec is not None:
                    events.append((sec[0], sec[3]))
                    sec = None
                if not eof:
                    return ("om", fi, ri, used, top, None), events
            else:
                while ri < len(runs):
                    letter, count = runs[ri]
                    if count is not None and used >= count:
                        ri, used = ri + 1, 0
                        continue
                    if sec is None:
                        if eof:
                            ri, used = ri + 1, 0
                            continue
                        return ("om", fi, ri, used, top, None), events
                    idx, p, m, o = sec
                    if (letter == 4 and p == 0) or (letter == 5 and m == 0):
                        ri, used = ri + 1, 0
                        continue
                    if letter == 4:
                        p = 0
                    else:
                        m = 0
                    used += 1
                    if p == 0 and m == 0:
                        events.append((idx, o))
                        sec = None
                    else:
                        sec = (idx, p, m, o)
            phase = "bits"
        if phase == "bits":
            _, _, a, b = comp.factors[fi]
            idx, p, m, o = top
            if a and p > 1:
                p = 1
            if b and m > 1:
                m = 1
            c = min(p, m)
            p, m = p - c, m - c
            fi = comp.next[fi]
            if p == 0 and m == 0:
                events.append((idx, o))
                if sec is not None:
                    top, sec = sec, None
                    phase = "begin"
                    continue
                if eof:
                    return ("done", fi, 0, 0, None, None), events
                return ("top", fi, 0, 0, None, None), events
            settle((idx, p, m, o))
            if sec is not None:
                settle(sec)
            return ("done", fi, 0, 0, None, None), events


def machine_profile(rule, e: PsiEncoding) -> tuple[tuple[int, int], ...]:
    """Deletion counts per level of ``e`` computed by the streaming machine."""
    comp = _compile(factorize(rule))
    out = {}
    st = _START
    for i, lv in enumerate(e.levels):
        st, ev = _advance(comp, st, (i, lv.pair))
        out.update(ev)
    st, ev = _advance(comp, st, None)
    out.update(ev)
    return tuple(out.get(i, (0, 0)) for i in range(len(e.levels)))


# -- product search -----------------------------------------------------------

@dataclass(frozen=True)
class SearchResult:
    """Outcome of a bounded comparison of ``A`` against ``B``.

    ``refutes_le`` is a sequence on which ``A <= B`` fails (A deletes less
    than B somewhere) and ``refutes_ge`` one on which ``B <= A`` fails.
    A witness is strict when on that sequence the other inclusion holds.
    """

    mode: str
    budget: Budget
    refutes_le: Optional[PsiEncoding]
    refutes_ge: Optional[PsiEncoding]
    le_strict: bool
    ge_strict: bool
    exhaustive: bool
    states: int


def _pairs(max_count: int, nonassociative: bool):
    out = [(p, m) for p in range(max_count + 1) for m in range(max_count + 1)
           if (p and m if nonassociative else p or m)]
    return sorted(out, key=lambda t: (t[0] + t[1], t[0]))


def _fold(mode, flags, orig, da, db):
    f1, f2 = flags
    if mode == "profile":
        if da[0] < db[0] or da[1] < db[1]:
            f1 = True
        if db[0] < da[0] or db[1] < da[1]:
            f2 = True
    else:
        if da != orig:
            f1 = False
        if db != orig:
            f2 = False
    return (f1, f2)


def _category(mode, flags):
    """(refutes A<=B, refutes B<=A) for a finished sequence."""
    if mode == "profile":
        return flags
    a_all, b_all = flags
    return (b_all and not a_all, a_all and not b_all)


class _Node:
    __slots__ = ("ma", "mb", "pending", "flags", "path")

    def __init__(self, ma, mb, pending, flags, path):
        self.ma, self.mb, self.pending, self.flags, self.path = ma, mb, pending, flags, path


def _apply(mode, node_pending, flags, events_a, events_b):
    pending = dict(node_pending)
    for idx, d in events_a:
        orig, fa, fb = pending[idx]
        pending[idx] = (orig, d, fb)
    for idx, d in events_b:
        orig, fa, fb = pending[idx]
        pending[idx] = (orig, fa, d)
    for idx in [i for i, (_, fa, fb) in pending.items() if fa is not None and fb is not None]:
        orig, fa, fb = pending.pop(idx)
        flags = _fold(mode, flags, orig, fa, fb)
    return pending, flags


def _key(node: _Node):
    ids = sorted(node.pending)
    rank = {idx: r for r, idx in enumerate(ids)}

    def remap(st):
        phase, fi, ri, used, top, sec = st
        top = None if top is None else (rank[top[0]],) + top[1:]
        sec = None if sec is None else (rank[sec[0]],) + sec[1:]
        return (phase, fi, ri, used, top, sec)

    return (remap(node.ma), remap(node.mb),
            tuple(node.pending[i] for i in ids), node.flags)


def bounded_search(a, b, budget: Budget = DEFAULT_BUDGET, mode: str = "profile",
                   want: str = "both") -> SearchResult:
    """Compare rules ``a`` and ``b`` on every nonassociative encoding within ``budget``.

    ``mode`` is "profile" (deletion-profile inclusion) or "kernel" (total
    deletion).  ``want`` picks the stopping goal: "both" stops once strict
    witnesses exist in both directions, "le" once ``A <= B`` is refuted, "ge"
    once ``B <= A`` is refuted.
    """
    if mode not in ("profile", "kernel"):
        raise ValueError(f"unknown search mode {mode!r}")
    ca, cb = _compile(factorize(a)), _compile(factorize(b))
    init_flags = (False, False) if mode == "profile" else (True, True)
    found = {}  # category -> path

    def done():
        le = (True, False) in found or (want != "both" and (True, True) in found)
        ge = (False, True) in found or (want != "both" and (True, True) in found)
        if want == "le":
            return le
        if want == "ge":
            return ge
        return le and ge

    frontier = [_Node(_START, _START, {}, init_flags, ())]
    states = 0
    complete = True
    for depth in range(budget.max_levels):
        pairs = _pairs(budget.max_count, nonassociative=(depth == 0))
        nxt: dict = {}
        for node in frontier:
            for pair in pairs:
                ma, ev_a = _advance(ca, node.ma, (depth, pair))
                mb, ev_b = _advance(cb, node.mb, (depth, pair))
                pend = dict(node.pending)
                pend[depth] = (pair, None, None)
                pend, flags = _apply(mode, pend, node.flags, ev_a, ev_b)
                child = _Node(ma, mb, pend, flags, node.path + (pair,))
                k = _key(child)
                if k in nxt:
                    continue
                nxt[k] = child
                # the prefix itself is a candidate sequence
                _, ea = _advance(ca, ma, None)
                _, eb = _advance(cb, mb, None)
                _, fin = _apply(mode, pend, flags, ea, eb)
                cat = _category(mode, fin)
                if cat != (False, False) and cat not in found:
                    found[cat] = child.path
            if done():
                complete = False
                break
        states += len(nxt)
        frontier = list(nxt.values())
        if not complete:
            break
    strict_le = found.get((True, False))
    strict_ge = found.get((False, True))
    mixed = found.get((True, True))
    le_path = strict_le or mixed
    ge_path = strict_ge or mixed
    enc = lambda path: None if path is None else PsiEncoding.from_pairs(path)
    return SearchResult(
        mode=mode,
        budget=budget,
        refutes_le=enc(le_path),
        refutes_ge=enc(ge_path),
        le_strict=strict_le is not None,
        ge_strict=strict_ge is not None,
        exhaustive=complete,
        states=states,
    )
