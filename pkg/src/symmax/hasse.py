"""Hasse diagrams of finite rule families under the deletion order."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .canonical import canonical_print, factorize
from .order import Relation, compare
from .search import DEFAULT_BUDGET, Budget

__all__ = ["HasseGraph", "hasse", "to_dot"]


@dataclass(frozen=True)
class HasseGraph:
    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]      # (lower, upper) covering pairs
    undecided: tuple[tuple[str, str], ...]

    def as_dict(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "edges": [list(e) for e in self.edges],
            "undecided": [list(u) for u in self.undecided],
        }


def hasse(rules: Iterable, budget: Budget = DEFAULT_BUDGET) -> HasseGraph:
    """Covering relation among the exactly decided strict pairs.

    Rules are deduplicated by canonical form; pairs the comparison leaves
    undecided are reported separately and take no part in the reduction.
    """
    canon = {}
    for r in rules:
        c = factorize(r)
        canon.setdefault(canonical_print(c), c)
    nodes = tuple(sorted(canon))
    below = {n: set() for n in nodes}
    undecided = []
    for i, a in enumerate(nodes):
        for b in nodes[i + 1:]:
            v = compare(canon[a], canon[b], budget)
            if v.relation is Relation.LESS:
                below[b].add(a)
            elif v.relation is Relation.GREATER:
                below[a].add(b)
            elif v.relation is Relation.UNDECIDED:
                undecided.append((a, b))
    edges = []
    for upper in nodes:
        for lower in sorted(below[upper]):
            if not any(lower in below[mid] for mid in below[upper] if mid != lower):
                edges.append((lower, upper))
    return HasseGraph(nodes, tuple(edges), tuple(undecided))


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: HasseGraph) -> str:
    ids = {n: f"n{i}" for i, n in enumerate(g.nodes)}
    lines = ["digraph hasse {", "  rankdir=BT;", "  node [shape=box];"]
    for n in g.nodes:
        lines.append(f"  {ids[n]} [label={_quote(n)}];")
    for lo, up in g.edges:
        lines.append(f"  {ids[lo]} -> {ids[up]};")
    lines.append("}")
    if g.undecided:
        lines.append("// undecided pairs (not part of the reduction):")
        for a, b in g.undecided:
            lines.append(f"// {ids[a]} -> {ids[b]} [style=dashed, dir=none];")
    return "\n".join(lines) + "\n"
