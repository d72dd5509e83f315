"""Computation-rule words over the alphabet r1..r5 with Kleene star.

Grammar (whitespace between tokens is optional)::

    rule := item+
    item := atom "*"?
    atom := "r1" | ... | "r5" | "ρ1" | ... | "ρ5" | "ε" | "@name" | "(" rule ")"

A parenthesised group holding a single item is that item; a group of two or
more items is a nested :class:`Concat`, so ``parse(to_text(e)) == e`` for every
tree whose concatenations have zero or at least two children.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from .errors import ParseError, UnknownRule

__all__ = [
    "Letter",
    "Concat",
    "Star",
    "RuleExpr",
    "EMPTY",
    "parse",
    "to_text",
    "registry",
    "lookup",
    "letters",
    "concat",
    "read_rules_file",
    "parse_rules_text",
]


@dataclass(frozen=True)
class Letter:
    index: int  # 1..5

    def __post_init__(self):
        if self.index not in (1, 2, 3, 4, 5):
            raise ValueError(f"no elementary rule r{self.index}")

    def __str__(self):
        return f"r{self.index}"


@dataclass(frozen=True)
class Concat:
    items: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Star:
    body: "RuleExpr"

    def __str__(self):
        return to_text(self)


RuleExpr = Union[Letter, Concat, Star]
EMPTY = Concat(())


def concat(*items: RuleExpr) -> RuleExpr:
    """Concatenate, collapsing the one-item case."""
    if len(items) == 1:
        return items[0]
    return Concat(tuple(items))


def letters(expr: RuleExpr) -> set[int]:
    if isinstance(expr, Letter):
        return {expr.index}
    if isinstance(expr, Star):
        return letters(expr.body)
    out: set[int] = set()
    for it in expr.items:
        out |= letters(it)
    return out


# -- registry -----------------------------------------------------------------

_REGISTRY_TEXT = {
    "zero": "r3*",
    "plus": "(r1 r2 r3)*",
    "least": "(r4 r5)* r1 r2 r3",
    "pess": "(r4 r5)* r1 r3",
    "opt": "(r4 r5)* r2 r3",
    "left": "(r1 r3)*",
    "right": "(r2 r3)*",
}

_REGISTRY: dict[str, RuleExpr] = {}


def registry() -> dict[str, RuleExpr]:
    """The named well-formed rules, keyed without the leading ``@``."""
    if not _REGISTRY:
        for name, text in _REGISTRY_TEXT.items():
            _REGISTRY[name] = parse(text, names={})
    return dict(_REGISTRY)


def lookup(name: str, names: Mapping[str, RuleExpr] | None = None) -> RuleExpr:
    table = registry() if names is None else names
    key = name[1:] if name.startswith("@") else name
    try:
        return table[key]
    except KeyError:
        raise UnknownRule(f"unknown rule name @{key}") from None


# -- parser -------------------------------------------------------------------

_LETTER_PREFIXES = ("r", "ρ")


class _Parser:
    def __init__(self, text: str, names):
        self.text = text
        self.pos = 0
        self.names = names

    def error(self, message, pos=None):
        return ParseError(message, self.pos if pos is None else pos, self.text)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else None

    def parse(self) -> RuleExpr:
        expr = self.rule()
        if self.peek() is not None:
            raise self.error(f"unexpected {self.text[self.pos]!r}")
        return expr

    def rule(self) -> RuleExpr:
        items = []
        while True:
            ch = self.peek()
            if ch is None or ch == ")":
                break
            items.append(self.item())
        if not items:
            raise self.error("expected a rule")
        return items[0] if len(items) == 1 else Concat(tuple(items))

    def item(self) -> RuleExpr:
        atom = self.atom()
        if self.peek() == "*":
            self.pos += 1
            return Star(atom)
        return atom

    def atom(self) -> RuleExpr:
        start = self.pos
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            inner = self.rule()
            if self.peek() != ")":
                raise self.error("missing ')'", start if self.peek() is None else None)
            self.pos += 1
            return inner
        if ch in _LETTER_PREFIXES:
            self.pos += 1
            digits = ""
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                digits += self.text[self.pos]
                self.pos += 1
            if digits not in ("1", "2", "3", "4", "5"):
                raise self.error(f"unknown rule letter {ch}{digits}", start)
            return Letter(int(digits))
        if ch == "ε":
            self.pos += 1
            return EMPTY
        if self.text.startswith("eps", self.pos):
            self.pos += 3
            return EMPTY
        if ch == "@":
            self.pos += 1
            name = ""
            while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] in "_-"):
                name += self.text[self.pos]
                self.pos += 1
            if not name:
                raise self.error("expected a rule name after '@'", start)
            try:
                return lookup(name, self.names)
            except UnknownRule as exc:
                raise ParseError(str(exc), start, self.text) from None
        if ch is None:
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected {ch!r}")


def parse(text: str, names: Mapping[str, RuleExpr] | None = None) -> RuleExpr:
    """Parse a rule; ``@name`` references resolve against ``names`` (default: the registry)."""
    return _Parser(text, registry() if names is None else names).parse()


# -- printer ------------------------------------------------------------------

def _item_text(expr: RuleExpr) -> str:
    if isinstance(expr, Concat) and len(expr.items) >= 2:
        return "(" + to_text(expr) + ")"
    return to_text(expr)


def to_text(expr: RuleExpr) -> str:
    if isinstance(expr, Letter):
        return f"r{expr.index}"
    if isinstance(expr, Star):
        body = expr.body
        if isinstance(body, Letter) or (isinstance(body, Concat) and not body.items):
            return to_text(body) + "*"
        return "(" + to_text(body) + ")*"
    if not expr.items:
        return "ε"
    return " ".join(_item_text(it) for it in expr.items)


# -- rules files --------------------------------------------------------------

def parse_rules_text(text: str, names: Mapping[str, RuleExpr] | None = None) -> list[RuleExpr]:
    """One rule per line; ``#`` starts a comment; blank lines are skipped."""
    rules = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rules.append(parse(line, names))
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
    return rules


def read_rules_file(path, names: Mapping[str, RuleExpr] | None = None) -> list[RuleExpr]:
    with open(path, encoding="utf-8") as fh:
        return parse_rules_text(fh.read(), names)
