"""Command-line front end.

Exit codes: 0 success (or a decided relation), 1 usage error or a failed
check, 2 parse error, 3 rule not well formed, 4 comparison undecided within
the budget, 5 domain error.
"""
from __future__ import annotations

import argparse
import ast
import json
import os
import re
import sys
from typing import Sequence

from . import canonical, core, engine, oracle, order, rules
from .hasse import hasse as build_hasse, to_dot
from .errors import NotWellFormed, ParseError, SymmaxError, UnknownRule
from .search import DEFAULT_BUDGET, Budget

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_NOT_WF, EXIT_UNDECIDED, EXIT_DOMAIN = range(6)

BUDGET_ENV = "SYMMAX_BUDGET"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


# -- helpers ------------------------------------------------------------------

def _emit(args, data, text: str):
    if args.json:
        print(json.dumps(data, indent=2, ensure_ascii=False))
    else:
        print(text)


def _budget(args, env) -> Budget:
    base = DEFAULT_BUDGET
    raw = env.get(BUDGET_ENV)
    if raw:
        try:
            base = Budget.parse(raw)
        except ValueError:
            raise UsageError(f"{BUDGET_ENV} must look like 'Q,B', got {raw!r}") from None
    q = args.max_levels if args.max_levels is not None else base.max_levels
    b = args.max_count if args.max_count is not None else base.max_count
    try:
        return Budget(q, b)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _rules_from(args, need: int | None = None) -> list:
    out = [rules.parse(text) for text in (args.rule or [])]
    if getattr(args, "rules_file", None):
        out += rules.read_rules_file(args.rules_file)
    if need is not None and len(out) != need:
        raise UsageError(f"expected exactly {need} rule(s), got {len(out)}")
    if not out:
        raise UsageError("no rule given")
    return out


def _sequence(args):
    if args.seq is not None and getattr(args, "encoding", None) is not None:
        raise UsageError("give either --seq or --encoding, not both")
    if getattr(args, "encoding", None) is not None:
        return core.parse_encoding(args.encoding)
    if args.seq is None:
        raise UsageError("a sequence is required (--seq)")
    return core.encode(core.parse_sequence(args.seq))


def _pairs_json(e: core.PsiEncoding):
    return [{"magnitude": lv.magnitude, "pos": lv.pos, "neg": lv.neg} for lv in e.levels]


def _bracketed(text: str) -> int:
    """Evaluate an explicitly bracketed expression such as ``((-3, 3), 2)``."""
    try:
        tree = ast.literal_eval(text)
    except (ValueError, SyntaxError):
        raise ParseError(f"not a bracketed expression: {text!r}") from None

    def ev(node):
        if isinstance(node, int) and not isinstance(node, bool):
            return node
        if isinstance(node, tuple) and len(node) == 2:
            return core.symmax(ev(node[0]), ev(node[1]))
        raise ParseError(f"expected an integer or a pair, got {node!r}")

    return ev(tree)


# -- subcommands --------------------------------------------------------------

def cmd_eval(args, env):
    if args.expr is not None:
        v = _bracketed(args.expr)
        _emit(args, {"expression": args.expr, "value": v}, str(v))
        return EXIT_OK
    [rule] = _rules_from(args, 1)
    if not canonical.well_formed(rule):
        raise NotWellFormed(f"{rules.to_text(rule)} is not well formed")
    e = _sequence(args)
    res = engine.run(rule, e, trace=args.trace)
    v = res.value
    data = {"rule": rules.to_text(rule), "encoding": core.format_encoding(e),
            "residue": core.format_encoding(res.encoding), "value": v}
    lines = []
    if args.trace:
        data["trace"] = [str(s) for s in res.trace]
        lines += [str(s) for s in res.trace]
    lines.append(str(v))
    _emit(args, data, "\n".join(lines))
    return EXIT_OK


def cmd_encode(args, env):
    e = _sequence(args)
    data = {"theta": list(e.theta), "pairs": [list(p) for p in e.pairs], "levels": _pairs_json(e)}
    text = f"theta: {' '.join(map(str, e.theta)) or 'ε'}\npsi: {core.format_encoding(e)}"
    _emit(args, data, text)
    return EXIT_OK


def cmd_canon(args, env):
    [rule] = _rules_from(args, 1)
    c = canonical.factorize(rule)
    text = canonical.canonical_print(c)
    data = {"canonical": text, "finite": c.finite,
            "prefix": [str(f) for f in c.prefix],
            "cycle": None if c.cycle is None else [str(f) for f in c.cycle]}
    _emit(args, data, text)
    return EXIT_OK


def cmd_equiv(args, env):
    a, b = _rules_from(args, 2)
    same = canonical.equivalent(a, b)
    data = {"equivalent": same, "canonical": [canonical.canonical_print(a), canonical.canonical_print(b)]}
    _emit(args, data, "equivalent" if same else "not equivalent")
    return EXIT_OK if same else EXIT_USAGE


def cmd_wellformed(args, env):
    [rule] = _rules_from(args, 1)
    ok = canonical.well_formed(rule)
    _emit(args, {"rule": rules.to_text(rule), "well_formed": ok},
          "well formed" if ok else "not well formed")
    return EXIT_OK if ok else EXIT_NOT_WF


def _verdict_text(v: order.OrderVerdict) -> str:
    lines = [v.relation.value]
    lines.append(f"method: {v.method}" + ("" if v.exact else " (bounded)"))
    if v.budget is not None and not v.exact:
        lines.append(f"budget: {v.budget}")
    if v.surviving:
        lines.append(f"surviving: {v.surviving}")
    for w in v.witnesses:
        lines.append(f"witness: {core.format_encoding(w.sequence)} "
                     f"deleted {list(w.first.deleted)} vs {list(w.second.deleted)}")
    return "\n".join(lines)


def cmd_compare(args, env):
    a, b = _rules_from(args, 2)
    budget = _budget(args, env)
    v = order.kernel_compare(a, b, budget) if args.kernel else order.compare(a, b, budget)
    _emit(args, v.as_dict(), _verdict_text(v))
    return EXIT_UNDECIDED if v.relation is order.Relation.UNDECIDED else EXIT_OK


def cmd_classify(args, env):
    [rule] = _rules_from(args, 1)
    c = order.classify(rule)
    _emit(args, {"rule": canonical.canonical_print(rule), "class": c.value}, c.value)
    return EXIT_OK


def _labels_out(args, items):
    texts = [t.text() for t in items]
    data = [{"canonical": t.text(), "prefix": [list(x) for x in t.prefix],
             "cycle": [list(x) for x in t.cycle]} for t in items]
    _emit(args, data, "\n".join(texts))


def cmd_meet(args, env):
    a, b = _rules_from(args, 2)
    _labels_out(args, [order.meet123(order.R123Labels.of(a), order.R123Labels.of(b))])
    return EXIT_OK


def cmd_join(args, env):
    a, b = _rules_from(args, 2)
    _labels_out(args, [order.join123(order.R123Labels.of(a), order.R123Labels.of(b))])
    return EXIT_OK


def cmd_interval(args, env):
    [rule] = _rules_from(args, 1)
    _labels_out(args, order.interval123(order.R123Labels.of(rule)))
    return EXIT_OK


def cmd_hasse(args, env):
    rs = _rules_from(args)
    g = build_hasse(rs, _budget(args, env))
    if args.json:
        print(json.dumps(g.as_dict(), indent=2, ensure_ascii=False))
    else:
        sys.stdout.write(to_dot(g))
    return EXIT_OK


def cmd_oracle_bracketings(args, env):
    vals = core.parse_sequence(args.seq)
    ach = oracle.achievable_values(vals, cap=args.cap)
    _emit(args, {"sequence": list(vals), "achievable": ach.sorted()},
          " ".join(map(str, ach.sorted())))
    return EXIT_OK


def cmd_oracle_check(args, env):
    vals = core.parse_sequence(args.seq)
    rs = _rules_from(args) if (args.rule or args.rules_file) else list(rules.registry().values())
    rep = oracle.check_rules(vals, rs, cap=args.cap)
    lines = [f"achievable: {' '.join(map(str, rep.achievable))}"]
    lines += [f"{k} -> {v}" for k, v in rep.rule_values.items()]
    lines += [f"constructed {k}: {v}" for k, v in rep.constructed.items()]
    lines += [f"FAIL {f}" for f in rep.failures]
    lines.append("pass" if rep.ok else "fail")
    _emit(args, rep.as_dict(), "\n".join(lines))
    return EXIT_OK if rep.ok else EXIT_USAGE


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="symmax", description="Symmetric-maximum computation rules.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help, rule=True, seq=False, budget=False):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        if rule:
            sp.add_argument("--rule", action="append", metavar="RULE", help="rule text; repeatable")
        if seq:
            sp.add_argument("--seq", help='comma-separated integers, e.g. "3,2,1,0,-2"')
            sp.add_argument("--encoding", help='"(p,m)(p,m)..." or "n:(p,m);..."')
        if budget:
            sp.add_argument("--max-levels", type=int, help="search bound Q on levels")
            sp.add_argument("--max-count", type=int, help="search bound B on counts")
        sp.set_defaults(func=func)
        return sp

    sp = add("eval", cmd_eval, "evaluate a sequence under a rule", seq=True)
    sp.add_argument("--trace", action="store_true", help="print each effective step")
    sp.add_argument("--expr", help='explicitly bracketed expression, e.g. "((-3, 3), 2)"')
    add("encode", cmd_encode, "occurrence-count encoding of a sequence", rule=False, seq=True)
    add("canon", cmd_canon, "factorized canonical form")
    add("equiv", cmd_equiv, "test equivalence of two rules")
    add("wellformed", cmd_wellformed, "test well-formedness")
    sp = add("compare", cmd_compare, "relation of two rules in the deletion order", budget=True)
    sp.add_argument("--kernel", action="store_true", help="compare kernels instead of profiles")
    add("classify", cmd_classify, "least / atom / maximal")
    add("meet", cmd_meet, "meet of two rules over r1, r2, r3")
    add("join", cmd_join, "join of two rules over r1, r2, r3")
    add("interval", cmd_interval, "all rules between the least r123 rule and RULE")
    sp = add("hasse", cmd_hasse, "DOT Hasse diagram of a rule family", budget=True)
    sp.add_argument("--rules-file", help="one rule per line, '#' comments")

    op = sub.add_parser("oracle", help="bracketing oracle")
    osub = op.add_subparsers(dest="oracle_command", required=True, parser_class=_Parser)
    for name, func, help in (("bracketings", cmd_oracle_bracketings, "all achievable values"),
                             ("check", cmd_oracle_check, "check rules against the oracle")):
        sp = osub.add_parser(name, help=help)
        sp.add_argument("--seq", required=True)
        sp.add_argument("--cap", type=int, default=oracle.DEFAULT_CAP,
                        help="maximum number of occurrences")
        sp.add_argument("--json", action="store_true")
        if name == "check":
            sp.add_argument("--rule", action="append", metavar="RULE")
            sp.add_argument("--rules-file")
        sp.set_defaults(func=func)
    return p


_VALUE_FLAGS = ("--seq", "--expr", "--encoding")
_NEGATIVE = re.compile(r"-\d")


def _glue_negative_values(argv: list[str]) -> list[str]:
    """Let ``--seq -3,3,2`` through: argparse would read ``-3,3,2`` as an option."""
    out = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_FLAGS and i + 1 < len(argv) and _NEGATIVE.match(argv[i + 1]):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def main(argv: Sequence[str] | None = None, env=None) -> int:
    env = os.environ if env is None else env
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, env)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, UnknownRule) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NotWellFormed as exc:
        print(f"not well formed: {exc}", file=sys.stderr)
        return EXIT_NOT_WF
    except SymmaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
