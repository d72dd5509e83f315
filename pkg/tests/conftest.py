import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from symmax.canonical import well_formed
from symmax.core import PsiEncoding
from symmax.rules import Concat, Letter, Star

settings.register_profile("default", max_examples=100, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


# -- acceptance reporting -----------------------------------------------------

_CRITERIA: dict[int, tuple[str, list[str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    mark = _criterion_marks.get(report.nodeid)
    if mark is None:
        return
    n, title = mark
    _CRITERIA.setdefault(n, (title, []))[1].append(report.outcome)


_criterion_marks: dict[str, tuple[int, str]] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _criterion_marks[item.nodeid] = (m.args[0], m.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, outcomes = _CRITERIA[n]
        ok = outcomes and all(o == "passed" for o in outcomes)
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {title}")


# -- shared generators --------------------------------------------------------

def random_rule(rng: random.Random, depth: int = 4):
    """Random rule AST; not necessarily well formed."""
    if depth == 0 or rng.random() < 0.3:
        return Letter(rng.randint(1, 5))
    if rng.random() < 0.35:
        return Star(random_rule(rng, depth - 1))
    return Concat(tuple(random_rule(rng, depth - 1) for _ in range(rng.randint(2, 4))))


def random_wf_rules(seed: int, n: int, depth: int = 4) -> list:
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        r = random_rule(rng, depth)
        if well_formed(r):
            out.append(r)
    return out


def random_encoding(rng: random.Random, max_levels: int, max_count: int,
                    nonassociative: bool = True) -> PsiEncoding:
    q = rng.randint(1, max_levels)
    pairs = []
    for i in range(q):
        lo = 1 if (i == 0 and nonassociative) else 0
        while True:
            p, m = rng.randint(lo, max_count), rng.randint(lo, max_count)
            if p or m:
                break
        pairs.append((p, m))
    return PsiEncoding.from_pairs(pairs)


@st.composite
def rule_exprs(draw, depth: int = 3):
    if depth == 0 or draw(st.booleans()):
        return Letter(draw(st.integers(1, 5)))
    if draw(st.booleans()):
        return Star(draw(rule_exprs(depth - 1)))
    return Concat(tuple(draw(st.lists(rule_exprs(depth - 1), min_size=2, max_size=3))))


@st.composite
def encodings(draw, max_levels: int = 4, max_count: int = 3, nonassociative: bool = False):
    q = draw(st.integers(1, max_levels))
    pair = st.tuples(st.integers(0, max_count), st.integers(0, max_count)).filter(lambda t: t != (0, 0))
    top = st.tuples(st.integers(1, max_count), st.integers(1, max_count)) if nonassociative else pair
    return PsiEncoding.from_pairs([draw(top)] + [draw(pair) for _ in range(q - 1)])


@pytest.fixture
def rng():
    return random.Random(12345)
