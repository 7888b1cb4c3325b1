import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from villarceau.generators import Family, GridSpec, build  # noqa: E402
from villarceau.graph import all_pairs  # noqa: E402


@pytest.fixture(scope="session")
def graph_cache():
    cache = {}

    def get(family, m, n):
        key = (family, m, n)
        if key not in cache:
            g = build(GridSpec(Family(family), m, n))
            cache[key] = (g, all_pairs(g))
        return cache[key]

    return get


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line per acceptance criterion for the terminal summary."""
    holder = {}

    def record(label: str, detail: str = "") -> None:
        holder["label"], holder["detail"] = label, detail

    yield record
    rep = getattr(request.node, "rep_call", None)
    ok = rep is not None and rep.passed
    label = holder.get("label", request.node.name)
    ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}  {holder.get('detail', '')}".rstrip())


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
