import pytest

from lgls.radio import DEFAULT_PARAMS
from lgls.topology import Node, build_comm_graph


@pytest.fixture
def params():
    return DEFAULT_PARAMS


def graph_from_points(points, params=DEFAULT_PARAMS):
    return build_comm_graph([Node(i, float(x), float(y)) for i, (x, y) in enumerate(points)], params)


def pair_graph(pairs, params=DEFAULT_PARAMS):
    """Graph whose nodes come in (tx, rx) pairs; returns graph and the id of link tx->rx per pair."""
    points = [p for pair in pairs for p in pair]
    g = graph_from_points(points, params)
    ids = []
    for k in range(len(pairs)):
        ids.append(next(l.id for l in g.links if l.tx == 2 * k and l.rx == 2 * k + 1))
    return g, ids


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance(request):
    """Record one summary line per acceptance criterion; printed at session end."""
    state = {}

    def record(criterion, passed, detail):
        state["done"] = True
        ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}")

    yield record
    if not state:
        ACCEPTANCE_LINES.append(f"[FAIL] {request.node.name}: aborted before reporting")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
