import pytest

from homent.graph import Graph


def G(n, *edges):
    return Graph(n, frozenset(edges))


# Five-vertex reference networks with known (beta0, beta1)
# and clique-complex dimension.
SINGLE_EDGE = G(5, (0, 1))
TRIANGLE_PLUS_TWO = G(5, (0, 1), (1, 2), (0, 2))
ACYCLIC_SERIES = [
    SINGLE_EDGE,                                      # beta (4, 0)
    G(5, (0, 1), (0, 4)),                             # beta (3, 0)
    G(5, (0, 1), (2, 3), (0, 4)),                     # beta (2, 0)
    G(5, (0, 1), (1, 2), (2, 3)),                     # beta (2, 0)
    G(5, (0, 1), (1, 2), (2, 3), (3, 4)),             # beta (1, 0)
]
CYCLIC_SERIES = [
    G(5, (0, 1), (1, 2), (2, 3), (0, 3)),                          # (2, 1)
    G(5, (0, 1), (1, 2), (2, 3), (3, 4), (0, 4)),                  # (1, 1)
    G(5, (0, 1), (1, 2), (3, 4), (0, 2), (2, 4), (0, 3)),          # (1, 1), dim 2
    G(5, (0, 1), (1, 2), (2, 3), (0, 4), (1, 3), (2, 4), (0, 3)),  # (1, 1), dim 2
    G(5, (0, 1), (1, 2), (2, 3), (0, 4), (2, 4), (0, 3)),          # (1, 2)
]
REFERENCE_NETWORKS = ACYCLIC_SERIES + CYCLIC_SERIES
REFERENCE_BETTI = [(4, 0), (3, 0), (2, 0), (2, 0), (1, 0), (2, 1), (1, 1), (1, 1), (1, 1), (1, 2)]
REFERENCE_DIM = [1, 1, 1, 1, 1, 1, 1, 2, 2, 1]
TWIN_NETWORKS = [G(5, (0, 1), (2, 3), (0, 4)), G(5, (0, 1), (1, 2), (2, 3))]
TWIN_BETTI = [(2, 0), (2, 0)]
PENTAGON = CYCLIC_SERIES[1]
PATH5 = ACYCLIC_SERIES[4]


@pytest.fixture
def pentagon():
    return PENTAGON


ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line for an acceptance criterion."""
    def _report(number, title, ok, detail=""):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}  {detail}".rstrip()
        print(line)
        ACCEPTANCE_LINES.append(line)
        return ok
    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
