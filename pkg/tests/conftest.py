from fractions import Fraction
from itertools import combinations

import pytest

from hardcore_lp.graph import (
    Graph,
    bits,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    generalized_petersen,
    naive_cubic_tf_corpus,
)

SAMPLE_LAMBDAS = (Fraction(1, 4), Fraction(1), Fraction(4))


def brute_force_independent_sets(g: Graph):
    """All independent sets by checking every vertex subset (2^n)."""
    out = []
    for m in range(1 << g.n):
        vs = bits(m)
        if all(not g.has_edge(u, v) for u, v in combinations(vs, 2)):
            out.append(frozenset(vs))
    return out


def brute_force_polynomial(g: Graph) -> list[int]:
    coeffs = [0] * (g.n + 1)
    for s in brute_force_independent_sets(g):
        coeffs[len(s)] += 1
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


@pytest.fixture(scope="session")
def cubic_corpus():
    """Connected cubic triangle-free graphs on <= 12 vertices plus GP(7,2)."""
    graphs = [generalized_petersen(7, 2)]
    for n in (6, 8, 10, 12):
        graphs.extend(naive_cubic_tf_corpus(n))
    return graphs


@pytest.fixture(scope="session")
def small_regular_corpus():
    """Regular graphs small enough for local-graph enumeration, with and without triangles."""
    graphs = [
        complete_graph(2), complete_graph(3), complete_graph(4), complete_graph(5),
        cycle_graph(4), cycle_graph(5), cycle_graph(6),
        complete_bipartite(2), complete_bipartite(3),
        generalized_petersen(5, 2), generalized_petersen(7, 2),
        # triangular prism: cubic with triangles
        Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)]),
        # two disjoint K4s
        Graph.from_edges(8, [(a + o, b + o) for o in (0, 4) for a, b in combinations(range(4), 2)]),
    ]
    graphs.extend(naive_cubic_tf_corpus(8))
    return graphs


# acceptance results, filled in by tests/test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
