import random

import pytest

from mbqnet.graphstate import Graph, measure_x, measure_y, measure_z
from mbqnet.stabilizer import StabTableau, states_equal


def random_graph(rng: random.Random, n: int, p: float = 0.4) -> Graph:
    edges = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges)


def rule_matches_oracle(g: Graph, node: int, basis: str, outcome: int,
                        special: int | None = None) -> bool:
    """Graph rule plus emitted corrections against a direct tableau measurement."""
    tab = StabTableau.from_graph(g)
    _, tab = tab.measure(node, basis, forced=outcome)
    if basis == "Z":
        g2, spec = measure_z(g, node, outcome)
    elif basis == "Y":
        g2, spec = measure_y(g, node, outcome)
    else:
        g2, spec = measure_x(g, node, special, outcome)
    tab = tab.apply_ops(spec.targets)
    expected = StabTableau.from_graph(g2, measured={node: (basis, outcome)})
    return states_equal(tab, expected)


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
