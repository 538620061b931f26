import json
import random
from itertools import permutations

import pytest

from conftest import random_graph, rule_matches_oracle
from mbqnet.cliffords import EXPONENT_TO_OP
from mbqnet.graphstate import (
    Graph,
    PauliFrame,
    graph_from_json,
    local_complement,
    logical_outcome,
    measure_x,
    measure_y,
    measure_z,
    physical_basis,
)
from mbqnet.stabilizer import StabTableau, states_equal


class TestGraph:
    def test_rejects_self_loops(self):
        with pytest.raises(ValueError):
            Graph.from_edges(2, [(0, 0)])

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            Graph.from_edges(2, [(0, 2)])

    def test_json_round_trip(self):
        g = Graph.from_edges(4, [(0, 1), (2, 1), (3, 0)])
        doc = g.to_json()
        assert doc == {"n": 4, "edges": [[0, 1], [0, 3], [1, 2]]}
        assert graph_from_json(json.loads(json.dumps(doc))) == g

    def test_json_rejects_unknown_keys(self):
        with pytest.raises(ValueError):
            graph_from_json({"n": 2, "edges": [], "weights": []})


class TestLocalComplement:
    def test_path_becomes_triangle(self):
        g = local_complement(Graph.path(3), 1)
        assert g.edges() == [(0, 1), (0, 2), (1, 2)]

    def test_involution(self, rng):
        for _ in range(50):
            g = random_graph(rng, rng.randint(1, 10))
            a = rng.randrange(g.n)
            assert local_complement(local_complement(g, a), a) == g

    def test_star_becomes_complete(self):
        star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
        g = local_complement(star, 0)
        assert g.edges() == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]

    def test_commutes_for_non_adjacent(self, rng):
        done = 0
        while done < 50:
            g = random_graph(rng, rng.randint(2, 10))
            a, b = rng.sample(range(g.n), 2)
            if g.has_edge(a, b):
                continue
            ab = local_complement(local_complement(g, a), b)
            ba = local_complement(local_complement(g, b), a)
            assert ab == ba
            done += 1

    def test_deleted_node_rejected(self):
        g, _ = measure_z(Graph.path(3), 1, 1)
        with pytest.raises(ValueError):
            local_complement(g, 1)


class TestMeasurementRules:
    def test_z_deletes_end_of_path(self):
        g = Graph.path(6)
        g2, spec = measure_z(g, 5, 1)
        assert g2.edges() == [(0, 1), (1, 2), (2, 3), (3, 4)]
        assert spec.targets == {}

    def test_z_on_isolated_node(self):
        g = Graph.from_edges(2, [])
        g2, spec = measure_z(g, 0, 1)
        assert g2.alive == frozenset({1})
        assert spec.targets == {}

    def test_z_minus_outcome_flags_neighbor(self):
        g2, spec = measure_z(Graph.path(2), 0, -1)
        assert g2.alive == frozenset({1})
        assert spec.targets == {1: "Z"}

    def test_y_contracts_path(self):
        g2, spec = measure_y(Graph.path(3), 1, 1)
        assert g2.edges() == [(0, 2)]
        assert spec.targets == {0: "S", 2: "S"}

    def test_y_links_neighbors_on_longer_path(self):
        g = Graph.path(5)
        g2, _ = measure_y(g, 2, 1)
        assert g2.has_edge(1, 3)

    def test_y_minus_outcome_uses_inverse(self):
        _, spec = measure_y(Graph.path(3), 1, -1)
        assert spec.targets == {0: "S_dag", 2: "S_dag"}

    def test_y_on_isolated_node(self):
        g = Graph.from_edges(1, [])
        g2, spec = measure_y(g, 0, 1)
        assert g2.alive == frozenset()
        assert spec.targets == {}

    def test_x_on_path_middle_gives_edge(self):
        g2, spec = measure_x(Graph.path(3), 1, 0, 1)
        assert g2.edges() == [(0, 2)]
        assert spec.special_neighbor == 0

    def test_x_on_leaf_isolates_other(self):
        g2, _ = measure_x(Graph.path(2), 0, 1, 1)
        assert g2.alive == frozenset({1})
        assert g2.edges() == []

    def test_x_requires_neighbor(self):
        with pytest.raises(ValueError):
            measure_x(Graph.path(3), 0, 2, 1)
        with pytest.raises(ValueError):
            measure_x(Graph.from_edges(2, []), 0, 1, 1)


class TestOracleEquivalence:
    def test_z_and_y_rules_match_oracle(self, rng):
        for _ in range(200):
            g = random_graph(rng, rng.randint(2, 10))
            node = rng.randrange(g.n)
            basis = rng.choice("ZY")
            outcome = rng.choice((1, -1))
            assert rule_matches_oracle(g, node, basis, outcome)

    def test_x_rule_matches_oracle(self, rng):
        done = 0
        while done < 100:
            g = random_graph(rng, rng.randint(2, 8), p=0.5)
            candidates = [v for v in range(g.n) if g.neighbors(v)]
            if not candidates:
                continue
            node = rng.choice(candidates)
            special = rng.choice(sorted(g.neighbors(node)))
            outcome = rng.choice((1, -1))
            assert rule_matches_oracle(g, node, "X", outcome, special=special)
            done += 1


class TestPauliFrame:
    def test_exponent_arithmetic(self):
        frame = PauliFrame()
        _, spec_s = measure_y(Graph.path(2), 1, 1)
        frame = frame.accumulate(spec_s)        # S on node 0
        assert frame.exponent(0) == 1
        _, spec_z = measure_z(Graph.path(2), 1, -1)
        frame = frame.accumulate(spec_z)        # Z on node 0
        assert frame.exponent(0) == 3
        _, spec_sd = measure_y(Graph.path(2), 1, -1)
        frame = frame.accumulate(spec_sd)       # S_dag on node 0
        assert frame.exponent(0) == 2

    def test_accumulation_commutes(self):
        _, a = measure_y(Graph.path(2), 1, 1)
        _, b = measure_z(Graph.path(2), 1, -1)
        one = PauliFrame().accumulate(a).accumulate(b)
        two = PauliFrame().accumulate(b).accumulate(a)
        assert one == two

    def test_opposite_y_outcomes_cancel(self):
        _, plus = measure_y(Graph.path(2), 1, 1)
        _, minus = measure_y(Graph.path(2), 1, -1)
        frame = PauliFrame().accumulate(plus).accumulate(minus)
        assert frame.exponent(0) == 0

    def test_x_spec_rejected(self):
        _, spec = measure_x(Graph.path(3), 1, 0, 1)
        with pytest.raises(ValueError, match="X-basis"):
            PauliFrame().accumulate(spec)


class TestBasisTranslation:
    def test_z_is_frame_invariant(self):
        for k in range(4):
            assert physical_basis("Z", k) == ("Z", False)

    def test_identity_frame(self):
        assert physical_basis("Y", 0) == ("Y", False)

    def test_z_frame_flips_y(self):
        assert physical_basis("Y", 2) == ("Y", True)

    def test_single_s_maps_to_x(self):
        assert physical_basis("Y", 1) == ("X", True)
        assert physical_basis("Y", 3) == ("X", False)

    def test_logical_outcome(self):
        assert logical_outcome(1, False) == 1
        assert logical_outcome(1, True) == -1
        assert logical_outcome(-1, True) == 1

    def test_frame_table_matches_oracle(self, rng):
        """Physical run plus final frame ops equals the logical rule sequence."""
        for _ in range(150):
            n = rng.randint(2, 8)
            g0 = random_graph(rng, n)
            nodes = rng.sample(range(n), rng.randint(1, min(5, n - 1)))
            seq = [(v, rng.choice("ZY")) for v in nodes]
            outcomes = [rng.choice((1, -1)) for _ in nodes]

            tab = StabTableau.from_graph(g0)
            g = g0
            frame = PauliFrame()
            recorded = {}
            for (node, basis), m_phys in zip(seq, outcomes):
                letter, flip = physical_basis(basis, frame.exponent(node))
                _, tab = tab.measure(node, letter, forced=m_phys)
                m_log = logical_outcome(m_phys, flip)
                g, spec = (measure_z if basis == "Z" else measure_y)(g, node, m_log)
                frame = frame.accumulate(spec)
                recorded[node] = (letter, m_phys)
            for node in sorted(g.alive):
                k = frame.exponent(node)
                if k:
                    tab = tab.apply_clifford(node, EXPONENT_TO_OP[k])
            expected = StabTableau.from_graph(g, measured=recorded)
            assert states_equal(tab, expected)


class TestWithinSlotOrderIrrelevance:
    def test_independent_sets_commute(self, rng):
        done = 0
        while done < 40:
            g0 = random_graph(rng, rng.randint(3, 9))
            nodes = sorted(rng.sample(range(g0.n), rng.randint(2, 3)))
            if any(g0.has_edge(a, b) for i, a in enumerate(nodes) for b in nodes[i + 1:]):
                continue
            plan = {v: (rng.choice("ZY"), rng.choice((1, -1))) for v in nodes}
            results = []
            for order in permutations(nodes):
                g = g0
                frame = PauliFrame()
                for v in order:
                    basis, outcome = plan[v]
                    g, spec = (measure_z if basis == "Z" else measure_y)(g, v, outcome)
                    frame = frame.accumulate(spec)
                results.append((g, frame))
            first_g, first_frame = results[0]
            for other_g, other_frame in results[1:]:
                assert other_g == first_g
                assert other_frame == first_frame
            done += 1
