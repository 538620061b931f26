import json
import math
from fractions import Fraction

import pytest

from mbqnet.graphstate import Graph
from mbqnet.temporal import (
    ADJACENCY,
    FEEDFORWARD,
    Schedule,
    SlotModel,
    Task,
    breakpoints,
    check_adjacency,
    check_feedforward,
    earliest_slot,
    hop_distance,
    parse_ratio,
    schedule_from_json,
    schedule_to_json,
    validate,
)

F = Fraction


def sched(entries, n):
    assignments = {v: (1, "I") for v in range(n)}
    assignments.update(entries)
    return Schedule(assignments)


# The worked 6-node instance: source 0, receiver 4, one outer neighbor (5).
SIX = Graph.path(6)
TASK = Task(0, 4)
SEQUENTIAL = sched({1: (2, "Y"), 2: (3, "Y"), 3: (4, "Y"), 5: (6, "Z")}, 6)
PARALLEL = sched({1: (2, "Y"), 2: (3, "Y"), 3: (2, "Y"), 5: (2, "Z")}, 6)
SWAPPED = sched({1: (3, "Y"), 2: (2, "Y"), 3: (3, "Y"), 5: (2, "Z")}, 6)


class TestTaskAndModel:
    def test_task_normalization_helpers(self):
        t = Task(5, 1)
        assert (t.lo, t.hi, t.distance, t.direction) == (1, 5, 4, -1)

    def test_task_rejects_equal_ends(self):
        with pytest.raises(ValueError):
            Task(2, 2)

    def test_model_requires_positive_tq(self):
        with pytest.raises(ValueError):
            SlotModel(F(0))

    def test_parse_ratio(self):
        assert parse_ratio("5") == F(5)
        assert parse_ratio("1/2") == F(1, 2)
        with pytest.raises(ValueError):
            parse_ratio("fast")


class TestHopDistance:
    def test_forward(self):
        assert hop_distance(Task(1, 5), 4) == 3

    def test_self(self):
        assert hop_distance(Task(1, 5), 1) == 0

    def test_backward(self):
        assert hop_distance(Task(3, 7), 1) == 2


class TestEarliestSlot:
    def test_unit_tq_walks_the_path(self):
        model = SlotModel(F(1))
        assert [earliest_slot(Task(1, 5), v, model) for v in range(2, 7)] == [2, 3, 4, 5, 6]

    def test_large_tq_floors_at_two(self):
        model = SlotModel(F(5))
        assert [earliest_slot(Task(1, 5), v, model) for v in range(2, 7)] == [2] * 5

    def test_slow_feedforward_stretches(self):
        assert earliest_slot(Task(1, 5), 2, SlotModel(F(1, 2))) == 3


class TestBreakpoints:
    def test_single_node_distance_four(self):
        got = breakpoints(Task(0, 5), [4])
        assert got == [F(1), F(4, 3), F(2), F(4), math.inf]

    def test_single_node_distance_one(self):
        assert breakpoints(Task(0, 2), [1]) == [F(1), math.inf]

    def test_union_is_deduplicated(self):
        got = breakpoints(Task(0, 4), [2, 3])
        assert got == [F(1), F(3, 2), F(2), F(3), math.inf]

    def test_empty_set_rejected(self):
        with pytest.raises(ValueError):
            breakpoints(TASK, [])

    def test_source_rejected(self):
        with pytest.raises(ValueError):
            breakpoints(TASK, [0])

    def test_thresholds_constant_between_breakpoints(self):
        task = Task(0, 6)
        nodes = [1, 2, 3, 4, 5, 7]
        points = breakpoints(task, nodes)
        finite = [p for p in points if p != math.inf]
        for lo, hi in zip(finite, finite[1:]):
            mid = (lo + hi) / 2
            just_below = hi - (hi - lo) / 1000
            for node in nodes:
                a = earliest_slot(task, node, SlotModel(lo))
                b = earliest_slot(task, node, SlotModel(mid))
                c = earliest_slot(task, node, SlotModel(just_below))
                assert a == b == c

    def test_earliest_slot_monotonicity(self):
        task = Task(0, 6)
        for node in (1, 3, 5):
            slots = [earliest_slot(task, node, SlotModel(tq))
                     for tq in (F(1), F(3, 2), F(2), F(3), F(6))]
            assert slots == sorted(slots, reverse=True)
        model = SlotModel(F(3, 2))
        dists = [earliest_slot(task, node, model) for node in (1, 2, 3, 4, 5)]
        assert dists == sorted(dists)


class TestFeedforwardCheck:
    def test_sequential_schedule_passes(self):
        assert check_feedforward(SEQUENTIAL, TASK, SlotModel(F(1))) == []

    def test_parallel_schedule_passes_at_five(self):
        assert check_feedforward(PARALLEL, TASK, SlotModel(F(5))) == []

    def test_too_early_node_flagged(self):
        bad = sched({3: (2, "Y")}, 6)
        violations = check_feedforward(bad, TASK, SlotModel(F(1)))
        assert len(violations) == 1
        v = violations[0]
        assert v.kind == FEEDFORWARD and v.nodes == (3,) and v.slot == 2
        assert "slot 4" in v.detail


class TestAdjacencyCheck:
    def test_parallel_schedule_passes(self):
        assert check_adjacency(PARALLEL, TASK, SIX) == []

    def test_swapped_assignment_rejected(self):
        violations = check_adjacency(SWAPPED, TASK, SIX)
        assert len(violations) == 1
        v = violations[0]
        assert v.kind == ADJACENCY
        assert set(v.nodes) == {1, 3}
        assert v.slot == 3

    def test_distinct_slots_always_pass(self):
        assert check_adjacency(SEQUENTIAL, TASK, SIX) == []

    def test_measuring_deleted_node_is_an_error(self):
        from mbqnet.graphstate import measure_z

        g, _ = measure_z(Graph.path(3), 1, 1)
        with pytest.raises(ValueError, match="deleted"):
            check_adjacency(Schedule({1: (2, "Y")}), Task(0, 2), g)

    def test_contracted_path_constrains_later_slots(self):
        # measuring around a node in one slot links its neighbors; a later
        # slot that pairs them is caught on the evolved graph
        g = Graph.path(7)
        task = Task(0, 6)
        entries = {1: (2, "Y"), 3: (2, "Y"), 5: (2, "Y"), 2: (3, "Y"), 4: (3, "Y")}
        violations = check_adjacency(sched(entries, 7), task, g)
        assert [(set(v.nodes), v.slot) for v in violations] == [({2, 4}, 3)]

    def test_valid_multi_slot_schedule_passes(self):
        g = Graph.path(7)
        task = Task(0, 6)
        entries = {1: (2, "Y"), 3: (2, "Y"), 2: (3, "Y"), 5: (3, "Y"), 4: (4, "Y")}
        assert check_adjacency(sched(entries, 7), task, g) == []


class TestValidate:
    def test_valid_combinations(self):
        assert validate(SEQUENTIAL, TASK, SIX, SlotModel(F(1))) == []
        assert validate(PARALLEL, TASK, SIX, SlotModel(F(5))) == []

    def test_parallel_at_unit_tq_fails_feedforward(self):
        violations = validate(PARALLEL, TASK, SIX, SlotModel(F(1)))
        assert any(v.kind == FEEDFORWARD for v in violations)

    def test_swapped_fails_adjacency_only_at_five(self):
        violations = validate(SWAPPED, TASK, SIX, SlotModel(F(5)))
        assert [v.kind for v in violations] == [ADJACENCY]


class TestScheduleJson:
    def test_round_trip_is_bit_exact(self):
        doc = schedule_to_json(PARALLEL, TASK, SlotModel(F(5)))
        text = json.dumps(doc)
        sched2, task2, model2 = schedule_from_json(json.loads(text))
        assert json.dumps(schedule_to_json(sched2, task2, model2)) == text

    def test_fractional_tq_survives(self):
        doc = schedule_to_json(SEQUENTIAL, TASK, SlotModel(F(7, 3)))
        assert doc["t_q"] == "7/3"
        _, _, model = schedule_from_json(doc)
        assert model.t_q == F(7, 3)

    def test_unknown_keys_rejected(self):
        doc = schedule_to_json(PARALLEL, TASK, SlotModel(F(5)))
        doc["extra"] = 1
        with pytest.raises(ValueError):
            schedule_from_json(doc)

    def test_schedule_validates_bases_and_slots(self):
        with pytest.raises(ValueError):
            Schedule({0: (1, "W")})
        with pytest.raises(ValueError):
            Schedule({0: (0, "I")})
