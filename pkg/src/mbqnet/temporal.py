"""Time-division coordination layer: slots, constraints, validation.

Quantum slots have length t_q and classical slots length 1 (all times are
expressed in units of the single-hop classical transmission time). Slot
numbering is 1-based. A node assigned (slot, basis) measures during that
quantum slot; basis "I" means the node does not measure and is exempt from
all constraints.

Two constraints define a causality-preserving schedule on a line network:

* feedforward: a node at hop distance d from the source cannot measure
  before slot ceil(d / t_q) + 1, because the schedule announcement travels
  one hop per classical slot;
* adjacency: nodes measuring in the same slot must be pairwise
  non-adjacent in the resource graph as it stands at the start of that
  slot (earlier measurements reshape the graph).

All slot arithmetic uses exact rationals. The feedforward threshold is
piecewise constant in t_q and only changes at the finitely many breakpoint
values d/k, which is what makes exhaustive sweeps over t_q possible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping

from .graphstate import Graph, measure_y, measure_z

FEEDFORWARD = "feedforward"
ADJACENCY = "adjacency"

BASES = ("I", "Z", "Y")


def parse_ratio(text: str) -> Fraction:
    """Parse an exact rational like '5' or '1/2'."""
    try:
        value = Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc
    return value


def format_ratio(value: Fraction) -> str:
    return str(Fraction(value))


@dataclass(frozen=True)
class SlotModel:
    """Slot lengths; t_q is exact and the classical slot is the unit."""

    t_q: Fraction

    T_C = 1

    def __post_init__(self):
        object.__setattr__(self, "t_q", Fraction(self.t_q))
        if self.t_q <= 0:
            raise ValueError("quantum slot length must be positive")


@dataclass(frozen=True)
class Task:
    """An entanglement request: source s initiates, receiver r terminates."""

    s: int
    r: int

    def __post_init__(self):
        if self.s < 0 or self.r < 0:
            raise ValueError("node ids must be non-negative")
        if self.s == self.r:
            raise ValueError("source and receiver must differ")

    @property
    def lo(self) -> int:
        return min(self.s, self.r)

    @property
    def hi(self) -> int:
        return max(self.s, self.r)

    @property
    def distance(self) -> int:
        return self.hi - self.lo

    @property
    def direction(self) -> int:
        """+1 if the receiver lies above the source, else -1."""
        return 1 if self.r > self.s else -1


@dataclass(frozen=True)
class Schedule:
    """Per-node slot and logical basis assignment."""

    assignments: dict[int, tuple[int, str]]

    def __post_init__(self):
        for node, (slot, basis) in self.assignments.items():
            if basis not in BASES:
                raise ValueError(f"node {node}: basis must be one of {BASES}")
            if slot < 1:
                raise ValueError(f"node {node}: slots are 1-based, got {slot}")

    def measuring(self) -> list[tuple[int, int, str]]:
        """(node, slot, basis) for every measuring node, ordered by node."""
        return [
            (node, slot, basis)
            for node, (slot, basis) in sorted(self.assignments.items())
            if basis != "I"
        ]

    def slot_groups(self) -> dict[int, list[int]]:
        groups: dict[int, list[int]] = {}
        for node, slot, _ in self.measuring():
            groups.setdefault(slot, []).append(node)
        return {slot: sorted(nodes) for slot, nodes in sorted(groups.items())}

    def max_slot(self) -> int:
        slots = [slot for _, slot, _ in self.measuring()]
        return max(slots) if slots else 0


@dataclass(frozen=True)
class Violation:
    kind: str
    nodes: tuple[int, ...]
    slot: int
    detail: str


def hop_distance(task: Task, node: int, n: int | None = None) -> int:
    """Hops from the source to `node` on the line network."""
    if node < 0 or (n is not None and node >= n):
        raise ValueError(f"node {node} outside the network")
    return abs(node - task.s)


def earliest_slot(task: Task, node: int, model: SlotModel) -> int:
    """First slot in which the feedforward can have reached `node`."""
    d = hop_distance(task, node)
    return math.ceil(Fraction(d) / model.t_q) + 1


def breakpoints(task: Task, measuring_nodes: Iterable[int]) -> list[Fraction | float]:
    """Ascending t_q values where some feedforward threshold changes.

    Returns the finite breakpoints d/k (for each measuring node at hop
    distance d and 1 <= k <= d) followed by +inf. The thresholds are
    constant on each interval between consecutive entries.
    """
    nodes = sorted(set(measuring_nodes))
    if not nodes:
        raise ValueError("breakpoints need at least one measuring node")
    values: set[Fraction] = set()
    for node in nodes:
        d = hop_distance(task, node)
        if d < 1:
            raise ValueError(f"measuring node {node} coincides with the source")
        values.update(Fraction(d, k) for k in range(1, d + 1))
    return sorted(values) + [math.inf]


def check_feedforward(sched: Schedule, task: Task, model: SlotModel) -> list[Violation]:
    violations = []
    for node, slot, _ in sched.measuring():
        bound = earliest_slot(task, node, model)
        if slot < bound:
            violations.append(Violation(
                FEEDFORWARD, (node,), slot,
                f"node {node} measures in slot {slot} but feedforward "
                f"from node {task.s} allows slot {bound} at the earliest",
            ))
    return violations


def check_adjacency(sched: Schedule, task: Task, g0: Graph) -> list[Violation]:
    """Replay the schedule slot by slot on the evolving resource graph.

    Within one slot the measuring set must be independent in the graph as
    it stands when the slot begins; afterwards all the slot's graph rules
    are applied (their order does not matter for an independent set).
    """
    del task  # adjacency is a property of the schedule and graph alone
    violations = []
    g = g0
    for slot, nodes in sched.slot_groups().items():
        for u, v in combinations(nodes, 2):
            if g.has_edge(u, v):
                violations.append(Violation(
                    ADJACENCY, (u, v), slot,
                    f"nodes {u} and {v} are adjacent at the start of slot {slot}",
                ))
        for node in nodes:
            basis = sched.assignments[node][1]
            if basis == "Y":
                g, _ = measure_y(g, node, 1)
            else:
                g, _ = measure_z(g, node, 1)
    return violations


def validate(sched: Schedule, task: Task, g0: Graph, model: SlotModel) -> list[Violation]:
    """All constraint violations; an empty list means the schedule is valid."""
    return check_feedforward(sched, task, model) + check_adjacency(sched, task, g0)


# -- wire format -------------------------------------------------------------

def schedule_to_json(sched: Schedule, task: Task, model: SlotModel) -> dict:
    return {
        "task": [task.s, task.r],
        "t_q": format_ratio(model.t_q),
        "assignments": [
            {"node": node, "slot": slot, "basis": basis}
            for node, (slot, basis) in sorted(sched.assignments.items())
        ],
    }


def schedule_from_json(doc: Mapping) -> tuple[Schedule, Task, SlotModel]:
    unknown = set(doc) - {"task", "t_q", "assignments"}
    if unknown:
        raise ValueError(f"unknown schedule keys: {sorted(unknown)}")
    s, r = doc["task"]
    assignments = {}
    for entry in doc["assignments"]:
        bad = set(entry) - {"node", "slot", "basis"}
        if bad:
            raise ValueError(f"unknown assignment keys: {sorted(bad)}")
        assignments[int(entry["node"])] = (int(entry["slot"]), str(entry["basis"]))
    return Schedule(assignments), Task(int(s), int(r)), SlotModel(parse_ratio(doc["t_q"]))
