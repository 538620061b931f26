"""Schedule construction for EPR tasks on a line resource state.

Satisfying a task (s, r) takes two independent steps: Z measurements on
the outer neighbors of s and r (if they exist) cut the path out of the
rest of the line, and Y measurements on the inner nodes contract the path
to a single long edge. Scheduling therefore reduces to picking a slot per
node. Outer nodes never conflict with anything and go as early as the
feedforward allows. For the inner nodes this module offers:

* a sequential baseline (one measurement per slot, trivially valid),
* a parallelized design that assigns every other feedforward-eligible
  unassigned node to each slot (round k assigns slot k + 1), and
* an exhaustive minimum-slot search for small instances, used as the
  optimality oracle for the parallel design.

The exhaustive search walks slots in order, choosing an independent subset
of the eligible nodes per slot, and memoizes on (slot, unassigned set); on
a line the evolved graph is a function of the unassigned set alone, which
is what makes the memoization sound. It is restricted to line graphs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .graphstate import Graph, measure_y, measure_z
from .temporal import (
    Schedule,
    SlotModel,
    Task,
    earliest_slot,
    format_ratio,
    hop_distance,
    validate,
)

CSV_FIELDS = (
    "D", "t_q", "t_star_inner", "t_star_outer", "t_star_total",
    "lower_bound", "upper_bound", "mode",
)


@dataclass(frozen=True)
class ScheduleResult:
    schedule: Schedule
    t_star: int
    inner_slots: int
    outer_slots: int | None


def measurement_plan(task: Task, n: int) -> dict[int, str]:
    """Basis per measuring node: Y on inner nodes, Z on outer neighbors."""
    if not (0 <= task.lo and task.hi < n):
        raise ValueError(f"task {task} does not fit a network of {n} nodes")
    plan = {node: "Y" for node in range(task.lo + 1, task.hi)}
    src_outer = task.s - task.direction
    rcv_outer = task.r + task.direction
    for node in (src_outer, rcv_outer):
        if 0 <= node < n:
            plan[node] = "Z"
    return dict(sorted(plan.items()))


def outer_slots(task: Task, n: int, model: SlotModel) -> dict[int, int]:
    """Earliest feedforward-legal slot for each existing outer neighbor."""
    slots = {}
    src_outer = task.s - task.direction
    rcv_outer = task.r + task.direction
    for node in (src_outer, rcv_outer):
        if 0 <= node < n:
            slots[node] = earliest_slot(task, node, model)
    return slots


def _assemble(task: Task, g0: Graph, model: SlotModel,
              inner: dict[int, int], outer: dict[int, int]) -> ScheduleResult:
    assignments: dict[int, tuple[int, str]] = {v: (1, "I") for v in range(g0.n)}
    for node, slot in inner.items():
        assignments[node] = (slot, "Y")
    for node, slot in outer.items():
        assignments[node] = (slot, "Z")
    sched = Schedule(assignments)
    problems = validate(sched, task, g0, model)
    if problems:
        raise RuntimeError(f"internal error: generated schedule invalid: {problems}")
    measured = list(inner.values()) + list(outer.values())
    t_star = max(measured) if measured else 0
    return ScheduleResult(
        schedule=sched,
        t_star=t_star,
        inner_slots=max(inner.values()) if inner else 0,
        outer_slots=max(outer.values()) if outer else None,
    )


def sequential_schedule(task: Task, g0: Graph, model: SlotModel) -> ScheduleResult:
    """One inner measurement per slot, walking away from the source.

    For t_q >= 1 the i-th inner node takes slot i + 1; for t_q < 1 the
    assignment stretches to the earliest feedforward-legal slot, which is
    strictly increasing along the path so the one-per-slot structure is
    preserved.
    """
    measurement_plan(task, g0.n)  # bounds check
    inner = {}
    for i in range(1, task.distance):
        node = task.s + i * task.direction
        inner[node] = max(i + 1, earliest_slot(task, node, model))
    return _assemble(task, g0, model, inner, outer_slots(task, g0.n, model))


def parallel_schedule(task: Task, g0: Graph, model: SlotModel) -> ScheduleResult:
    """Round-based parallel design: slot k+1 gets every other eligible node.

    In round k the feedforward-eligible yet unassigned nodes are listed in
    path order and the elements at odd positions (first, third, ...) are
    assigned slot k + 1. Consecutive picks are separated by a node that
    stays alive through that slot, so the assignment always satisfies the
    adjacency constraint; eligibility guarantees the feedforward one.
    """
    if model.t_q < 1:
        raise ValueError("parallel scheduling requires t_q >= 1")
    measurement_plan(task, g0.n)  # bounds check
    unassigned = [task.s + i * task.direction for i in range(1, task.distance)]
    unassigned.sort()
    inner: dict[int, int] = {}
    k = 0
    limit = 4 * task.distance + 8
    while unassigned:
        k += 1
        if k > limit:
            raise RuntimeError("parallel scheduling failed to terminate")
        eligible = [
            node for node in unassigned
            if Fraction(hop_distance(task, node)) <= k * model.t_q
        ]
        for node in eligible[0::2]:
            inner[node] = k + 1
            unassigned.remove(node)
    return _assemble(task, g0, model, inner, outer_slots(task, g0.n, model))


def tstar_bounds(task: Task) -> tuple[int, int]:
    """(floor(log2(D-1)) + 2, D) bracket for the parallel inner slot count."""
    d = task.distance
    if d < 2:
        raise ValueError("bounds need a distance of at least 2")
    return (d - 1).bit_length() + 1, d


def brute_force_min_slots(
    task: Task, g0: Graph, model: SlotModel, slot_cap: int = 10,
) -> tuple[int, Schedule]:
    """Exhaustive minimum over causality-preserving schedules.

    Searches slot by slot over independent subsets of the eligible
    unassigned nodes, memoizing infeasible (slot, unassigned) states.
    Only line resource graphs are supported (the evolved graph must be a
    function of the unassigned set for the memoization to be sound).
    """
    if slot_cap > 10:
        raise ValueError("slot cap limited to 10")
    if g0 != Graph.path(g0.n):
        raise ValueError("exhaustive search supports line resource graphs only")
    plan = measurement_plan(task, g0.n)
    if len(plan) > 8:
        raise ValueError("exhaustive search limited to 8 measuring nodes")
    if not plan:
        return 0, _assemble(task, g0, model, {}, {}).schedule

    earliest = {node: earliest_slot(task, node, model) for node in plan}
    inner_nodes = frozenset(node for node, basis in plan.items() if basis == "Y")

    for cap in range(max(earliest.values()), slot_cap + 1):
        slots = _search_within_cap(plan, earliest, inner_nodes, g0, cap)
        if slots is not None:
            inner = {v: s for v, s in slots.items() if plan[v] == "Y"}
            outer = {v: s for v, s in slots.items() if plan[v] == "Z"}
            result = _assemble(task, g0, model, inner, outer)
            return result.t_star, result.schedule
    raise ValueError(f"no causality-preserving schedule within {slot_cap} slots")


def _search_within_cap(plan, earliest, inner_nodes, g0, cap):
    infeasible: set[tuple[int, frozenset[int]]] = set()

    def dfs(k: int, unassigned: frozenset[int], g: Graph):
        if not unassigned:
            return {}
        if k > cap:
            return None
        key = (k, unassigned)
        if key in infeasible:
            return None
        # A slot can hold at most every other inner node plus all outer ones.
        inner_left = len(unassigned & inner_nodes)
        per_slot = (inner_left + 1) // 2 + (len(unassigned) - inner_left)
        if per_slot * (cap - k + 1) < len(unassigned):
            infeasible.add(key)
            return None
        eligible = sorted(v for v in unassigned if earliest[v] <= k)
        for subset in _independent_subsets(eligible, g):
            g2 = g
            for node in subset:
                if plan[node] == "Y":
                    g2, _ = measure_y(g2, node, 1)
                else:
                    g2, _ = measure_z(g2, node, 1)
            rest = dfs(k + 1, unassigned - frozenset(subset), g2)
            if rest is not None:
                rest.update({node: k for node in subset})
                return rest
        infeasible.add(key)
        return None

    return dfs(1, frozenset(plan), g0)


def _independent_subsets(nodes: list[int], g: Graph) -> list[tuple[int, ...]]:
    """All subsets with no two members adjacent in g, largest first."""
    out = [()]
    for size in range(1, len(nodes) + 1):
        for combo in combinations(nodes, size):
            if all(not g.has_edge(u, v) for u, v in combinations(combo, 2)):
                out.append(combo)
    out.sort(key=lambda c: (-len(c), c))
    return out


def sweep_point(d: int, t_q: Fraction, mode: str, t_q_label: str | None = None) -> dict:
    """One CSV row for a task of distance d with both outer neighbors."""
    if d < 2:
        raise ValueError("sweeps cover distances of at least 2")
    n = d + 3
    task = Task(1, d + 1)
    g0 = Graph.path(n)
    model = SlotModel(t_q)
    if mode == "sequential":
        result = sequential_schedule(task, g0, model)
    elif mode == "parallel":
        result = parallel_schedule(task, g0, model)
    else:
        raise ValueError(f"unknown sweep mode {mode!r}")
    lower, upper = tstar_bounds(task)
    return {
        "D": d,
        "t_q": t_q_label if t_q_label is not None else format_ratio(t_q),
        "t_star_inner": result.inner_slots,
        "t_star_outer": result.outer_slots,
        "t_star_total": result.t_star,
        "lower_bound": lower,
        "upper_bound": upper,
        "mode": mode,
    }
