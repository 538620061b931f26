"""Graph-level resource-state engine.

Measuring a qubit of a graph state in a Pauli basis turns the state into a
new graph state up to local Clifford by-products on the neighbors of the
measured node. This module implements the graph transformations (vertex
deletion for Z, local complementation plus deletion for Y, the three-step
complementation sequence for X), emits the matching correction operators,
and tracks postponed diagonal corrections per node as a Pauli frame.

Deleted nodes keep their ids (alive-set model) so schedules and traces can
refer to stable node numbers. All operations are pure: graphs and frames
are never mutated in place.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

from .cliffords import EXPONENT_TO_OP, OP_TO_EXPONENT


class Graph:
    """Simple undirected graph over node ids [0, n) with an alive subset."""

    __slots__ = ("n", "_adj", "_alive")

    def __init__(self, n: int, adj: dict[int, set[int]], alive: frozenset[int]):
        self.n = n
        self._adj = adj
        self._alive = alive

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        if n < 1:
            raise ValueError("graph needs at least one node")
        adj: dict[int, set[int]] = {v: set() for v in range(n)}
        for a, b in edges:
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"edge ({a}, {b}) out of range [0, {n})")
            if a == b:
                raise ValueError(f"self-loop at node {a}")
            adj[a].add(b)
            adj[b].add(a)
        return cls(n, adj, frozenset(range(n)))

    @classmethod
    def path(cls, n: int) -> "Graph":
        """The line graph 0 - 1 - ... - (n-1)."""
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    @property
    def alive(self) -> frozenset[int]:
        return self._alive

    def is_alive(self, a: int) -> bool:
        return a in self._alive

    def _check_alive(self, a: int) -> None:
        if not 0 <= a < self.n:
            raise ValueError(f"node {a} out of range [0, {self.n})")
        if a not in self._alive:
            raise ValueError(f"node {a} is already deleted")

    def neighbors(self, a: int) -> frozenset[int]:
        self._check_alive(a)
        return frozenset(self._adj[a])

    def has_edge(self, a: int, b: int) -> bool:
        self._check_alive(a)
        self._check_alive(b)
        return b in self._adj[a]

    def edges(self) -> list[tuple[int, int]]:
        return sorted((a, b) for a in self._alive for b in self._adj[a] if a < b)

    def _copy_adj(self) -> dict[int, set[int]]:
        return {v: set(s) for v, s in self._adj.items()}

    def to_json(self) -> dict:
        if self._alive != frozenset(range(self.n)):
            raise ValueError("only fully alive graphs are serializable")
        return {"n": self.n, "edges": [[a, b] for a, b in self.edges()]}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and self._alive == other._alive
            and self.edges() == other.edges()
        )

    def __repr__(self) -> str:
        dead = sorted(set(range(self.n)) - self._alive)
        extra = f", deleted={dead}" if dead else ""
        return f"Graph(n={self.n}, edges={self.edges()}{extra})"


def graph_from_json(doc: Mapping) -> Graph:
    unknown = set(doc) - {"n", "edges"}
    if unknown:
        raise ValueError(f"unknown graph keys: {sorted(unknown)}")
    return Graph.from_edges(int(doc["n"]), [tuple(e) for e in doc["edges"]])


def local_complement(g: Graph, a: int) -> Graph:
    """Complement the edge set among the neighbors of `a`."""
    nb = sorted(g.neighbors(a))
    adj = g._copy_adj()
    for u, v in combinations(nb, 2):
        if v in adj[u]:
            adj[u].discard(v)
            adj[v].discard(u)
        else:
            adj[u].add(v)
            adj[v].add(u)
    return Graph(g.n, adj, g.alive)


def _delete(g: Graph, a: int) -> Graph:
    adj = g._copy_adj()
    for u in adj[a]:
        adj[u].discard(a)
    adj[a] = set()
    return Graph(g.n, adj, g.alive - {a})


@dataclass(frozen=True)
class CorrectionSpec:
    """The local Clifford by-product of one measurement.

    `targets` maps node id to the named operator that must eventually be
    applied there to return the state to graph-state form.
    """

    basis: str
    outcome: int
    targets: dict[int, str]
    measured: int
    special_neighbor: int | None = None


def measure_z(g: Graph, a: int, outcome: int) -> tuple[Graph, CorrectionSpec]:
    """Z measurement: vertex deletion. Outcome -1 flips Z onto the neighbors."""
    _check_outcome(outcome)
    nb = g.neighbors(a)
    targets = {v: "Z" for v in nb} if outcome == -1 else {}
    return _delete(g, a), CorrectionSpec("Z", outcome, targets, a)


def measure_y(g: Graph, a: int, outcome: int) -> tuple[Graph, CorrectionSpec]:
    """Y measurement: local complementation at `a`, then deletion."""
    _check_outcome(outcome)
    nb = g.neighbors(a)
    op = "S" if outcome == 1 else "S_dag"
    targets = {v: op for v in nb}
    return _delete(local_complement(g, a), a), CorrectionSpec("Y", outcome, targets, a)


def measure_x(g: Graph, a: int, b: int, outcome: int) -> tuple[Graph, CorrectionSpec]:
    """X measurement with special neighbor `b`.

    Graph rule: complement at b, complement at a, delete a, complement at b
    again. The corrections are derived by composing the local-complementation
    unitaries with the Y-measurement rule, which yields a Hadamard-type
    operator on b and diagonal factors elsewhere (exponents fixed by the
    neighborhoods of b before and after, and of a in between). Frame
    tracking does not support these corrections; they are emitted for
    completeness and oracle checks only.
    """
    _check_outcome(outcome)
    nb_a = g.neighbors(a)
    if not nb_a:
        raise ValueError(f"X measurement of isolated node {a} has no special neighbor")
    if b not in nb_a:
        raise ValueError(f"special neighbor {b} is not adjacent to {a}")
    n_g_b = g.neighbors(b)
    g1 = local_complement(g, b)
    n_g1_a = g1.neighbors(a)
    h = _delete(local_complement(g1, a), a)
    n_h_b = h.neighbors(b)
    g2 = local_complement(h, b)
    targets = {b: "H" if outcome == 1 else "H_neg"}
    for c in sorted(g2.alive):
        if c == b:
            continue
        k = ((c in n_h_b) + (c in n_g_b) - outcome * (c in n_g1_a)) % 4
        if k:
            targets[c] = EXPONENT_TO_OP[k]
    return g2, CorrectionSpec("X", outcome, targets, a, special_neighbor=b)


def _check_outcome(outcome: int) -> None:
    if outcome not in (1, -1):
        raise ValueError("outcome must be +1 or -1")


@dataclass(frozen=True)
class PauliFrame:
    """Accumulated postponed corrections, one exponent k per node (S**k).

    Valid only for the diagonal group arising from Z/Y measurements; X
    by-products are rejected loudly rather than silently mistracked.
    """

    exponents: dict[int, int] = field(default_factory=dict)

    def exponent(self, node: int) -> int:
        return self.exponents.get(node, 0)

    def accumulate(self, spec: CorrectionSpec) -> "PauliFrame":
        if spec.basis == "X":
            raise ValueError("frame tracking does not support X-basis corrections")
        exps = dict(self.exponents)
        for node, op in spec.targets.items():
            if op not in OP_TO_EXPONENT:
                raise ValueError(f"non-diagonal correction {op!r} on node {node}")
            k = (exps.get(node, 0) + OP_TO_EXPONENT[op]) % 4
            if k:
                exps[node] = k
            else:
                exps.pop(node, None)
        return PauliFrame(exps)

    def items(self) -> list[tuple[int, int]]:
        return sorted(self.exponents.items())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliFrame):
            return NotImplemented
        return self.items() == other.items()


# Physical basis realizing a logical Y under a pending frame S**k. Frozen
# against the stabilizer oracle; Z commutes with the frame and never moves.
_Y_UNDER_FRAME = {0: ("Y", False), 1: ("X", True), 2: ("Y", True), 3: ("X", False)}


def physical_basis(logical: str, frame_exponent: int) -> tuple[str, bool]:
    """Physical basis and outcome flip realizing `logical` under S**k."""
    if logical == "Z":
        return "Z", False
    if logical == "Y":
        return _Y_UNDER_FRAME[frame_exponent % 4]
    raise ValueError(f"logical basis must be Z or Y, got {logical!r}")


def logical_outcome(physical_outcome: int, flip: bool) -> int:
    _check_outcome(physical_outcome)
    return -physical_outcome if flip else physical_outcome
