"""Exact stabilizer-state simulator used as the ground-truth oracle.

A state on n qubits is stored as n independent, mutually commuting
stabilizer generators in binary symplectic form. Each generator is the
operator ``i**p * X**x * Z**z`` where ``x`` and ``z`` are n-bit masks
(all X factors to the left of all Z factors) and the phase exponent ``p``
is tracked modulo 4. A generator with ``y = popcount(x & z)`` Y-positions
is Hermitian with sign +/-1 exactly when ``p - y`` is even, which holds
for every generator of a valid state.

Everything here is deliberately brute force: the point is a small, easily
audited reference implementation, capped at 24 qubits, against which the
graph-rule and scheduling layers are checked. All operations have value
semantics and return new tableaus.
"""

from __future__ import annotations

import random
from itertools import product
from typing import TYPE_CHECKING, Iterable, Mapping

from .cliffords import CLIFFORD_OPS, Clifford1Q, all_single_qubit_cliffords

if TYPE_CHECKING:
    from .graphstate import Graph

MAX_QUBITS = 24

Row = tuple[int, int, int]  # (x mask, z mask, phase exponent of i, mod 4)


def _mul(r1: Row, r2: Row) -> Row:
    """Product of two generators in (x, z, phase) form."""
    x1, z1, p1 = r1
    x2, z2, p2 = r2
    # Moving Z**z1 past X**x2 contributes (-1) per overlapping bit.
    phase = (p1 + p2 + 2 * (z1 & x2).bit_count()) % 4
    return x1 ^ x2, z1 ^ z2, phase


def _mul1(a: tuple[int, int, int], b: tuple[int, int, int]) -> tuple[int, int, int]:
    """Single-qubit version of `_mul` with 0/1 bits."""
    return a[0] ^ b[0], a[1] ^ b[1], (a[2] + b[2] + 2 * (a[1] & b[0])) % 4


def _anticommutes(row: Row, x2: int, z2: int) -> bool:
    x1, z1, _ = row
    return ((x1 & z2).bit_count() + (z1 & x2).bit_count()) % 2 == 1


def _pauli_bits(letter: str, qubit: int) -> Row:
    bit = 1 << qubit
    if letter == "X":
        return bit, 0, 0
    if letter == "Z":
        return 0, bit, 0
    if letter == "Y":
        return bit, bit, 1
    raise ValueError(f"not a measurable Pauli letter: {letter!r}")


def _letter_to_xz(letter: str, sign: int) -> tuple[int, int, int]:
    base = {"I": (0, 0, 0), "X": (1, 0, 0), "Z": (0, 1, 0), "Y": (1, 1, 1)}[letter]
    return base[0], base[1], (base[2] + (0 if sign == 1 else 2)) % 4


class StabTableau:
    """An n-qubit stabilizer state as an immutable generator tableau."""

    __slots__ = ("n", "_rows")

    def __init__(self, n: int, rows: tuple[Row, ...]):
        self.n = n
        self._rows = rows

    # -- construction -----------------------------------------------------

    @classmethod
    def from_graph(cls, graph: "Graph", measured: Mapping[int, tuple[str, int]] | None = None) -> "StabTableau":
        """Stabilizer group of the graph state of `graph`.

        Alive node a contributes the generator X_a Z_N(a). Deleted nodes
        must be covered by `measured`, mapping node -> (letter, outcome),
        and contribute the single-qubit product-state generator
        ``outcome * letter``.
        """
        n = graph.n
        if n < 1:
            raise ValueError("graph state needs at least one qubit")
        if n > MAX_QUBITS:
            raise ValueError(f"oracle capped at {MAX_QUBITS} qubits, got {n}")
        measured = dict(measured or {})
        dead = set(range(n)) - set(graph.alive)
        if set(measured) != dead:
            raise ValueError("product states must cover exactly the deleted nodes")
        rows = []
        for v in range(n):
            if v in measured:
                letter, outcome = measured[v]
                if outcome not in (1, -1):
                    raise ValueError("outcome must be +1 or -1")
                xb, zb, p = _letter_to_xz(letter, outcome)
                if (xb, zb) == (0, 0):
                    raise ValueError("product state letter must be X, Y or Z")
                rows.append((xb << v, zb << v, p))
            else:
                zmask = 0
                for u in graph.neighbors(v):
                    zmask |= 1 << u
                rows.append((1 << v, zmask, 0))
        return cls(n, tuple(rows))

    @classmethod
    def from_generators(cls, strings: Iterable[str]) -> "StabTableau":
        """Parse generators like '+XZI' (leftmost letter is qubit 0)."""
        rows = []
        n = None
        for text in strings:
            if len(text) < 2 or text[0] not in "+-":
                raise ValueError(f"generator must look like '+XZ...', got {text!r}")
            sign = 1 if text[0] == "+" else -1
            letters = text[1:]
            if n is None:
                n = len(letters)
            elif len(letters) != n:
                raise ValueError("generators have inconsistent lengths")
            x = z = p = 0
            for q, letter in enumerate(letters):
                xb, zb, pl = _letter_to_xz(letter, 1)
                x |= xb << q
                z |= zb << q
                p = (p + pl) % 4
            rows.append((x, z, (p + (0 if sign == 1 else 2)) % 4))
        if n is None or n < 1:
            raise ValueError("at least one generator required")
        if n > MAX_QUBITS:
            raise ValueError(f"oracle capped at {MAX_QUBITS} qubits")
        if len(rows) != n:
            raise ValueError(f"need exactly {n} generators for {n} qubits")
        tab = cls(n, tuple(rows))
        for i, ri in enumerate(rows):
            for rj in rows[i + 1:]:
                if _anticommutes(ri, rj[0], rj[1]):
                    raise ValueError("generators do not commute")
        tab.canonical()  # raises if dependent
        return tab

    # -- internals ---------------------------------------------------------

    def _check_qubit(self, qubit: int) -> None:
        if not 0 <= qubit < self.n:
            raise ValueError(f"qubit {qubit} out of range [0, {self.n})")

    def _deterministic_outcome(self, xm: int, zm: int, pm: int) -> int:
        """Sign with which a commuting Pauli sits in the stabilizer group."""
        rows = self.canonical()._rows
        acc: Row = (0, 0, 0)
        vx, vz = xm, zm
        for x, z, p in rows:
            if x:
                qb = (x & -x).bit_length() - 1
                hit = (vx >> qb) & 1
            else:
                qb = (z & -z).bit_length() - 1
                hit = (vz >> qb) & 1
            if hit:
                acc = _mul(acc, (x, z, p))
                vx ^= x
                vz ^= z
        if vx or vz:
            raise RuntimeError("commuting Pauli not generated by the stabilizer group")
        diff = (acc[2] - pm) % 4
        if diff == 0:
            return 1
        if diff == 2:
            return -1
        raise RuntimeError("non-Hermitian phase in deterministic measurement")

    # -- operations ---------------------------------------------------------

    def measure(
        self,
        qubit: int,
        basis: str,
        *,
        forced: int | None = None,
        rng: random.Random | None = None,
    ) -> tuple[int, "StabTableau"]:
        """Projective Pauli measurement; returns (outcome, new tableau).

        The measured qubit is kept in the tableau, in the product
        eigenstate selected by the outcome. A deterministic measurement
        with a contradicting `forced` value raises.
        """
        self._check_qubit(qubit)
        if forced is not None and forced not in (1, -1):
            raise ValueError("forced outcome must be +1 or -1")
        xm, zm, pm = _pauli_bits(basis, qubit)
        anti = [i for i, row in enumerate(self._rows) if _anticommutes(row, xm, zm)]
        if not anti:
            det = self._deterministic_outcome(xm, zm, pm)
            if forced is not None and forced != det:
                raise ValueError(
                    f"measurement of {basis} on qubit {qubit} is deterministic "
                    f"with outcome {det:+d}; cannot force {forced:+d}"
                )
            return det, self
        if forced is not None:
            outcome = forced
        elif rng is not None:
            outcome = 1 if rng.getrandbits(1) == 0 else -1
        else:
            raise ValueError("random measurement outcome requires rng or forced value")
        rows = list(self._rows)
        pivot = anti[0]
        for i in anti[1:]:
            rows[i] = _mul(rows[i], rows[pivot])
        rows[pivot] = (xm, zm, (pm + (0 if outcome == 1 else 2)) % 4)
        return outcome, StabTableau(self.n, tuple(rows))

    def apply_clifford(self, qubit: int, op: str | Clifford1Q) -> "StabTableau":
        """Conjugate every generator by a single-qubit Clifford."""
        self._check_qubit(qubit)
        cl = CLIFFORD_OPS[op] if isinstance(op, str) else op
        ix = _letter_to_xz(*cl.x_image)
        iz = _letter_to_xz(*cl.z_image)
        local = {(1, 0): ix, (0, 1): iz, (1, 1): _mul1(ix, iz)}
        bit = 1 << qubit
        rows = []
        for x, z, p in self._rows:
            lx = (x >> qubit) & 1
            lz = (z >> qubit) & 1
            if not (lx or lz):
                rows.append((x, z, p))
                continue
            nx, nz, dp = local[(lx, lz)]
            rows.append((
                (x & ~bit) | (bit if nx else 0),
                (z & ~bit) | (bit if nz else 0),
                (p + dp) % 4,
            ))
        return StabTableau(self.n, tuple(rows))

    def apply_ops(self, ops: Mapping[int, str]) -> "StabTableau":
        """Apply named single-qubit Cliffords to several qubits."""
        tab = self
        for qubit in sorted(ops):
            tab = tab.apply_clifford(qubit, ops[qubit])
        return tab

    def canonical(self) -> "StabTableau":
        """Row-reduced canonical form; identical for equal stabilizer groups."""
        n = self.n
        rows = list(self._rows)
        r = 0
        for col in range(2 * n):
            use_x = col < n
            qb = col if use_x else col - n
            pivot = None
            for i in range(r, n):
                x, z, _ = rows[i]
                if ((x if use_x else z) >> qb) & 1:
                    pivot = i
                    break
            if pivot is None:
                continue
            rows[r], rows[pivot] = rows[pivot], rows[r]
            for i in range(n):
                if i == r:
                    continue
                x, z, _ = rows[i]
                if ((x if use_x else z) >> qb) & 1:
                    rows[i] = _mul(rows[i], rows[r])
            r += 1
        if r != n:
            raise ValueError("stabilizer generators are not independent")
        return StabTableau(n, tuple(rows))

    def canonical_key(self) -> tuple:
        return (self.n, self.canonical()._rows)

    # -- presentation --------------------------------------------------------

    def to_strings(self) -> list[str]:
        out = []
        for x, z, p in self._rows:
            y = (x & z).bit_count()
            sign_exp = (p - y) % 4
            if sign_exp not in (0, 2):
                raise RuntimeError("non-Hermitian generator")
            letters = []
            for q in range(self.n):
                lx = (x >> q) & 1
                lz = (z >> q) & 1
                letters.append("IXZY"[lx + 2 * lz])
            out.append(("+" if sign_exp == 0 else "-") + "".join(letters))
        return out

    def __str__(self) -> str:
        return "\n".join(self.to_strings())

    def __repr__(self) -> str:
        return f"StabTableau({self.n}, [{', '.join(self.to_strings())}])"


def states_equal(a: StabTableau, b: StabTableau) -> bool:
    """True iff the two stabilizer groups are identical, signs included."""
    if a.n != b.n:
        raise ValueError(f"qubit counts differ: {a.n} vs {b.n}")
    return a.canonical_key() == b.canonical_key()


def equal_up_to_local_clifford(a: StabTableau, b: StabTableau, free_qubits: Iterable[int]) -> bool:
    """True iff single-qubit Cliffords on `free_qubits` map `a` onto `b`.

    Exhaustive over 24**k assignments, so at most 4 free qubits are
    accepted. The identity assignment is tried first, which makes the
    common exact-match case cheap.
    """
    if a.n != b.n:
        raise ValueError(f"qubit counts differ: {a.n} vs {b.n}")
    free = sorted(set(free_qubits))
    if len(free) > 4:
        raise ValueError("at most 4 free qubits supported")
    for q in free:
        if not 0 <= q < a.n:
            raise ValueError(f"free qubit {q} out of range")
    target = b.canonical_key()
    if a.canonical_key() == target:
        return True
    cliffords = all_single_qubit_cliffords()
    for assignment in product(cliffords, repeat=len(free)):
        tab = a
        for q, cl in zip(free, assignment):
            tab = tab.apply_clifford(q, cl)
        if tab.canonical_key() == target:
            return True
    return False
