"""Single-qubit Clifford bookkeeping.

Operators are identified up to global phase, so each Clifford is fully
described by the conjugation images of X and Z. The named operators below
include the diagonal group {I, S, Z, S_dag} used for pending-correction
frames and the two Y-roots that appear as by-products of X-basis
measurements.

The sign conventions of the root operators are frozen empirically against
the exact stabilizer simulator: ``S`` is the diagonal root of Z that undoes
the by-product of a +1 Y-basis measurement on a neighbor (conjugation
X -> -Y, Y -> X), and ``S_dag`` is its inverse. ``sqrtY_neg``/``sqrtY_pos``
are the Y-roots with X -> Z and X -> -Z respectively.
"""

from __future__ import annotations

from typing import NamedTuple

PAULI_LETTERS = ("I", "X", "Y", "Z")

# (a, b) -> (a*b letter, i-exponent of the product), for distinct non-identity letters
_LETTER_PRODUCTS = {
    ("X", "Y"): ("Z", 1),
    ("Y", "Z"): ("X", 1),
    ("Z", "X"): ("Y", 1),
    ("Y", "X"): ("Z", 3),
    ("Z", "Y"): ("X", 3),
    ("X", "Z"): ("Y", 3),
}


def letter_product(a: str, b: str) -> tuple[str, int]:
    """Product of two Pauli letters as (letter, i-exponent mod 4)."""
    if a == "I":
        return b, 0
    if b == "I":
        return a, 0
    if a == b:
        return "I", 0
    return _LETTER_PRODUCTS[(a, b)]


class Clifford1Q(NamedTuple):
    """A single-qubit Clifford, given by its conjugation images of X and Z."""

    x_image: tuple[str, int]
    z_image: tuple[str, int]

    def image(self, letter: str) -> tuple[str, int]:
        """Conjugation image of a Pauli letter as (letter, sign)."""
        if letter == "I":
            return "I", 1
        if letter == "X":
            return self.x_image
        if letter == "Z":
            return self.z_image
        if letter == "Y":
            # Y = i X Z, so the image is i * image(X) * image(Z).
            (lx, sx), (lz, sz) = self.x_image, self.z_image
            prod, exp = letter_product(lx, lz)
            total = (exp + 1) % 4
            if total not in (0, 2):
                raise ValueError("invalid Clifford: images of X and Z commute")
            sign = 1 if total == 0 else -1
            return prod, sx * sz * sign
        raise ValueError(f"unknown Pauli letter {letter!r}")


def compose(first: Clifford1Q, second: Clifford1Q) -> Clifford1Q:
    """The Clifford acting as `first` followed by `second`."""
    lx, sx = first.x_image
    ix, jx = second.image(lx)
    lz, sz = first.z_image
    iz, jz = second.image(lz)
    return Clifford1Q((ix, sx * jx), (iz, sz * jz))


CLIFFORD_OPS: dict[str, Clifford1Q] = {
    "I": Clifford1Q(("X", 1), ("Z", 1)),
    "X": Clifford1Q(("X", 1), ("Z", -1)),
    "Y": Clifford1Q(("X", -1), ("Z", -1)),
    "Z": Clifford1Q(("X", -1), ("Z", 1)),
    "S": Clifford1Q(("Y", -1), ("Z", 1)),
    "S_dag": Clifford1Q(("Y", 1), ("Z", 1)),
    "sqrtY_pos": Clifford1Q(("Z", -1), ("X", 1)),
    "sqrtY_neg": Clifford1Q(("Z", 1), ("X", -1)),
    "H": Clifford1Q(("Z", 1), ("X", 1)),
    "H_neg": Clifford1Q(("Z", -1), ("X", -1)),
}

# Diagonal corrections form a cyclic group of order 4 generated by S.
EXPONENT_TO_OP = {0: "I", 1: "S", 2: "Z", 3: "S_dag"}
OP_TO_EXPONENT = {"I": 0, "S": 1, "Z": 2, "S_dag": 3}


def all_single_qubit_cliffords() -> list[Clifford1Q]:
    """All 24 single-qubit Cliffords (up to phase), in a fixed order."""
    out = []
    for lx in ("X", "Y", "Z"):
        for sx in (1, -1):
            for lz in ("X", "Y", "Z"):
                if lz == lx:
                    continue
                for sz in (1, -1):
                    out.append(Clifford1Q((lx, sx), (lz, sz)))
    return out
