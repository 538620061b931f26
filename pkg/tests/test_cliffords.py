import pytest

from mbqnet.cliffords import (
    CLIFFORD_OPS,
    EXPONENT_TO_OP,
    OP_TO_EXPONENT,
    all_single_qubit_cliffords,
    compose,
    letter_product,
)


def test_letter_products():
    assert letter_product("X", "Y") == ("Z", 1)
    assert letter_product("Y", "X") == ("Z", 3)
    assert letter_product("X", "X") == ("I", 0)
    assert letter_product("I", "Z") == ("Z", 0)


def test_group_has_24_distinct_elements():
    ops = all_single_qubit_cliffords()
    assert len(ops) == 24
    assert len(set(ops)) == 24


def test_named_ops_are_group_elements():
    ops = set(all_single_qubit_cliffords())
    for name, cl in CLIFFORD_OPS.items():
        assert cl in ops, name


def test_diagonal_group_structure():
    s = CLIFFORD_OPS["S"]
    assert compose(s, s) == CLIFFORD_OPS["Z"]
    assert compose(compose(s, s), s) == CLIFFORD_OPS["S_dag"]
    assert compose(s, CLIFFORD_OPS["S_dag"]) == CLIFFORD_OPS["I"]
    for k, name in EXPONENT_TO_OP.items():
        assert OP_TO_EXPONENT[name] == k


def test_y_image_consistency():
    for cl in all_single_qubit_cliffords():
        letter, sign = cl.image("Y")
        assert letter in ("X", "Y", "Z")
        assert sign in (1, -1)
    assert CLIFFORD_OPS["S"].image("Y") == ("X", 1)
    assert CLIFFORD_OPS["S_dag"].image("Y") == ("X", -1)
    assert CLIFFORD_OPS["H"].image("Y") == ("Y", -1)


def test_hadamard_variants_square_to_identity():
    for name in ("H", "H_neg"):
        cl = CLIFFORD_OPS[name]
        assert compose(cl, cl) == CLIFFORD_OPS["I"]


def test_invalid_letter_rejected():
    with pytest.raises(ValueError):
        CLIFFORD_OPS["S"].image("Q")
