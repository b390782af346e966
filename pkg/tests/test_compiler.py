"""Tests for circuit-word compilation through a fixed entangling box."""

import numpy as np
import pytest
import scipy.linalg

from unidisc.compiler import (Box, CanonicalXXTarget, CircuitWord,
                              ControlledFormTarget, ExactMatrix, LocalLayer,
                              compile_word, controlled_form_matrix,
                              evaluate_word, word_adjoint)
from unidisc.core import UnitaryOperator, phase_distance, random_unitary
from unidisc.exceptions import CompileFailed, ValidationError
from unidisc.locality import PRODUCT_LOCAL, classify

from conftest import HAD, SX, SZ, CZ_MAT, product_operator, swap_type_operator


def identity_layer(d=2):
    return LocalLayer(np.eye(d, dtype=complex), np.eye(d, dtype=complex))


def test_word_validation():
    with pytest.raises(ValidationError):
        CircuitWord((Box(),))
    with pytest.raises(ValidationError):
        CircuitWord((identity_layer(), identity_layer()))
    word = CircuitWord((identity_layer(), Box(), identity_layer()))
    assert word.box_uses == 1


def test_evaluate_word_trivial_layer(cnot):
    word = CircuitWord((identity_layer(),))
    out = evaluate_word(word, cnot)
    assert phase_distance(out.matrix, np.eye(4)) < 1e-12
    assert word.box_uses == 0


def test_evaluate_word_known_cz_identity(cnot, cz):
    # CZ = (I x H) CNOT (I x H), verified by direct matrix product
    layer = LocalLayer(np.eye(2, dtype=complex), HAD)
    word = CircuitWord((layer, Box(), layer))
    out = evaluate_word(word, cnot)
    assert phase_distance(out, cz) < 1e-10


def test_evaluate_word_adjoint_identity(cnot):
    rng = np.random.default_rng(3)
    layers = [LocalLayer(random_unitary(2, 10 + k).matrix,
                         random_unitary(2, 20 + k).matrix) for k in range(3)]
    word = CircuitWord((layers[0], Box("forward"), layers[1],
                        Box("reverse"), layers[2]))
    lhs = evaluate_word(word, cnot).matrix.conj().T
    rhs = evaluate_word(word_adjoint(word), cnot).matrix
    assert np.linalg.norm(lhs - rhs) < 1e-12
    del rng


def test_substitution_only_through_slots(cnot, swap2):
    # no boxes: the result cannot depend on the box operator
    word = CircuitWord((identity_layer(),))
    assert np.array_equal(evaluate_word(word, cnot).matrix,
                          evaluate_word(word, swap2).matrix)
    word2 = CircuitWord((identity_layer(), Box(), identity_layer()))
    assert word2.box_uses == 1
    assert not np.allclose(evaluate_word(word2, cnot).matrix,
                           evaluate_word(word2, swap2).matrix)


def test_word_closure_on_primitive_boxes(cnot):
    # a compiled word maps product operators to product operators, and
    # swap-type operators too when the box count is even
    word = compile_word(cnot, ExactMatrix(CZ_MAT), max_boxes=1)
    v = product_operator(2, 77)
    image = evaluate_word(word, v)
    assert classify(image).kind == PRODUCT_LOCAL

    even_word = CircuitWord((identity_layer(), Box(), identity_layer(),
                             Box(), identity_layer()))
    sw = swap_type_operator(2, 78)
    assert classify(evaluate_word(even_word, sw)).kind == PRODUCT_LOCAL


def test_compile_cz_from_cnot(cnot, cz):
    word = compile_word(cnot, ExactMatrix(cz), max_boxes=1)
    assert word.box_uses == 1
    assert word.achieved_error <= 1e-10
    # achieved_error is exactly the recomputed phase distance
    recheck = phase_distance(evaluate_word(word, cnot), cz)
    assert abs(recheck - word.achieved_error) < 1e-12


def test_compile_cnot_identity_word(cnot):
    word = compile_word(cnot, ExactMatrix(cnot), max_boxes=1)
    assert word.box_uses == 1
    assert word.achieved_error <= 1e-12


def test_compile_xx_interaction(cnot):
    target = scipy.linalg.expm(1j * 0.3 * np.kron(SX, SX))
    word = compile_word(cnot, ExactMatrix(target), max_boxes=2, seed=1)
    assert word.box_uses <= 2
    assert word.achieved_error <= 1e-6


def test_compile_canonical_targets(cnot):
    word = compile_word(cnot, CanonicalXXTarget(1.0), max_boxes=2, seed=2)
    assert word.achieved_error <= 1e-6
    cf = controlled_form_matrix(2)
    np.testing.assert_allclose(cf, np.diag([1, 1, -1, 1]), atol=1e-15)
    word2 = compile_word(cnot, ControlledFormTarget(), max_boxes=2, seed=2)
    assert word2.achieved_error <= 1e-6


def test_compile_haar_box_controlled_form():
    q = UnitaryOperator(random_unitary(4, 55).matrix, (2, 2))
    word = compile_word(q, ControlledFormTarget(), max_boxes=4, seed=3)
    assert word.achieved_error <= 1e-6
    assert word.box_uses <= 4


def test_compile_failure_reports_best():
    # a CZ-class target is unreachable with locals only; force n = 1 with a
    # box so weakly entangling that one use cannot reach it
    weak = UnitaryOperator(scipy.linalg.expm(1j * 0.05 * np.kron(SZ, SZ)),
                           (2, 2), tol=1e-9)
    with pytest.raises(CompileFailed) as info:
        compile_word(weak, ExactMatrix(CZ_MAT), max_boxes=1, restarts=4)
    assert info.value.best_error is not None
    assert info.value.best_error > 1e-3
    assert info.value.best_word is not None


def test_compile_determinism(cnot):
    w1 = compile_word(cnot, CanonicalXXTarget(1.0), max_boxes=2, seed=5)
    w2 = compile_word(cnot, CanonicalXXTarget(1.0), max_boxes=2, seed=5)
    assert w1.achieved_error == w2.achieved_error
    for i1, i2 in zip(w1.items, w2.items):
        if isinstance(i1, LocalLayer):
            assert np.array_equal(i1.a, i2.a)
            assert np.array_equal(i1.b, i2.b)
        else:
            assert i1.direction == i2.direction


def test_compile_even_parity_constraint(cnot, cz):
    word = compile_word(cnot, ExactMatrix(cz), max_boxes=4,
                        box_parity="even", seed=4)
    assert word.box_uses % 2 == 0
    assert word.achieved_error <= 1e-6
