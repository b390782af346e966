"""Tests for run budgets and sequential-scheme synthesis."""

import numpy as np
import pytest

from unidisc.arc import theta
from unidisc.core import UnitaryOperator, identity_operator, random_unitary
from unidisc.exceptions import OperatorsEqual
from unidisc.sequential import (SequentialScheme, evaluate_scheme,
                                find_sequential_scheme, required_runs)

from conftest import SZ


def diag_op(phases):
    return UnitaryOperator(np.diag(np.exp(1j * np.asarray(phases))),
                           (len(phases),))


def test_required_runs_formula():
    eye = identity_operator((2,))
    # Theta = pi/3 -> N = 2
    assert required_runs(eye, diag_op([0.0, np.pi / 3])) == 2
    # Theta = pi -> single run
    assert required_runs(eye, UnitaryOperator(SZ, (2,))) == 0
    # Theta = 2 pi / 5 -> ceil(2.5) - 1 = 2
    assert required_runs(eye, diag_op([0.0, 2 * np.pi / 5])) == 2


def test_required_runs_rejects_equal():
    u = random_unitary(2, 1)
    with pytest.raises(OperatorsEqual):
        required_runs(u, u)


def test_scheme_single_run_reduces_to_state():
    eye = identity_operator((2,))
    scheme = find_sequential_scheme(eye, UnitaryOperator(SZ, (2,)))
    assert len(scheme.aux_ops) == 0
    assert scheme.uses == 1
    np.testing.assert_allclose(np.abs(scheme.input.amplitudes),
                               [1 / np.sqrt(2)] * 2, atol=1e-12)
    assert scheme.overlap <= 1e-12


def test_scheme_rot60_needs_two_aux():
    eye = identity_operator((2,))
    scheme = find_sequential_scheme(eye, diag_op([0.0, np.pi / 3]))
    assert len(scheme.aux_ops) == 2
    assert scheme.overlap <= 1e-6


def test_scheme_rejects_equal_pair():
    u = random_unitary(3, 4)
    with pytest.raises(OperatorsEqual):
        find_sequential_scheme(u, u)


def test_evaluate_scheme_examples():
    eye = identity_operator((2,))
    sz = UnitaryOperator(SZ, (2,))
    # hand-built scheme: psi = |+>, no aux -> <psi|sz|psi> = 0
    psi = np.array([1.0, 1.0]) / np.sqrt(2)
    from unidisc.core import PureState
    hand = SequentialScheme((), PureState(psi, (2,)), 0.0)
    assert evaluate_scheme(hand, eye, sz) < 1e-12
    # identical branches with identity aux give overlap 1
    aux = (identity_operator((2,)),)
    silly = SequentialScheme(aux, PureState(psi, (2,)), 1.0)
    assert abs(evaluate_scheme(silly, eye, eye) - 1.0) < 1e-12


def test_evaluate_matches_certificate():
    eye = identity_operator((2,))
    for k, delta in enumerate([np.pi / 2, np.pi / 3, 2 * np.pi / 5]):
        scheme = find_sequential_scheme(eye, diag_op([0.0, delta]), seed=k)
        assert evaluate_scheme(scheme, eye, diag_op([0.0, delta])) <= 1e-6
        assert abs(evaluate_scheme(scheme, eye, diag_op([0.0, delta]))
                   - scheme.overlap) < 1e-9


def test_scheme_never_exceeds_budget_and_is_monotone():
    for k in range(12):
        u = random_unitary(2, 5 * k)
        v = random_unitary(2, 5 * k + 3)
        n = required_runs(u, v)
        scheme = find_sequential_scheme(u, v, seed=k)
        assert len(scheme.aux_ops) <= n
        assert evaluate_scheme(scheme, u, v) <= 1e-6
        # arc of the effective operator never regresses along the chain
        left, right = u.matrix.copy(), v.matrix.copy()
        arcs = [theta(UnitaryOperator(left.conj().T @ right, u.dims)).theta]
        for x in scheme.aux_ops:
            left = u.matrix @ x.matrix @ left
            right = v.matrix @ x.matrix @ right
            arcs.append(theta(UnitaryOperator(left.conj().T @ right,
                                              u.dims, tol=1e-8)).theta)
        for prev, nxt in zip(arcs, arcs[1:]):
            assert nxt >= prev - 1e-9


@pytest.mark.parametrize("d", [2, 3])
def test_scheme_random_pairs_certified(d):
    for k in range(8):
        u = random_unitary(d, 100 + k)
        v = random_unitary(d, 200 + k)
        scheme = find_sequential_scheme(u, v, seed=k)
        assert evaluate_scheme(scheme, u, v) <= 1e-6
        assert scheme.uses == len(scheme.aux_ops) + 1


def test_scheme_determinism():
    u = random_unitary(2, 42)
    v = random_unitary(2, 43)
    s1 = find_sequential_scheme(u, v, seed=9)
    s2 = find_sequential_scheme(u, v, seed=9)
    assert len(s1.aux_ops) == len(s2.aux_ops)
    for a, b in zip(s1.aux_ops, s2.aux_ops):
        assert np.array_equal(a.matrix, b.matrix)
    assert np.array_equal(s1.input.amplitudes, s2.input.amplitudes)


def test_two_qudit_global_scheme():
    # sequential synthesis also covers composite spaces
    u = UnitaryOperator(random_unitary(4, 300).matrix, (2, 2))
    v = UnitaryOperator(random_unitary(4, 301).matrix, (2, 2))
    scheme = find_sequential_scheme(u, v, seed=1)
    assert evaluate_scheme(scheme, u, v) <= 1e-6
