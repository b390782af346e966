"""Shared gates and generators for the test suite."""

import numpy as np
import pytest

from unidisc.core import UnitaryOperator, identity_operator, random_unitary, tensor
from unidisc.locality import swap_operator

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
HAD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)

CNOT_MAT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
                    dtype=complex)
CZ_MAT = np.diag([1, 1, 1, -1]).astype(complex)


@pytest.fixture
def cnot():
    return UnitaryOperator(CNOT_MAT, (2, 2))


@pytest.fixture
def cz():
    return UnitaryOperator(CZ_MAT, (2, 2))


@pytest.fixture
def swap2():
    return swap_operator(2)


@pytest.fixture
def eye4():
    return identity_operator((2, 2))


def product_operator(d, seed):
    """Random A (x) B as a two-qudit operator."""
    pair = tensor(random_unitary(d, seed), random_unitary(d, seed + 50021))
    return UnitaryOperator(pair.matrix, (d, d))


def swap_type_operator(d, seed):
    """Random (A (x) B) P as a two-qudit operator."""
    return UnitaryOperator(product_operator(d, seed).matrix
                           @ swap_operator(d).matrix, (d, d))


def haar_two_qudit(d, seed):
    """Haar two-qudit unitary (imprimitive with probability one)."""
    return UnitaryOperator(random_unitary(d * d, seed).matrix, (d, d))
