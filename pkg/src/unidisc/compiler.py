"""Compilation of a target two-qudit unitary into a word of local layers
interleaved with uses of a fixed entangling black box (forward or reverse).

A word looks like

    L_0  Q  L_1  Q  ...  Q  L_n        (applied left to right)

with every ``L_k = a_k (x) b_k`` a pair of single-qudit unitaries and each
``Q`` slot either the box or its inverse.  Compilation is iterative
deepening on the box count; for each direction pattern the local layers are
optimized by cyclic polar sweeps: with all layers but one frozen the
objective |tr(T^dag W)| is linear in the free layer, and its optimal pair
(a, b) follows from alternating SVD polar factors.  The sweep increases the
objective monotonically and converges to machine precision near an exact
word.
"""

from dataclasses import dataclass
from itertools import product as iter_product

import numpy as np

from .core import (DEFAULT_TOLERANCES, UnitaryOperator, phase_distance,
                   random_unitary)
from .exceptions import CompileFailed, DimensionMismatch, ValidationError
from .locality import canonical_xx_matrix

FORWARD = "forward"
REVERSE = "reverse"

_SWEEPS = 80
_INNER = 6
_RESTARTS = 24


@dataclass(frozen=True)
class LocalLayer:
    """A product layer a (x) b of single-qudit unitaries."""

    a: np.ndarray
    b: np.ndarray

    def matrix(self):
        return np.kron(self.a, self.b)

    def dagger(self):
        return LocalLayer(self.a.conj().T, self.b.conj().T)


@dataclass(frozen=True)
class Box:
    """One use of the black box, forward or reverse."""

    direction: str = FORWARD

    def __post_init__(self):
        if self.direction not in (FORWARD, REVERSE):
            raise ValidationError(f"unknown box direction {self.direction!r}")

    def flipped(self):
        return Box(REVERSE if self.direction == FORWARD else FORWARD)


@dataclass(frozen=True)
class CircuitWord:
    """Alternating local layers and box slots, ending and starting local."""

    items: tuple
    achieved_error: float = 0.0

    def __post_init__(self):
        items = tuple(self.items)
        if not items or not isinstance(items[0], LocalLayer) \
                or not isinstance(items[-1], LocalLayer):
            raise ValidationError("a word must start and end with a LocalLayer")
        for first, second in zip(items, items[1:]):
            if isinstance(first, Box) == isinstance(second, Box):
                raise ValidationError("layers and boxes must alternate")
        object.__setattr__(self, "items", items)

    @property
    def box_uses(self):
        return sum(1 for item in self.items if isinstance(item, Box))

    @property
    def layers(self):
        return [item for item in self.items if isinstance(item, LocalLayer)]

    @property
    def directions(self):
        return [item.direction for item in self.items if isinstance(item, Box)]


@dataclass(frozen=True)
class ExactMatrix:
    """Compile toward an explicit unitary matrix."""

    matrix: np.ndarray


@dataclass(frozen=True)
class ControlledFormTarget:
    """Canonical controlled unitary |0><0| (x) I + (I - |0><0|) (x) Z_d,
    Z_d = diag(-1, 1, ..., 1)."""


@dataclass(frozen=True)
class CanonicalXXTarget:
    """exp(i x u1 (x) u2) with u1 = u2 = sigma_x (+) 0."""

    x: float = 1.0


def controlled_form_matrix(d):
    z = np.eye(d, dtype=complex)
    z[0, 0] = -1.0
    p0 = np.zeros((d, d), dtype=complex)
    p0[0, 0] = 1.0
    return np.kron(p0, np.eye(d)) + np.kron(np.eye(d) - p0, z)


def target_matrix(target, d):
    if isinstance(target, ExactMatrix):
        m = target.matrix
        return m.matrix if isinstance(m, UnitaryOperator) else np.asarray(m, dtype=complex)
    if isinstance(target, ControlledFormTarget):
        return controlled_form_matrix(d)
    if isinstance(target, CanonicalXXTarget):
        return canonical_xx_matrix(d, target.x)
    raise ValidationError(f"unknown compile target {target!r}")


def evaluate_word(word, q):
    """Multiply the word, substituting q / q^dag into the box slots.

    Items are in application order: the first item acts first.
    """
    mq = q.matrix if isinstance(q, UnitaryOperator) else np.asarray(q, dtype=complex)
    dim = mq.shape[0]
    out = np.eye(dim, dtype=complex)
    for item in word.items:
        if isinstance(item, Box):
            step = mq if item.direction == FORWARD else mq.conj().T
        else:
            step = item.matrix()
            if step.shape[0] != dim:
                raise DimensionMismatch(
                    f"layer dimension {step.shape[0]} vs box {dim}")
        out = step @ out
    if isinstance(q, UnitaryOperator):
        return UnitaryOperator(out, q.dims, tol=1e-8)
    return out


def word_adjoint(word):
    """Word evaluating to the adjoint: reversed, layers daggered, boxes flipped."""
    items = []
    for item in reversed(word.items):
        items.append(item.flipped() if isinstance(item, Box) else item.dagger())
    return CircuitWord(tuple(items), word.achieved_error)


def _direction_patterns(n, limit):
    patterns = sorted(iter_product((FORWARD, REVERSE), repeat=n),
                      key=lambda p: (sum(x == REVERSE for x in p), p))
    return patterns[:limit]


def _sweep_layers(layers, boxes, target, d):
    """One cyclic pass of closed-form layer updates; returns the word matrix."""
    n = len(boxes)
    dim = d * d
    for idx in range(n + 1):
        prefix = np.eye(dim, dtype=complex)
        for k in range(idx):
            prefix = boxes[k] @ (np.kron(layers[k][0], layers[k][1]) @ prefix)
        # operator = suffix . L_idx . prefix, suffix applied last
        suffix = np.eye(dim, dtype=complex)
        for k in range(idx, n):
            suffix = np.kron(layers[k + 1][0], layers[k + 1][1]) @ boxes[k] @ suffix
        env = suffix.conj().T @ target @ prefix.conj().T
        e4 = env.reshape(d, d, d, d)
        a, b = layers[idx]
        for _ in range(_INNER):
            ga = np.einsum("ijkl,jl->ik", e4.conj(), b)
            u, _, vh = np.linalg.svd(ga.T)
            a_new = (vh.conj().T @ u.conj().T)
            gb = np.einsum("ijkl,ik->jl", e4.conj(), a_new)
            u, _, vh = np.linalg.svd(gb.T)
            b_new = (vh.conj().T @ u.conj().T)
            if np.linalg.norm(a_new - a) + np.linalg.norm(b_new - b) < 1e-14:
                a, b = a_new, b_new
                break
            a, b = a_new, b_new
        layers[idx] = (a, b)
    w = np.eye(dim, dtype=complex)
    for k in range(n + 1):
        w = np.kron(layers[k][0], layers[k][1]) @ w
        if k < n:
            w = boxes[k] @ w
    return w


def compile_word(q, target, max_boxes=None, tol=DEFAULT_TOLERANCES, seed=0,
                 restarts=_RESTARTS, box_parity=None, max_patterns=8):
    """Find a circuit word through q matching the target up to global phase.

    Iterative deepening on the box count n; direction patterns are searched
    in order of increasing reverse-use count; each pattern gets seeded
    multi-start polar-sweep optimization of the n+1 local layers.  The first
    word whose phase distance to the target is within the compile tolerance
    is returned.  ``box_parity="even"`` restricts n to even values.

    Raises
    ------
    CompileFailed
        carrying the best error and word found, when the budget is spent.
    """
    d = q.require_two_party()
    t_mat = target_matrix(target, d)
    if t_mat.shape[0] != d * d:
        raise DimensionMismatch("target dimension does not match the box")
    if max_boxes is None:
        max_boxes = 8 if d == 2 else 16
    if max_boxes < 1:
        raise ValidationError("max_boxes must be at least 1")

    mq = q.matrix
    best_err, best_word = np.inf, None
    depths = [n for n in range(1, max_boxes + 1)
              if box_parity != "even" or n % 2 == 0]
    for n in depths:
        for p_idx, pattern in enumerate(_direction_patterns(n, max_patterns)):
            boxes = [mq if direction == FORWARD else mq.conj().T
                     for direction in pattern]
            for r in range(restarts):
                if r == 0:
                    layers = [(np.eye(d, dtype=complex), np.eye(d, dtype=complex))
                              for _ in range(n + 1)]
                else:
                    base = (seed * 1_000_003 + n * 10_007 + p_idx * 101 + r) * 2
                    layers = [(random_unitary(d, base + 2 * k).matrix,
                               random_unitary(d, base + 2 * k + 1).matrix)
                              for k in range(n + 1)]
                prev = -1.0
                for _ in range(_SWEEPS):
                    w = _sweep_layers(layers, boxes, t_mat, d)
                    score = abs(np.trace(t_mat.conj().T @ w))
                    if score - prev < 1e-15:
                        break
                    prev = score
                err = phase_distance(w, t_mat)
                if err < best_err:
                    best_err = err
                    best_word = _assemble_word(layers, pattern, err)
                if err <= tol.compile:
                    return best_word
    raise CompileFailed(
        f"no word within tolerance at max_boxes={max_boxes}; "
        f"best error {best_err:.3e}",
        best_error=float(best_err), best_word=best_word)


def _assemble_word(layers, pattern, err):
    items = [LocalLayer(layers[0][0].copy(), layers[0][1].copy())]
    for k, direction in enumerate(pattern):
        items.append(Box(direction))
        items.append(LocalLayer(layers[k + 1][0].copy(), layers[k + 1][1].copy()))
    return CircuitWord(tuple(items), achieved_error=float(err))
