"""Spectral arc of a unitary and the single-run discrimination criterion.

The eigenvalues of a unitary live on the unit circle.  Theta(U) is the
length of the smallest arc containing all of them, and two different
unitaries U, V can be told apart with a single use exactly when
Theta(U^dag V) >= pi: only then does the convex hull of the eigenvalues of
U^dag V contain the origin, so some input state |psi> makes U|psi> and
V|psi> exactly orthogonal.
"""

import numpy as np

from unidisc import (UnitaryOperator, discriminating_state, identity_operator,
                     random_unitary, single_run_discriminable, theta)
from unidisc.exceptions import NotSingleRunDiscriminable


def show_arc(name, op):
    arc = theta(op)
    print(f"  Theta({name}) = {arc.theta:.6f}  "
          f"(eigenphases {[round(p, 4) for p in arc.eigenphases]})")


print("== arcs of familiar operators ==")
eye = identity_operator((2,))
pauli_z = UnitaryOperator(np.diag([1.0, -1.0]), (2,))
rot60 = UnitaryOperator(np.diag([1.0, np.exp(1j * np.pi / 3)]), (2,))
show_arc("I", eye)
show_arc("diag(1,-1)", pauli_z)
show_arc("diag(1, e^{i pi/3})", rot60)

print()
print("== the single-run criterion ==")
print("  I vs diag(1,-1):        ", single_run_discriminable(eye, pauli_z))
print("  I vs diag(1,e^{i pi/3}):", single_run_discriminable(eye, rot60))

print()
print("== a discriminating input when the arc reaches pi ==")
psi = discriminating_state(eye, pauli_z)
w = pauli_z.matrix
print("  |psi> =", np.round(psi.amplitudes, 6))
print("  |<psi| U^dag V |psi>| =",
      abs(np.vdot(psi.amplitudes, w @ psi.amplitudes)))

print()
print("== the refusal below pi ==")
try:
    discriminating_state(eye, rot60)
except NotSingleRunDiscriminable as exc:
    print("  refused:", exc)

print()
print("== a qutrit example: balanced roots of unity ==")
v3 = UnitaryOperator(np.diag(np.exp(2j * np.pi * np.arange(3) / 3)), (3,))
psi = discriminating_state(identity_operator((3,)), v3)
print("  |psi> =", np.round(psi.amplitudes, 6))
print("  overlap =", abs(np.vdot(psi.amplitudes, v3.matrix @ psi.amplitudes)))

print()
print("== random pairs usually have a wide arc ==")
for seed in range(3):
    u = random_unitary(3, 2 * seed)
    v = random_unitary(3, 2 * seed + 1)
    arc = theta(UnitaryOperator(u.matrix.conj().T @ v.matrix, (3,)))
    print(f"  seed {seed}: Theta(U^dag V) = {arc.theta:.4f}  "
          f"single-run = {arc.theta >= np.pi}")
