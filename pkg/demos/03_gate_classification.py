"""Classifying two-qudit gates: product, swap-type, or entangling.

A two-qudit unitary maps every product state to a product state exactly
when it is A (x) B or (A (x) B) P with P the swap.  The operator Schmidt
decomposition (realign and SVD) detects this: rank one means product.
Entangling gates come with a witness, a product input whose image has a
nonzero second Schmidt coefficient.  The conjugation test recognizes the
canonical family exp(i x u1 (x) u2) with u1 = u2 = sigma_x (+) 0.
"""

import numpy as np

from unidisc import (UnitaryOperator, classify, extract_canonical_xx,
                     imprimitivity_witness, operator_schmidt, phase_distance,
                     random_unitary, swap_operator, tensor)
from unidisc.core import schmidt_coefficients
from unidisc.locality import canonical_xx_operator

CNOT = UnitaryOperator(np.array([[1, 0, 0, 0], [0, 1, 0, 0],
                                 [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
                       (2, 2))
CZ = UnitaryOperator(np.diag([1, 1, 1, -1]).astype(complex), (2, 2))

print("== operator Schmidt spectra ==")
for name, op in [("A (x) B", UnitaryOperator(
        tensor(random_unitary(2, 0), random_unitary(2, 1)).matrix, (2, 2))),
                 ("swap", swap_operator(2)),
                 ("CNOT", CNOT)]:
    s, _, _ = operator_schmidt(op)
    print(f"  {name:8s}: {np.round(s, 6)}")

print()
print("== classification with certificates ==")
prod = UnitaryOperator(tensor(random_unitary(2, 2), random_unitary(2, 3)).matrix,
                       (2, 2))
res = classify(prod)
a, b = res.factors
print(f"  random product -> {res.kind}, factor residual "
      f"{phase_distance(tensor(a, b), prod):.2e}")

sw = UnitaryOperator(prod.matrix @ swap_operator(2).matrix, (2, 2))
print(f"  product . swap -> {classify(sw).kind}")

res = classify(CNOT)
print(f"  CNOT -> {res.kind}, witness {np.round(res.witness.amplitudes, 4)}")
out = CNOT.matrix @ res.witness.amplitudes
print(f"    image Schmidt coefficients: "
      f"{np.round(schmidt_coefficients(out, (2, 2)), 6)}")

print()
print("== witnesses for other entangling gates ==")
for name, op in [("CZ", CZ)]:
    w = imprimitivity_witness(op)
    out = op.matrix @ w.amplitudes
    print(f"  {name}: witness {np.round(w.amplitudes, 4)} -> "
          f"Schmidt {np.round(schmidt_coefficients(out, (2, 2)), 6)}")

print()
print("== the canonical XX family and its conjugation test ==")
for d in (2, 3):
    op = canonical_xx_operator(d, 0.7)
    ext = extract_canonical_xx(op)
    print(f"  d = {d}: recovered x = {ext.x:.12f} (residual {ext.residual:.1e})")
print("  CNOT is not in the family:", extract_canonical_xx(CNOT))
