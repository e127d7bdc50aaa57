"""Superposing |+> and |-> with the two single-Kraus machines.

Both machines take an orthogonal pair and, on success, hand back
alpha|psi> + beta e^{i eta}|psi_perp>.  The success probability depends on
the input, so we also print it along a meridian of the Bloch sphere.
"""

import numpy as np

from orthosup import MachineCoeffs, build_pure_machine, duality_map, qcore, superpose_pure

coeffs = MachineCoeffs.balanced()
k1 = build_pure_machine("k1", coeffs)
out = superpose_pure(k1, qcore.PLUS, qcore.MINUS)
print("K1 on |+>|->")
print("  success probability:", round(out.success_prob, 12))
print("  output state       :", np.round(out.state.vec, 12))
print("  relative phase eta :", out.eta)

# K2 built from the mapped coefficients (beta, -alpha) acts on the swapped pair
k2 = build_pure_machine("k2", duality_map(coeffs))
out2 = superpose_pure(k2, qcore.MINUS, qcore.PLUS)
print("dual K2 on |->|+> gives the same vector:", np.allclose(out.raw, out2.raw))

print("\ntheta   P(K1)     P(K2)")
for theta in np.linspace(0, np.pi, 7):
    psi, perp = qcore.bloch_pair(theta, 0.3)
    p1 = superpose_pure(k1, psi, perp).success_prob
    p2 = superpose_pure(build_pure_machine("k2", coeffs), psi, perp).success_prob
    print(f"{theta:5.3f}  {p1:.6f}  {p2:.6f}")
