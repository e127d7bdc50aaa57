"""The three-qubit circuit never fails: every branch yields the superposition.

We print the four branches for one input, then check the empirical
frequencies of a seeded sampling run against the exact probabilities.
"""

import numpy as np

from orthosup import MachineCoeffs, build_circuit, table_one
from orthosup.circuit import OUTCOMES, outcome_counts
from orthosup.qcore import Convention, bloch_pair

coeffs = MachineCoeffs.from_polar(0.6, 0.0, 0.5)
theta, phi = 1.1, 0.7

print("mu  n   phase e^{i eta}          probability")
for row in table_one(coeffs, theta, phi):
    print(f"{row.mu:+d}  {row.n}   {row.phase:.6f}   {row.probability:.6f}")
print("half-angle check:", 0.5 * np.sin(theta / 2) ** 2, 0.5 * np.cos(theta / 2) ** 2)

psi, _ = bloch_pair(theta, phi, Convention.APPENDIX)
counts = outcome_counts(build_circuit(coeffs), psi, seed=7, size=100_000)
for (mu, n), c in zip(OUTCOMES, counts):
    print(f"outcome ({mu:+d},{n}): {c / 1e5:.4f}")
