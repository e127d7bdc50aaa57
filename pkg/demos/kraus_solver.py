"""Recover the machines from their defining constraints.

Demanding that the output be orthogonal to the complement of the target
superposition, for every input, pins the Kraus operator down to a scale.
Two sign choices for the relative phase give the two machines.
"""

import numpy as np

from orthosup import Branch, MachineCoeffs, build_pure_machine, solve_kraus
from orthosup.analysis import kraus_nullspace, proportionality_variance

coeffs = MachineCoeffs.from_polar(0.6, 0.2, 1.3)
for branch, kind in ((Branch.ETA_EQ_PHI, "k1"), (Branch.ETA_EQ_MINUS_PHI, "k2")):
    sol = solve_kraus(coeffs, branch)
    ref = build_pure_machine(kind, coeffs).kraus
    k, sv = kraus_nullspace(coeffs, branch)
    print(branch.value)
    print("  residual              :", f"{sol.residual:.2e}")
    print("  c_max^2 (1+|ab|)      :", sol.c_max**2 * (1 + abs(coeffs.alpha * coeffs.beta)))
    print("  ratio variance vs", kind, ":", f"{proportionality_variance(sol.kraus, ref):.2e}")
    print("  null-space singular values:", np.round(sv[-3:], 12))
