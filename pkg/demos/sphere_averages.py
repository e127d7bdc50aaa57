"""Average success probability over the Bloch sphere.

For the pure machines the average is 1/(2(1+|alpha beta|)), at least 1/3.
The general machine built from one fixed reference state averages 1/6 on
orthogonal qubit pairs, half of the pure machines' balanced value.
"""

import numpy as np

from orthosup import (BlochVector, IntegrationSpec, MachineCoeffs, Method,
                      average_general_orthogonal, average_pure_machine)

quad = IntegrationSpec(Method.QUADRATURE, 64, 64)
mc = IntegrationSpec(Method.MONTE_CARLO, n_samples=200_000, seed=1)

print("|alpha|  quadrature   closed form")
for a in np.linspace(0, 1, 6):
    r = average_pure_machine("k1", MachineCoeffs.from_polar(a), quad)
    print(f"{a:5.2f}   {r.numeric_average:.10f}  {r.closed_form:.10f}")

r = average_pure_machine("k2", MachineCoeffs.balanced(), mc)
print(f"\nMonte Carlo K2 balanced: {r.numeric_average:.5f} +/- {r.std_error:.5f}")

g = average_general_orthogonal(BlochVector(0.0, 0.0, 1.0), quad)
print(f"general machine average: {g.numeric_average:.10f} (closed form {g.closed_form})")
