"""Why a universal superposer for arbitrary inputs is impossible.

Clone-and-delete gives only a mixture: for orthogonal inputs the fidelity
with the target superposition is exactly 1/2.  And with n copies available
the overlap of the inputs shrinks as |<phi|psi>|^n, which we track in log
space so large n does not underflow.
"""

from orthosup import MachineCoeffs, clone_delete_demo, qcore
from orthosup.analysis import state_with_overlap

bal = MachineCoeffs.balanced()
rep = clone_delete_demo(qcore.PLUS, qcore.MINUS, bal, 1)
print("orthogonal inputs, fidelity:", round(rep.fidelity, 12))

phi = qcore.KET0
for s in (0.2, 0.6, 0.95):
    psi = state_with_overlap(s, 0.4)
    rep = clone_delete_demo(phi, psi, bal, 200)
    print(f"overlap {s}: fidelity {rep.fidelity:.6f}, overlap after 200 copies {rep.overlap_decay:.3e}")
