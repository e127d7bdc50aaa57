"""Three-qubit circuit that superposes an orthogonal pair with unit total
success probability.

Wires, most significant first: ancilla, input 1 (carries ``psi``),
input 2 (carries ``psi_perp``).  The ancilla controls a swap of the two
inputs followed by an X on input 1.  The ancilla is then measured in the
X basis (outcome ``mu = ±1``) and input 1 in the Z basis (outcome ``n``).
Every one of the four branches leaves input 2 in
``alpha psi + beta e^{i eta_{mu,n}} psi_perp``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from . import qcore
from .machines import MachineCoeffs, relative_phase
from .qcore import Convention, QubitState

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
P0 = np.array([[1, 0], [0, 0]], dtype=complex)
P1 = np.array([[0, 0], [0, 1]], dtype=complex)
SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)

OUTCOMES: Tuple[Tuple[int, int], ...] = ((+1, 0), (+1, 1), (-1, 0), (-1, 1))

ZERO_PROB = 1e-20


def _kron(*ops):
    out = np.array([[1]], dtype=complex)
    for op in ops:
        out = np.kron(out, op)
    return out


def x_basis_ket(mu: int) -> np.ndarray:
    return np.array([1, mu], dtype=complex) / np.sqrt(2)


def z_basis_ket(n: int) -> np.ndarray:
    return I2[n].copy()


@dataclass(frozen=True)
class MeasurementOutcome:
    mu: int
    n: int

    def __post_init__(self):
        if (self.mu, self.n) not in OUTCOMES:
            raise ValueError(f"invalid outcome mu={self.mu}, n={self.n}")

    @property
    def label(self) -> str:
        return f"{'+' if self.mu > 0 else '-'}{self.n}"


@dataclass(frozen=True)
class CircuitResult:
    outcome: MeasurementOutcome
    probability: float
    post_state: Optional[QubitState]
    eta: Optional[float]
    branch: np.ndarray = field(repr=False, default=None)


@dataclass(frozen=True)
class CircuitMachine:
    coeffs: MachineCoeffs
    unitary: np.ndarray = field(repr=False)
    kraus_set: Tuple[np.ndarray, ...] = field(repr=False)


def circuit_unitary() -> np.ndarray:
    """``(|0><0|⊗I⊗I + |1><1|⊗X⊗I) · (|0><0|⊗I⊗I + |1><1|⊗SWAP)``."""
    cswap = _kron(P0, I2, I2) + _kron(P1, SWAP)
    cx = _kron(P0, I2, I2) + _kron(P1, X, I2)
    return cx @ cswap


def measurement_projector(mu: int, n: int) -> np.ndarray:
    """``|mu><mu| ⊗ |n><n| ⊗ I`` on the 8-dim register."""
    m = x_basis_ket(mu)
    z = z_basis_ket(n)
    return _kron(np.outer(m, m.conj()), np.outer(z, z.conj()), I2)


def ancilla_state(coeffs: MachineCoeffs) -> QubitState:
    """Ancilla preparation ``beta|0> + alpha|1>``."""
    return QubitState(coeffs.beta, coeffs.alpha)


def build_circuit(coeffs: MachineCoeffs) -> CircuitMachine:
    u = circuit_unitary()
    kraus = tuple(measurement_projector(mu, n) @ u for mu, n in OUTCOMES)
    for k in (u, *kraus):
        k.setflags(write=False)
    return CircuitMachine(coeffs, u, kraus)


def verify_completeness(machine: CircuitMachine) -> float:
    """Max-norm deviation of ``sum A^† A`` from the identity."""
    total = sum(a.conj().T @ a for a in machine.kraus_set)
    return float(np.max(np.abs(total - np.eye(8))))


def _branch_state(machine: CircuitMachine, idx: int, register: np.ndarray) -> np.ndarray:
    """Apply ``A_{mu,n}`` and read off the (unnormalized) state of input 2."""
    mu, n = OUTCOMES[idx]
    out = machine.kraus_set[idx] @ register
    bra = np.kron(x_basis_ket(mu), z_basis_ket(n)).conj()
    return bra @ out.reshape(4, 2)


def run_circuit_enumerate(machine: CircuitMachine, psi: QubitState,
                          psi_perp: Optional[QubitState] = None) -> List[CircuitResult]:
    """All four measurement branches with probabilities and post-states.

    ``psi_perp`` defaults to :func:`qcore.orthogonal_complement`.  Passing a
    partner with a different global phase leaves every probability and
    post-state ray unchanged; only ``eta``, which is quoted against
    ``psi_perp``, shifts.
    """
    if psi_perp is None:
        psi_perp = qcore.orthogonal_complement(psi)
    register = qcore.tensor_product(
        qcore.tensor_product(ancilla_state(machine.coeffs).vec, psi.vec), psi_perp.vec
    )
    results = []
    for idx, (mu, n) in enumerate(OUTCOMES):
        v = _branch_state(machine, idx, register)
        p = float(np.vdot(v, v).real)
        if p <= ZERO_PROB:
            results.append(CircuitResult(MeasurementOutcome(mu, n), p, None, None, v))
            continue
        state = QubitState.from_vector(v / np.sqrt(p))
        eta = relative_phase(v, psi.vec, psi_perp.vec, machine.coeffs)
        results.append(CircuitResult(MeasurementOutcome(mu, n), p, state, eta, v))
    return results


def branch_phase_factor(psi: QubitState, psi_perp: QubitState, mu: int, n: int) -> complex:
    """``mu <n|psi> / <n|X|psi_perp>``; a pure phase for orthogonal inputs."""
    den = (X @ psi_perp.vec)[n]
    return mu * psi.vec[n] / den


def sample_circuit(machine: CircuitMachine, psi: QubitState, seed: int,
                   psi_perp: Optional[QubitState] = None) -> CircuitResult:
    """Draw one branch by inverse CDF over the exact probabilities."""
    return sample_circuit_many(machine, psi, seed, 1, psi_perp)[0]


def sample_circuit_many(machine: CircuitMachine, psi: QubitState, seed: int, size: int,
                        psi_perp: Optional[QubitState] = None) -> List[CircuitResult]:
    results = run_circuit_enumerate(machine, psi, psi_perp)
    cdf = np.cumsum([r.probability for r in results])
    rng = np.random.default_rng(seed)
    u = rng.random(size) * cdf[-1]
    idx = np.minimum(np.searchsorted(cdf, u, side="right"), len(results) - 1)
    return [results[i] for i in idx]


def outcome_counts(machine: CircuitMachine, psi: QubitState, seed: int, size: int) -> np.ndarray:
    """Counts per outcome (in ``OUTCOMES`` order) over ``size`` seeded draws."""
    draws = sample_circuit_many(machine, psi, seed, size)
    labels = [OUTCOMES.index((r.outcome.mu, r.outcome.n)) for r in draws]
    return np.bincount(labels, minlength=4)


@dataclass(frozen=True)
class TableRow:
    mu: int
    n: int
    phase: complex
    probability: float


def table_one(coeffs: MachineCoeffs, theta: float, phi: float) -> List[TableRow]:
    """Branch phases and probabilities for ``psi`` in APPENDIX angles.

    Phases are ``e^{i eta_{mu,n}}`` relative to the APPENDIX partner
    ``(cos θ/2, -sin θ/2 e^{iφ})``.  Probabilities come out as
    ``sin^2(θ/2)/2`` for ``n = 0`` and ``cos^2(θ/2)/2`` for ``n = 1``.
    """
    psi, perp = qcore.bloch_pair(theta, phi, Convention.APPENDIX)
    machine = build_circuit(coeffs)
    rows = []
    for r in run_circuit_enumerate(machine, psi, perp):
        mu, n = r.outcome.mu, r.outcome.n
        if r.eta is not None:
            phase = complex(np.exp(1j * r.eta))
        elif abs((X @ perp.vec)[n]) > 1e-300:
            phase = complex(branch_phase_factor(psi, perp, mu, n))
        else:
            phase = complex("nan+nanj")
        rows.append(TableRow(mu, n, phase, r.probability))
    return rows
