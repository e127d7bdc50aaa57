"""Pure-output superposition machines for orthogonal qubit pairs, plus the
overlap-class reference machine they are compared against.

A pure machine is a single 2x4 Kraus operator ``K`` with

    K (psi ⊗ psi_perp) = delta * (alpha psi + beta e^{i eta} psi_perp)

for every orthogonal pair.  Two layouts exist, ``K1`` and ``K2``; they
succeed on complementary regions of the Bloch sphere.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import qcore
from .errors import DegenerateOverlap, NotNormalized, NotOrthogonal
from .qcore import BlochVector, QubitState

ORTHO_TOL = 1e-10
# below this success probability the output branch is treated as absent
ZERO_PROB = 1e-20
# |alpha| or |beta| below this makes the relative phase undefined
COEFF_EPS = 1e-14


class MachineKind(enum.Enum):
    K1 = "k1"
    K2 = "k2"


@dataclass(frozen=True)
class MachineCoeffs:
    """Target amplitudes ``(alpha, beta)`` with ``|alpha|^2 + |beta|^2 = 1``."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        a, b = complex(self.alpha), complex(self.beta)
        if not (np.isfinite(a) and np.isfinite(b)):
            raise NotNormalized("coefficients must be finite")
        n2 = abs(a) ** 2 + abs(b) ** 2
        if abs(n2 - 1.0) > 1e-12:
            raise NotNormalized(f"|alpha|^2 + |beta|^2 = {n2!r}, expected 1")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @classmethod
    def from_polar(cls, abs_alpha: float, arg_alpha: float = 0.0, arg_beta: float = 0.0):
        """Build from ``|alpha|`` and the two phases; ``|beta|`` follows from normalization."""
        if not 0.0 <= abs_alpha <= 1.0:
            raise NotNormalized(f"|alpha| = {abs_alpha!r} outside [0, 1]")
        abs_beta = np.sqrt(1.0 - abs_alpha**2)
        return cls(abs_alpha * np.exp(1j * arg_alpha), abs_beta * np.exp(1j * arg_beta))

    @classmethod
    def balanced(cls):
        return cls(2**-0.5, 2**-0.5)

    @classmethod
    def random(cls, rng: np.random.Generator):
        z = rng.normal(size=2) + 1j * rng.normal(size=2)
        z /= np.linalg.norm(z)
        return cls(z[0], z[1])


def c_norm(coeffs: MachineCoeffs) -> float:
    """Largest admissible scale ``C = 1/sqrt(1 + |alpha beta|)``."""
    return 1.0 / np.sqrt(1.0 + abs(coeffs.alpha * coeffs.beta))


def kraus_layout(kind: MachineKind, coeffs: MachineCoeffs) -> np.ndarray:
    """Unscaled 2x4 matrix of the given kind (``C`` not applied)."""
    a, b = coeffs.alpha, coeffs.beta
    if MachineKind(kind) is MachineKind.K1:
        rows = [[a, 0, b, 0], [0, 0, a, b]]
    else:
        rows = [[-b, a, 0, 0], [0, -b, 0, a]]
    return np.array(rows, dtype=complex)


@dataclass(frozen=True)
class PureMachine:
    kind: MachineKind
    coeffs: MachineCoeffs
    kraus: np.ndarray = field(repr=False)
    c_norm: float


def build_pure_machine(kind, coeffs: MachineCoeffs) -> PureMachine:
    kind = MachineKind(kind)
    c = c_norm(coeffs)
    k = c * kraus_layout(kind, coeffs)
    k.setflags(write=False)
    return PureMachine(kind, coeffs, k, c)


@dataclass(frozen=True)
class SuperposeOutcome:
    raw: np.ndarray = field(repr=False)
    success_prob: float
    state: Optional[QubitState]
    eta: Optional[float]


def relative_phase(raw, psi, psi_perp, coeffs: MachineCoeffs) -> Optional[float]:
    """Extract ``eta`` from ``raw ∝ alpha psi + beta e^{i eta} psi_perp``.

    Returns ``None`` when ``alpha`` or ``beta`` vanishes, or when the
    ``psi`` component of ``raw`` does.
    """
    a, b = coeffs.alpha, coeffs.beta
    if abs(a) < COEFF_EPS or abs(b) < COEFF_EPS:
        return None
    c_psi = qcore.inner_product(psi, raw)
    c_perp = qcore.inner_product(psi_perp, raw)
    if abs(c_psi) < COEFF_EPS:
        return None
    return float(np.angle(c_perp * a / (b * c_psi)))


def _check_orthogonal(psi: QubitState, psi_perp: QubitState, tol: float = ORTHO_TOL):
    ov = abs(qcore.inner_product(psi.vec, psi_perp.vec))
    if ov > tol:
        raise NotOrthogonal(f"|<psi|psi_perp>| = {ov:.3e} exceeds {tol:.0e}")


def superpose_pure(machine: PureMachine, psi: QubitState, psi_perp: QubitState,
                   ortho_tol: float = ORTHO_TOL) -> SuperposeOutcome:
    """Run the machine on ``psi ⊗ psi_perp`` and post-select the success branch.

    Raises
    ------
    NotOrthogonal
        If the inputs are not orthogonal within ``ortho_tol``.  Use
        :func:`orthosup.analysis.nonorthogonal_residual` to probe that regime.
    """
    _check_orthogonal(psi, psi_perp, ortho_tol)
    raw = qcore.apply_operator(machine.kraus, qcore.tensor_product(psi.vec, psi_perp.vec))
    p = float(np.vdot(raw, raw).real)
    if p <= ZERO_PROB:
        return SuperposeOutcome(raw, p, None, None)
    state = QubitState.from_vector(qcore.normalize(raw))
    return SuperposeOutcome(raw, p, state, relative_phase(raw, psi.vec, psi_perp.vec, machine.coeffs))


def pure_success_probability(machine: PureMachine, psi_perp: QubitState) -> float:
    """``C^2 |<0|psi_perp>|^2`` for K1, ``C^2 |<1|psi_perp>|^2`` for K2."""
    amp = psi_perp.a0 if machine.kind is MachineKind.K1 else psi_perp.a1
    return machine.c_norm**2 * abs(amp) ** 2


def pure_success_probability_batch(machine: PureMachine, perp_amps: np.ndarray) -> np.ndarray:
    """Vectorized :func:`pure_success_probability` over an ``(N, 2)`` amplitude array."""
    col = 0 if machine.kind is MachineKind.K1 else 1
    return machine.c_norm**2 * np.abs(perp_amps[..., col]) ** 2


def duality_map(coeffs: MachineCoeffs) -> MachineCoeffs:
    """``(alpha, beta) -> (beta, -alpha)``: K1 on ``psi ⊗ psi_perp`` equals
    K2 with the mapped coefficients on ``psi_perp ⊗ psi``."""
    return MachineCoeffs(coeffs.beta, -coeffs.alpha)


# -- reference machine with prior overlap information ------------------------

@dataclass(frozen=True)
class GeneralMachineSpec:
    chi: QubitState
    coeffs: MachineCoeffs


def _overlap_phase(chi: QubitState, v: QubitState, tol: float = 1e-10) -> complex:
    ov = qcore.inner_product(chi.vec, v.vec)
    if abs(ov) <= tol:
        raise DegenerateOverlap(f"|<chi|state>| = {abs(ov):.3e}; phase undefined")
    return ov / abs(ov)


def general_output_state(spec: GeneralMachineSpec, psi: QubitState, phi: QubitState) -> np.ndarray:
    """Unnormalized ``alpha <chi|phi>/|.| psi + beta <chi|psi>/|.| phi``."""
    a, b = spec.coeffs.alpha, spec.coeffs.beta
    return a * _overlap_phase(spec.chi, phi) * psi.vec + b * _overlap_phase(spec.chi, psi) * phi.vec


def general_success_probability(spec: GeneralMachineSpec, psi: QubitState, phi: QubitState) -> float:
    """``c1 c2/(c1+c2) * N^2`` with ``c_k`` the squared overlaps with ``chi``.

    ``N^2 = 1 + 2 Re(conj(alpha) beta Tr(P_chi P_psi P_phi) / sqrt(c1 c2))``.
    When exactly one overlap vanishes the prefactor, and hence the
    probability, is zero.
    """
    p_chi, p_psi, p_phi = (qcore.projector(s.vec) for s in (spec.chi, psi, phi))
    c1 = float(np.trace(p_chi @ p_psi).real)
    c2 = float(np.trace(p_chi @ p_phi).real)
    if c1 + c2 <= 1e-14:
        raise DegenerateOverlap("both overlaps with chi vanish")
    if c1 * c2 <= 1e-28:
        return 0.0
    triple = np.trace(p_chi @ p_psi @ p_phi)
    a, b = spec.coeffs.alpha, spec.coeffs.beta
    n2 = 1.0 + 2.0 * float(np.real(np.conj(a) * b * triple / np.sqrt(c1 * c2)))
    return c1 * c2 / (c1 + c2) * n2


def orthogonal_qubit_probability(n: BlochVector, s: BlochVector) -> float:
    """Reference-machine success probability ``(1 - (n·s)^2)/4`` for an
    orthogonal pair with Bloch vectors ``±n`` and reference ``s``."""
    d = n.dot(s)
    return 0.25 * (1.0 - d * d)
