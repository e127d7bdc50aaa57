"""Bloch-sphere averages, the Kraus-operator solver for pure machines,
and two demonstrations of why orthogonality matters.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import qcore
from .errors import (
    DegenerateBasis,
    DegenerateCoefficient,
    DegenerateTarget,
    ZeroVector,
)
from .machines import (
    COEFF_EPS,
    MachineCoeffs,
    PureMachine,
    build_pure_machine,
    pure_success_probability,
    pure_success_probability_batch,
)
from .qcore import BlochVector, Convention, QubitState


# -- sphere averages -----------------------------------------------------------

class Method(enum.Enum):
    QUADRATURE = "quadrature"
    MONTE_CARLO = "monte-carlo"


@dataclass(frozen=True)
class IntegrationSpec:
    method: Method = Method.QUADRATURE
    n_theta: int = 64
    n_phi: int = 64
    n_samples: int = 1_000_000
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        for name in ("n_theta", "n_phi", "n_samples"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be >= 1")


@dataclass(frozen=True)
class AverageReport:
    machine_id: str
    numeric_average: float
    closed_form: float
    abs_error: float
    std_error: Optional[float] = None


def sphere_nodes(n_theta: int, n_phi: int):
    """Product rule for the normalized sphere measure.

    Gauss-Legendre in ``cos θ`` times the periodic trapezoid rule in ``φ``.
    Returns flat ``theta``, ``phi`` and ``weights`` (summing to 1).
    """
    u, wu = np.polynomial.legendre.leggauss(n_theta)
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    th, ph = np.meshgrid(np.arccos(u), phi, indexing="ij")
    w = np.outer(wu / 2, np.full(n_phi, 1.0 / n_phi))
    return th.ravel(), ph.ravel(), w.ravel()


def sphere_samples(n: int, seed: int):
    """Uniform points on the sphere as ``(theta, phi)`` arrays."""
    rng = np.random.default_rng(seed)
    u = rng.uniform(-1.0, 1.0, n)
    phi = rng.uniform(0.0, 2 * np.pi, n)
    return np.arccos(u), phi


def _average(f: Callable, spec: IntegrationSpec):
    if spec.method is Method.QUADRATURE:
        th, ph, w = sphere_nodes(spec.n_theta, spec.n_phi)
        return float(np.sum(w * f(th, ph))), None
    th, ph = sphere_samples(spec.n_samples, spec.seed)
    vals = f(th, ph)
    return float(vals.mean()), float(vals.std(ddof=1) / np.sqrt(len(vals))) if len(vals) > 1 else 0.0


def pure_closed_form_average(coeffs: MachineCoeffs) -> float:
    return 1.0 / (2.0 * (1.0 + abs(coeffs.alpha) * abs(coeffs.beta)))


def average_pure_machine(kind, coeffs: MachineCoeffs, spec: IntegrationSpec) -> AverageReport:
    """Sphere average of the pure machine's success probability.

    ``psi`` is drawn over the sphere (MAIN convention) and fed with its
    complement.  Quadrature calls :func:`pure_success_probability` point by
    point; Monte Carlo uses the vectorized twin.
    """
    machine = build_pure_machine(kind, coeffs)

    def f(th, ph):
        if spec.method is Method.QUADRATURE:
            return np.array([
                pure_success_probability(
                    machine,
                    qcore.bloch_pair(t, p, Convention.MAIN)[1],
                )
                for t, p in zip(th, ph)
            ])
        # complement of (cos θ/2, sin θ/2 e^{iφ}) is (sin θ/2 e^{-iφ}, -cos θ/2)
        perp = np.stack([np.sin(th / 2) * np.exp(-1j * ph), -np.cos(th / 2) + 0j], axis=-1)
        return pure_success_probability_batch(machine, perp)

    num, se = _average(f, spec)
    cf = pure_closed_form_average(coeffs)
    return AverageReport(machine.kind.value, num, cf, abs(num - cf), se)


def average_general_orthogonal(s: BlochVector, spec: IntegrationSpec) -> AverageReport:
    """Sphere average of the reference machine on orthogonal pairs; exactly 1/6."""
    sv = s.as_array()

    def f(th, ph):
        ndots = (np.sin(th) * np.cos(ph) * sv[0] + np.sin(th) * np.sin(ph) * sv[1]
                 + np.cos(th) * sv[2])
        return 0.25 * (1.0 - ndots**2)

    num, se = _average(f, spec)
    cf = 1.0 / 6.0
    return AverageReport("general", num, cf, abs(num - cf), se)


# -- Kraus-operator solver -----------------------------------------------------

class Branch(enum.Enum):
    ETA_EQ_PHI = "eta-eq-phi"
    ETA_EQ_MINUS_PHI = "eta-eq-minus-phi"

    @property
    def sign(self) -> int:
        return 1 if self is Branch.ETA_EQ_PHI else -1


@dataclass(frozen=True)
class SolverResult:
    branch: Branch
    kraus: np.ndarray = field(repr=False)
    c_max: float
    residual: float


def _check_coeffs(coeffs: MachineCoeffs):
    if abs(coeffs.alpha) < COEFF_EPS or abs(coeffs.beta) < COEFF_EPS:
        raise DegenerateCoefficient("alpha and beta must both be nonzero")


def _solve_entries(coeffs: MachineCoeffs, branch: Branch):
    """Matrix entries and the ``delta`` ansatz functions for one branch.

    Write the operator as rows ``(x, y, z, w)`` and ``(x', y', z', w')`` and
    ``delta(θ, φ) = a(φ) sin θ/2 + b(φ) cos θ/2``.  Matching powers of
    ``sin θ/2`` and ``cos θ/2`` gives ``a = -(y/alpha) e^{iφ}``,
    ``b = z'/alpha``, ``y' = -(beta/alpha) y e^{i(φ+η)}`` and
    ``z' = (alpha/beta) z e^{i(φ-η)}``.  Entries must not depend on ``φ``:
    ``η = φ`` forces ``y = y' = 0``, ``η = -φ`` forces ``z = z' = 0``.
    The one remaining free entry is set to ``alpha``.
    """
    a_, b_ = coeffs.alpha, coeffs.beta
    r = b_ / a_
    if branch is Branch.ETA_EQ_PHI:
        zp = a_
        z = r * zp  # z' = (alpha/beta) z e^{i(φ-η)}, η = φ
        # x - w e^{2iφ} = z' and x' - w' e^{2iφ} = -(beta/alpha) z' e^{2iφ}
        x, w, xp, wp = zp, 0.0, 0.0, r * zp
        y = yp = 0.0

        def a_fn(phi):
            return np.zeros_like(phi, dtype=complex)

        def b_fn(phi):
            return np.full_like(phi, zp / a_, dtype=complex)
    else:
        y = a_
        yp = -r * y  # y' = -(beta/alpha) y e^{i(φ+η)}, η = -φ
        # x - w e^{2iφ} = -(beta/alpha) y and x' - w' e^{2iφ} = -y e^{2iφ}
        x, w, xp, wp = -r * y, 0.0, 0.0, y
        z = zp = 0.0

        def a_fn(phi):
            return -(y / a_) * np.exp(1j * np.asarray(phi))

        def b_fn(phi):
            return np.zeros_like(phi, dtype=complex)

    k = np.array([[x, y, z, w], [xp, yp, zp, wp]], dtype=complex)
    return k, a_fn, b_fn


def residual_grid(n_theta: int = 32, n_phi: int = 32):
    th = np.linspace(0.0, np.pi, n_theta)
    ph = 2 * np.pi * np.arange(n_phi) / n_phi
    return np.meshgrid(th, ph, indexing="ij")


def defining_residual(kraus, coeffs: MachineCoeffs, eta_fn, delta_fn,
                      n_theta: int = 32, n_phi: int = 32) -> float:
    """Max over an APPENDIX-angle grid of
    ``||K(psi ⊗ psi_perp) - delta (alpha psi + beta e^{iη} psi_perp)||``."""
    worst = 0.0
    for t, p in zip(*(g.ravel() for g in residual_grid(n_theta, n_phi))):
        psi, perp = qcore.bloch_pair(t, p, Convention.APPENDIX)
        lhs = kraus @ np.kron(psi.vec, perp.vec)
        rhs = delta_fn(t, p) * (coeffs.alpha * psi.vec
                                + coeffs.beta * np.exp(1j * eta_fn(p)) * perp.vec)
        worst = max(worst, float(np.linalg.norm(lhs - rhs)))
    return worst


def solve_kraus(coeffs: MachineCoeffs, branch) -> SolverResult:
    """Reconstruct a single Kraus operator realising the branch's ``η(φ)``.

    The operator is scaled by ``c_max``, the largest factor keeping
    ``K^† K <= I``.
    """
    branch = Branch(branch)
    _check_coeffs(coeffs)
    k, a_fn, b_fn = _solve_entries(coeffs, branch)
    lam = float(np.linalg.eigvalsh(k.conj().T @ k)[-1])
    c_max = 1.0 / np.sqrt(lam)
    kraus = c_max * k

    def delta(t, p):
        return c_max * (a_fn(p) * np.sin(t / 2) + b_fn(p) * np.cos(t / 2))

    res = defining_residual(kraus, coeffs, lambda p: branch.sign * p, delta)
    kraus.setflags(write=False)
    return SolverResult(branch, kraus, c_max, res)


def kraus_nullspace(coeffs: MachineCoeffs, branch, n_theta: int = 9, n_phi: int = 11):
    """Numerical route to the same operator, without the ansatz.

    Proportionality ``K v ∝ t`` is the linear condition ``<t_perp|K|v> = 0``
    on the eight entries of ``K``.  Stacking it over a state grid and taking
    the smallest right singular vector gives ``K`` up to scale.

    Returns ``(kraus, singular_values)``; a one-dimensional null space shows
    up as a single (near-)zero singular value.
    """
    branch = Branch(branch)
    rows = []
    # avoid the poles, where the constraint degenerates
    for t in np.linspace(0.1, np.pi - 0.1, n_theta):
        for p in 2 * np.pi * np.arange(n_phi) / n_phi:
            psi, perp = qcore.bloch_pair(t, p, Convention.APPENDIX)
            target = coeffs.alpha * psi.vec + coeffs.beta * np.exp(1j * branch.sign * p) * perp.vec
            t_perp = np.array([-np.conj(target[1]), np.conj(target[0])])
            rows.append(np.outer(t_perp.conj(), np.kron(psi.vec, perp.vec)).ravel())
    _, sv, vh = np.linalg.svd(np.array(rows))
    k = vh[-1].conj().reshape(2, 4)
    k = k / np.sqrt(np.linalg.eigvalsh(k.conj().T @ k)[-1])
    return fix_phase(k), sv


def fix_phase(k) -> np.ndarray:
    """Rotate by a global phase so the largest-modulus entry is real positive."""
    k = np.asarray(k, dtype=complex)
    flat = k.ravel()
    big = flat[np.argmax(np.abs(flat))]
    return k * (abs(big) / big)


def proportionality_variance(a, b, tol: float = 1e-12) -> float:
    """Variance of the entrywise ratio ``a/b`` over the support of ``b``.

    Both operators are first normalized to a real positive largest entry of
    unit modulus.  Returns ``inf`` if ``a`` is nonzero off the support of ``b``.
    """
    a = fix_phase(a)
    b = fix_phase(b)
    a = a / np.max(np.abs(a))
    b = b / np.max(np.abs(b))
    support = np.abs(b) > tol
    if np.any(np.abs(a[~support]) > tol):
        return float("inf")
    r = a[support] / b[support]
    return float(np.mean(np.abs(r - r.mean()) ** 2))


# -- non-orthogonal inputs -----------------------------------------------------

def nonorthogonal_residual(machine: PureMachine, psi: QubitState, phi: QubitState) -> float:
    """Deviation of the output's coefficient-moduli ratio from ``|alpha/beta|``.

    ``K(psi ⊗ phi)`` is expanded in the (oblique) basis ``{psi, phi}`` as
    ``c_psi psi + c_phi phi`` and ``| |c_psi/c_phi| - |alpha/beta| |`` is
    returned.  Zero for orthogonal pairs; ``inf`` when the output has no
    ``phi`` component at all.
    """
    if abs(machine.coeffs.beta) < COEFF_EPS:
        raise DegenerateCoefficient("beta = 0; target ratio undefined")
    basis = np.column_stack([psi.vec, phi.vec])
    if abs(np.linalg.det(basis)) <= 1e-10:
        raise DegenerateBasis("inputs are (nearly) parallel")
    raw = machine.kraus @ np.kron(psi.vec, phi.vec)
    if np.vdot(raw, raw).real <= 1e-20:
        raise ZeroVector("machine output vanishes for these inputs")
    c_psi, c_phi = np.linalg.solve(basis, raw)
    target = abs(machine.coeffs.alpha / machine.coeffs.beta)
    if c_phi == 0:
        return float("inf")
    return abs(abs(c_psi / c_phi) - target)


# -- clone, superpose, delete ----------------------------------------------------

@dataclass(frozen=True)
class CloneDeleteReport:
    n_copies: int
    overlap_decay: float
    mixed_output: np.ndarray = field(repr=False)
    target: QubitState
    fidelity: float


def overlap_decay(phi: QubitState, psi: QubitState, n_copies: int) -> float:
    """``|<phi|psi>|^N``, evaluated in log space."""
    ov = abs(qcore.inner_product(phi.vec, psi.vec))
    if ov == 0.0:
        return 0.0
    return float(np.exp(n_copies * np.log(ov)))


def clone_delete_demo(phi: QubitState, psi: QubitState, coeffs: MachineCoeffs,
                      n_copies: int, machine_overlap: float = 0.0) -> CloneDeleteReport:
    """Idealized clone -> superpose -> delete pipeline on the last qubit.

    The deleting machine leaves its own register in ``A_phi`` or ``A_psi``.
    With ``machine_overlap = <A_psi|A_phi> = 0`` (the default) the last qubit
    ends up in ``|alpha|^2 P_phi + |beta|^2 P_psi``.  A nonzero real overlap
    restores part of the coherence; the result is renormalized to unit trace.
    """
    if n_copies < 1:
        raise ValueError("n_copies must be >= 1")
    if not 0.0 <= machine_overlap <= 1.0:
        raise ValueError("machine_overlap must lie in [0, 1]")
    a, b = coeffs.alpha, coeffs.beta
    f, s = phi.vec, psi.vec
    rho = abs(a) ** 2 * qcore.projector(f) + abs(b) ** 2 * qcore.projector(s)
    if machine_overlap:
        cross = machine_overlap * a * np.conj(b) * np.outer(f, s.conj())
        rho = rho + cross + cross.conj().T
        rho = rho / np.trace(rho).real
    sup = a * f + b * s
    if np.linalg.norm(sup) <= 1e-10:
        raise DegenerateTarget("alpha phi + beta psi vanishes")
    target = QubitState.from_vector(qcore.normalize(sup))
    fid = qcore.fidelity_pure_mixed(rho, target.vec)
    return CloneDeleteReport(n_copies, overlap_decay(phi, psi, n_copies), rho, target, fid)


def state_with_overlap(overlap: float, relative_phase: float = 0.0) -> QubitState:
    """State whose overlap with ``|0>`` has modulus ``overlap``."""
    if not 0.0 <= overlap <= 1.0:
        raise ValueError("overlap must lie in [0, 1]")
    return QubitState(overlap, np.sqrt(1.0 - overlap**2) * np.exp(1j * relative_phase))


__all__ = [
    "AverageReport", "Branch", "CloneDeleteReport", "IntegrationSpec", "Method",
    "SolverResult", "average_general_orthogonal", "average_pure_machine",
    "clone_delete_demo", "defining_residual", "fix_phase", "kraus_nullspace",
    "nonorthogonal_residual", "overlap_decay", "proportionality_variance",
    "pure_closed_form_average", "solve_kraus", "sphere_nodes", "sphere_samples",
    "state_with_overlap",
]
