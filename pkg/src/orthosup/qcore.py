"""Small dense complex linear algebra and single-qubit state utilities.

Every state and operator here is a plain numpy array (``complex128``),
except :class:`QubitState`, which pins the normalization invariant for
single-qubit inputs.  All functions are pure.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotNormalized, ZeroVector

DEFAULT_TOL = 1e-12
# inputs within this distance of unit norm are silently renormalized
RENORM_TOL = 1e-9


class Convention(enum.Enum):
    """Bloch-angle conventions.

    ``MAIN``: ``(cos θ/2, sin θ/2 e^{iφ})``.
    ``APPENDIX``: ``(sin θ/2, cos θ/2 e^{iφ})``.
    """

    MAIN = "main"
    APPENDIX = "appendix"


@dataclass(frozen=True)
class QubitState:
    """Normalized qubit state ``a0|0> + a1|1>``."""

    a0: complex
    a1: complex

    def __post_init__(self):
        a0, a1 = complex(self.a0), complex(self.a1)
        if not (np.isfinite(a0) and np.isfinite(a1)):
            raise NotNormalized("amplitudes must be finite")
        nrm = np.sqrt(abs(a0) ** 2 + abs(a1) ** 2)
        if abs(nrm - 1.0) > RENORM_TOL:
            raise NotNormalized(f"state norm {nrm!r} is not 1")
        if abs(nrm - 1.0) > 1e-15:
            a0, a1 = a0 / nrm, a1 / nrm
        object.__setattr__(self, "a0", a0)
        object.__setattr__(self, "a1", a1)

    @classmethod
    def from_vector(cls, v) -> "QubitState":
        v = np.asarray(v, dtype=complex).ravel()
        if v.shape != (2,):
            raise DimensionMismatch(f"expected 2 amplitudes, got {v.shape}")
        return cls(v[0], v[1])

    @property
    def vec(self) -> np.ndarray:
        return np.array([self.a0, self.a1], dtype=complex)

    def bloch(self) -> "BlochVector":
        c = np.conj(self.a0) * self.a1
        return BlochVector(
            2 * c.real, 2 * c.imag, abs(self.a0) ** 2 - abs(self.a1) ** 2
        )

    def __array__(self, dtype=None, copy=None):
        return self.vec if dtype is None else self.vec.astype(dtype)


@dataclass(frozen=True)
class BlochAngles:
    theta: float
    phi: float

    def __post_init__(self):
        if not (0.0 <= self.theta <= np.pi):
            raise ValueError(f"theta={self.theta} outside [0, pi]")
        if not (0.0 <= self.phi < 2 * np.pi):
            raise ValueError(f"phi={self.phi} outside [0, 2pi)")


@dataclass(frozen=True)
class BlochVector:
    nx: float
    ny: float
    nz: float

    def __post_init__(self):
        r2 = self.nx**2 + self.ny**2 + self.nz**2
        if abs(r2 - 1.0) > DEFAULT_TOL * 10:
            raise ValueError(f"Bloch vector is not unit length (|n|^2={r2!r})")

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> "BlochVector":
        st = np.sin(theta)
        return cls(st * np.cos(phi), st * np.sin(phi), np.cos(theta))

    def as_array(self) -> np.ndarray:
        return np.array([self.nx, self.ny, self.nz])

    def dot(self, other: "BlochVector") -> float:
        return float(self.as_array() @ other.as_array())


PLUS = QubitState(2**-0.5, 2**-0.5)
MINUS = QubitState(2**-0.5, -(2**-0.5))
KET0 = QubitState(1, 0)
KET1 = QubitState(0, 1)

NAMED_STATES = {
    "ket0": KET0,
    "ket1": KET1,
    "plus": PLUS,
    "minus": MINUS,
    "plus_i": QubitState(2**-0.5, 1j * 2**-0.5),
    "minus_i": QubitState(2**-0.5, -1j * 2**-0.5),
}


def _coerce_convention(convention) -> Convention:
    return convention if isinstance(convention, Convention) else Convention(convention)


def bloch_to_state(angles: BlochAngles, convention=Convention.MAIN) -> QubitState:
    """Map Bloch angles to a qubit state under the chosen convention."""
    convention = _coerce_convention(convention)
    c, s = np.cos(angles.theta / 2), np.sin(angles.theta / 2)
    phase = np.exp(1j * angles.phi)
    if convention is Convention.MAIN:
        return QubitState(c, s * phase)
    return QubitState(s, c * phase)


def orthogonal_complement(psi: QubitState) -> QubitState:
    """Return ``(conj(a1), -conj(a0))``, orthogonal to ``psi``."""
    return QubitState(np.conj(psi.a1), -np.conj(psi.a0))


def bloch_pair(theta: float, phi: float, convention=Convention.MAIN):
    """State and orthogonal partner with the partner's phase fixed per convention.

    MAIN uses :func:`orthogonal_complement`.  APPENDIX uses
    ``(cos θ/2, -sin θ/2 e^{iφ})``, which is ``e^{iφ}`` times the complement;
    phases such as the circuit's ``η`` are quoted against this partner.
    """
    convention = _coerce_convention(convention)
    psi = bloch_to_state(BlochAngles(theta, phi % (2 * np.pi)), convention)
    if convention is Convention.MAIN:
        return psi, orthogonal_complement(psi)
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return psi, QubitState(c, -s * np.exp(1j * phi))


def as_vector(v) -> np.ndarray:
    arr = np.asarray(v, dtype=complex)
    if arr.ndim != 1:
        raise DimensionMismatch(f"expected a 1-d state vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("state vector has non-finite entries")
    return arr


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product; ``out[i*len(b) + j] = a[i] * b[j]``."""
    return np.kron(as_vector(a), as_vector(b))


def apply_operator(op, v) -> np.ndarray:
    op = np.asarray(op, dtype=complex)
    v = as_vector(v)
    if op.ndim != 2 or op.shape[1] != v.shape[0]:
        raise DimensionMismatch(f"operator {op.shape} cannot act on vector of length {v.shape[0]}")
    return op @ v


def inner_product(a, b) -> complex:
    """``<a|b>``, conjugate-linear in ``a``."""
    a, b = as_vector(a), as_vector(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"length {a.shape[0]} vs {b.shape[0]}")
    return complex(np.vdot(a, b))


def norm(v) -> float:
    return float(np.linalg.norm(as_vector(v)))


def normalize(v, eps: float = 1e-14) -> np.ndarray:
    v = as_vector(v)
    n = np.linalg.norm(v)
    if n <= eps:
        raise ZeroVector(f"cannot normalize vector of norm {n!r}")
    return v / n


def projector(v) -> np.ndarray:
    v = as_vector(v)
    return np.outer(v, v.conj())


def check_density_matrix(rho, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Validate and return ``rho`` as a complex square array."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionMismatch(f"density matrix must be square, got {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise ValueError(f"density matrix trace {np.trace(rho).real!r} != 1")
    if np.min(np.linalg.eigvalsh(rho)) < -1e-10:
        raise ValueError("density matrix has a negative eigenvalue")
    return rho


def fidelity_pure_mixed(rho, psi) -> float:
    """``<psi|rho|psi>`` for a density matrix and a normalized pure state."""
    rho = np.asarray(rho, dtype=complex)
    psi = as_vector(psi)
    if rho.shape != (psi.shape[0], psi.shape[0]):
        raise DimensionMismatch(f"rho {rho.shape} vs state of length {psi.shape[0]}")
    return float(np.real(np.vdot(psi, rho @ psi)))


def random_state(rng: np.random.Generator) -> QubitState:
    """Haar-random qubit state."""
    z = rng.normal(size=2) + 1j * rng.normal(size=2)
    return QubitState.from_vector(z / np.linalg.norm(z))


def random_unitary(rng: np.random.Generator, dim: int = 2) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
