"""Two-level chiral qubit: physical parameters, dressed basis, operator algebra.

Everything lives in the two-dimensional low-energy chiral subspace of the
molecule.  In the frame rotating with the electric drive the Hamiltonian is

    H = (delta_so * C_z + d_eps * C_x) / 2,      delta_so = omega_so - drive,

which diagonalizes into the dressed basis (|up>, |down>) with splitting
omega_s = sqrt(delta_so**2 + d_eps**2).  The mixing coefficients

    delta_plus  = (omega_s + delta_so) / (2 omega_s)
    delta_minus = (omega_s - delta_so) / (2 omega_s)
    delta_0     = sqrt(delta_plus * delta_minus)

control how the dressed states couple to the environment and appear in every
decay rate downstream.

Conventions
-----------
* hbar = k_B = 1.  All frequencies, rates, temperatures and inverse times
  carry one common unit; the scenario layer fixes it to the bath linewidth.
* Dressed basis ordering is (up, down) with C_z = diag(+1, -1).
* Chirality operators use the Pauli normalization, C_x = C_plus + C_minus,
  so Bloch vectors of pure states have unit norm.
* The drive phase angle alpha is stored but fixed to zero; a nonzero value
  would only rotate the initial azimuth.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np


class DegenerateDressingError(ValueError):
    """Raised when omega_s = 0 and the dressed basis is undefined."""


class StateValidationError(ValueError):
    """Raised when a matrix fails the density-matrix checks."""


# Chirality operators in the dressed basis (up, down).
IDENTITY = np.eye(2, dtype=complex)
C_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
C_PLUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
C_MINUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
C_X = C_PLUS + C_MINUS
C_Y = -1j * (C_PLUS - C_MINUS)
for _op in (IDENTITY, C_Z, C_PLUS, C_MINUS, C_X, C_Y):
    _op.setflags(write=False)


@dataclass(frozen=True)
class SystemParams:
    """Physical inputs of the driven qubit.

    Attributes
    ----------
    omega_so : float
        Spin-orbit splitting of the chiral doublet (> 0).
    drive : float
        Angular frequency of the electric drive.
    d_eps : float
        Spin-electric coupling strength d.eps (>= 0), an angular frequency.
    alpha : float
        Field phase angle in radians; fixed to 0.
    """

    omega_so: float
    drive: float
    d_eps: float
    alpha: float = 0.0

    def __post_init__(self):
        if not self.omega_so > 0:
            raise ValueError(f"omega_so must be positive, got {self.omega_so}")
        if self.d_eps < 0:
            raise ValueError(f"d_eps must be non-negative, got {self.d_eps}")


@dataclass(frozen=True)
class DressedParams:
    """Derived dressed-basis quantities."""

    delta_so: float
    omega_s: float
    delta_plus: float
    delta_minus: float
    delta_0: float


def dressed_params(params: SystemParams) -> DressedParams:
    """Diagonalize the rotating-frame Hamiltonian.

    Returns the dressed splitting omega_s and the mixing coefficients
    delta_plus, delta_minus, delta_0.  Rejects the degenerate point
    omega_s = 0 (both detuning and coupling vanish), where the dressed
    basis is undefined.
    """
    delta_so = params.omega_so - params.drive
    omega_s = math.hypot(delta_so, params.d_eps)
    if omega_s == 0.0:
        raise DegenerateDressingError(
            "omega_s = 0: delta_so and d_eps both vanish, dressed basis undefined"
        )
    delta_plus = (omega_s + delta_so) / (2.0 * omega_s)
    delta_minus = (omega_s - delta_so) / (2.0 * omega_s)
    delta_0 = math.sqrt(delta_plus * delta_minus)
    return DressedParams(delta_so, omega_s, delta_plus, delta_minus, delta_0)


def system_from_dressed_ratio(
    omega_s: float, delta_ratio: float, drive: float
) -> SystemParams:
    """Build SystemParams from the dimensionless groups (omega_s, delta_so/omega_s).

    Figure-style parameterizations specify the dressed splitting and the
    mixing ratio instead of (omega_so, d_eps); this inverts them.
    """
    if not omega_s > 0:
        raise ValueError(f"omega_s must be positive, got {omega_s}")
    if not -1.0 <= delta_ratio <= 1.0:
        raise ValueError(f"delta_so/omega_s must lie in [-1, 1], got {delta_ratio}")
    delta_so = delta_ratio * omega_s
    d_eps = omega_s * math.sqrt(max(0.0, 1.0 - delta_ratio**2))
    return SystemParams(omega_so=drive + delta_so, drive=drive, d_eps=d_eps)


def hamiltonian_lab(params: SystemParams) -> np.ndarray:
    """Rotating-frame Hamiltonian in the chiral basis (|C=+1>, |C=-1>)."""
    delta_so = params.omega_so - params.drive
    return 0.5 * (delta_so * C_Z + params.d_eps * C_X)


def dressing_unitary(d: DressedParams) -> np.ndarray:
    """Unitary U whose columns are the dressed eigenvectors in the chiral basis.

    U maps dressed-basis coordinates to chiral-basis coordinates; density
    matrices transform as rho_dressed = U^dag rho_lab U.
    """
    a = math.sqrt(d.delta_plus)
    b = math.sqrt(d.delta_minus)
    return np.array([[a, -b], [b, a]], dtype=complex)


class QubitState:
    """A 2x2 reduced density matrix with a Bloch-vector view.

    The matrix is validated on construction: Hermitian to 1e-12, unit trace
    to 1e-12, eigenvalues >= -1e-9 (small transient negativity is tolerated
    because the perturbative master equation is not strictly CP).
    """

    __slots__ = ("matrix",)

    HERM_TOL = 1e-12
    TRACE_TOL = 1e-12
    EIG_TOL = 1e-9

    def __init__(self, matrix, *, check: bool = True):
        m = np.array(matrix, dtype=complex)
        if m.shape != (2, 2):
            raise StateValidationError(f"expected a 2x2 matrix, got shape {m.shape}")
        if check:
            herm = np.max(np.abs(m - m.conj().T))
            if herm > self.HERM_TOL:
                raise StateValidationError(f"matrix not Hermitian: deviation {herm:.3e}")
            tr = m[0, 0].real + m[1, 1].real
            if abs(tr - 1.0) > self.TRACE_TOL:
                raise StateValidationError(f"trace {tr!r} differs from 1")
            if min(np.linalg.eigvalsh(0.5 * (m + m.conj().T))) < -self.EIG_TOL:
                raise StateValidationError("matrix has a negative eigenvalue")
        m.setflags(write=False)
        self.matrix = m

    @classmethod
    def from_bloch(cls, r, *, check: bool = True) -> "QubitState":
        rx, ry, rz = (float(v) for v in r)
        m = 0.5 * (IDENTITY + rx * C_X + ry * C_Y + rz * C_Z)
        return cls(m, check=check)

    @classmethod
    def from_angles(cls, theta: float, phi: float = 0.0) -> "QubitState":
        st = math.sin(theta)
        return cls.from_bloch((st * math.cos(phi), st * math.sin(phi), math.cos(theta)))

    @classmethod
    def maximally_mixed(cls) -> "QubitState":
        return cls(0.5 * IDENTITY)

    @property
    def bloch(self) -> np.ndarray:
        m = self.matrix
        return np.array(
            [2.0 * m[0, 1].real, -2.0 * m[0, 1].imag, (m[0, 0] - m[1, 1]).real]
        )

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)

    def __repr__(self) -> str:
        rx, ry, rz = self.bloch
        return f"QubitState(bloch=({rx:.6g}, {ry:.6g}, {rz:.6g}))"


def transform_to_dressed(state: QubitState, d: DressedParams) -> QubitState:
    """Rotate a chiral-basis density matrix into the dressed basis."""
    u = dressing_unitary(d)
    return QubitState(u.conj().T @ state.matrix @ u)


def transform_from_dressed(state: QubitState, d: DressedParams) -> QubitState:
    """Inverse of :func:`transform_to_dressed`."""
    u = dressing_unitary(d)
    return QubitState(u @ state.matrix @ u.conj().T)
