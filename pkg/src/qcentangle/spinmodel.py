"""Two spin-1/2 particles with anisotropic XY coupling in a transverse field.

Basis order is (up-up, up-down, down-up, down-down).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .entanglement import von_neumann_entropy

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Y = np.array([[0.0, -1j], [1j, 0.0]])
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]])
I2 = np.eye(2)

HERRING_FLICKER_PREFACTOR = 0.821
VALID_R_MIN = 1.0


class AsymptoticRangeWarning(UserWarning):
    """Exchange coupling requested where the large-R expansion is not valid."""


@dataclass(frozen=True)
class SpinPairParams:
    J: float
    B: float
    gamma: float = 1.0

    @property
    def lam(self) -> float:
        if self.B == 0:
            raise ZeroDivisionError("lambda = J/B is undefined for B = 0")
        return self.J / self.B

    @property
    def alpha(self) -> float:
        return math.sqrt(4 * self.B**2 + self.J**2 * self.gamma**2)


@dataclass(frozen=True)
class SpinPairSpectrum:
    eigenvalues: np.ndarray   # (-J, J, -alpha, alpha)
    eigenvectors: np.ndarray  # columns

    @property
    def ground_index(self) -> int:
        return int(np.argmin(self.eigenvalues))

    @property
    def ground_state(self) -> np.ndarray:
        return self.eigenvectors[:, self.ground_index]


def spin_hamiltonian(p: SpinPairParams) -> np.ndarray:
    J, B, g = p.J, p.B, p.gamma
    H = (-0.5 * J * (1 + g) * np.kron(SIGMA_X, SIGMA_X)
         - 0.5 * J * (1 - g) * np.kron(SIGMA_Y, SIGMA_Y)
         - B * np.kron(SIGMA_Z, I2) - B * np.kron(I2, SIGMA_Z))
    return H.real.copy()


def analytic_spectrum(p: SpinPairParams) -> SpinPairSpectrum:
    """Closed-form eigenpairs.

    The up-up/down-down block couples through -J*gamma, so the relative sign
    of the two components of the -alpha and +alpha states follows
    sign(J*gamma).
    """
    J, B, g = p.J, p.B, p.gamma
    alpha = p.alpha
    s2 = 1.0 / math.sqrt(2.0)
    v1 = np.array([0.0, s2, s2, 0.0])
    v2 = np.array([0.0, -s2, s2, 0.0])
    if alpha == 0.0:
        v3 = np.array([1.0, 0.0, 0.0, 0.0])
        v4 = np.array([0.0, 0.0, 0.0, 1.0])
    else:
        plus = math.sqrt(max(0.0, (alpha + 2 * B) / (2 * alpha)))
        minus = math.sqrt(max(0.0, (alpha - 2 * B) / (2 * alpha)))
        sign = -1.0 if J * g < 0 else 1.0
        v3 = np.array([plus, 0.0, 0.0, sign * minus])
        v4 = np.array([-sign * minus, 0.0, 0.0, plus])
    vals = np.array([-J, J, -alpha, alpha])
    return SpinPairSpectrum(vals, np.column_stack([v1, v2, v3, v4]))


def reduced_density_first_spin(state: np.ndarray) -> np.ndarray:
    psi = np.asarray(state).reshape(2, 2)
    return psi @ psi.conj().T


def ground_state_entropy(p: SpinPairParams) -> float:
    """Entropy of one spin in the numerically diagonalized ground state."""
    w, V = np.linalg.eigh(spin_hamiltonian(p))
    return von_neumann_entropy(reduced_density_first_spin(V[:, 0]))


def entropy_closed_form(lam):
    """Ground-state entropy of the Ising pair as a function of lambda = J/B.

    Binary entropy of p = 1/2 +- 1/sqrt(4 + lambda^2); even in lambda and 0
    at lambda = 0.
    """
    lam = np.asarray(lam, dtype=float)
    r = np.sqrt(4.0 + lam**2)
    p_hi = 0.5 + 1.0 / r
    p_lo = lam**2 / (2.0 * r * (r + 2.0))  # 1/2 - 1/r without cancellation
    with np.errstate(divide="ignore", invalid="ignore"):
        term_lo = np.where(p_lo > 0, -p_lo * np.log2(np.where(p_lo > 0, p_lo, 1.0)), 0.0)
    s = -p_hi * np.log2(p_hi) + term_lo
    s = np.maximum(s, 0.0)
    return float(s) if s.ndim == 0 else s


def entropy_printed_form(lam):
    """The same entropy in its log-ratio form; undefined at lambda = 0."""
    lam = np.asarray(lam, dtype=float)
    r = np.sqrt(4.0 + lam**2)
    # 1/4 - 1/(4 + l^2) and r - 2 rewritten to avoid cancellation at small l
    quarter_gap = lam**2 / (4.0 * (4.0 + lam**2))
    s = -0.5 * np.log2(quarter_gap) + np.log2(lam**2 / (r + 2.0) ** 2) / r
    return float(s) if s.ndim == 0 else s


def ground_state_entropy_closed_form(lam: float) -> float:
    return entropy_closed_form(lam)


def exchange_coupling(R):
    """Asymptotic H2 singlet-triplet exchange, J(R) = -0.821 R^(5/2) exp(-2R).

    ``R`` in bohr, result in hartree. Values below 1 bohr are returned but
    warned about, since the expansion only holds for large R.
    """
    R = np.asarray(R, dtype=float)
    if np.any(R <= 0):
        raise ValueError("exchange coupling needs R > 0")
    if np.any(R < VALID_R_MIN):
        warnings.warn(
            f"R < {VALID_R_MIN} bohr is outside the validity range of the large-R expansion",
            AsymptoticRangeWarning, stacklevel=2,
        )
    J = -HERRING_FLICKER_PREFACTOR * R**2.5 * np.exp(-2.0 * R)
    return float(J) if J.ndim == 0 else J


def sweep_entanglement(R_grid, B_list, gamma: float = 1.0) -> list[tuple[float, float, float]]:
    """Rows of (R, B, S) with S evaluated from J(R)/B.

    gamma = 1 uses the closed form; other anisotropies diagonalize the 4x4
    Hamiltonian.
    """
    R_grid = [float(r) for r in R_grid]
    B_list = [float(b) for b in B_list]
    if not R_grid or not B_list:
        raise ValueError("R grid and B list must be nonempty")
    if any(b == 0 for b in B_list):
        raise ValueError("field strength B must be nonzero")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AsymptoticRangeWarning)
        J = exchange_coupling(np.array(R_grid))
    rows = []
    for B in B_list:
        for R, j in zip(R_grid, np.atleast_1d(J)):
            if gamma == 1.0:
                S = entropy_closed_form(j / B)
            else:
                S = ground_state_entropy(SpinPairParams(float(j), B, gamma))
            rows.append((R, B, float(S)))
    return rows
