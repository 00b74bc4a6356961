"""Orbital reduced density matrices and von Neumann entropy of two-electron states.

Modes are 0-based here: mode 0 is orbital 1 spin up, mode 1 is orbital 1
spin down, and so on. For a kept set ``keep = (k_0 < k_1 < ...)`` the
reduced density matrix is indexed by the occupation bits
``n_{k_0} + 2 n_{k_1} + ...``. For the two modes of one spatial orbital this
gives the order (empty, up, down, doubly occupied).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .ci import CIVector, DeterminantSpace, modes

CLAMP = 1e-14
NEGATIVE_TOL = 1e-10
TRACE_TOL = 1e-8


class DensityMatrixError(ValueError):
    pass


@dataclass(frozen=True)
class OmegaMatrix:
    """Antisymmetric coefficients with |Phi> = sum_ab w_ab a+_a a+_b |vac>."""

    omega: np.ndarray

    @property
    def n_modes(self) -> int:
        return self.omega.shape[0]


@dataclass(frozen=True)
class ReducedDensityMatrix:
    matrix: np.ndarray
    label: str = ""
    modes: tuple[int, ...] = ()

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def diagonal(self) -> np.ndarray:
        return np.diag(self.matrix).copy()


def omega_from_ci(ci: CIVector, tol: float = 1e-10) -> OmegaMatrix:
    """Coefficient matrix of ``ci``; the amplitude of |pq> (p < q) is 2 w_pq."""
    if abs(ci.norm - 1.0) > tol:
        raise ValueError(f"CI vector is not normalized (norm={ci.norm:.15f})")
    n = ci.space.n_modes
    w = np.zeros((n, n))
    for c, det in zip(ci.amplitudes, ci.space.dets):
        p, q = modes(det)
        w[p, q] = 0.5 * c
        w[q, p] = -0.5 * c
    return OmegaMatrix(w)


def state_from_omega(om: OmegaMatrix, space: DeterminantSpace) -> np.ndarray:
    """Determinant amplitudes of sum_ab w_ab a+_a a+_b |vac>."""
    w = om.omega
    return np.array([w[p, q] - w[q, p] for p, q in (modes(d) for d in space.dets)])


def _reorder_sign(det: int, keep_mask: int) -> int:
    # sign of moving the kept creation operators in front of the discarded ones
    crossings = 0
    seen_discarded = 0
    for p in modes(det):
        if keep_mask >> p & 1:
            crossings += seen_discarded
        else:
            seen_discarded += 1
    return -1 if crossings % 2 else 1


def partial_trace_modes(ci: CIVector, keep: Iterable[int]) -> ReducedDensityMatrix:
    """Reduced density matrix of the modes in ``keep`` (0-based).

    The state is written as a matrix Psi[kept occupation, discarded
    occupation] after moving the kept operators to the front with their
    fermionic sign, and rho = Psi Psi^T.
    """
    keep = tuple(sorted(set(int(k) for k in keep)))
    n = ci.space.n_modes
    if not keep:
        raise ValueError("keep set is empty")
    if keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"keep modes {keep} out of range for {n} modes")
    keep_mask = sum(1 << k for k in keep)
    rest = [p for p in range(n) if not keep_mask >> p & 1]
    rows, cols, vals = [], [], []
    col_index: dict[int, int] = {}
    for c, det in zip(ci.amplitudes, ci.space.dets):
        if c == 0.0:
            continue
        k_idx = sum(1 << j for j, k in enumerate(keep) if det >> k & 1)
        d_key = sum(1 << j for j, p in enumerate(rest) if det >> p & 1)
        col = col_index.setdefault(d_key, len(col_index))
        rows.append(k_idx)
        cols.append(col)
        vals.append(_reorder_sign(det, keep_mask) * c)
    psi = np.zeros((1 << len(keep), max(len(col_index), 1)))
    np.add.at(psi, (rows, cols), vals)
    rho = psi @ psi.T
    label = f"modes {keep}"
    return ReducedDensityMatrix(rho, label, keep)


def reduced_density_spatial(ci: CIVector, orbital: int = 0) -> ReducedDensityMatrix:
    """4x4 density matrix of one spatial orbital, order (empty, up, down, double)."""
    rdm = partial_trace_modes(ci, (2 * orbital, 2 * orbital + 1))
    return ReducedDensityMatrix(rdm.matrix, f"spatial orbital {orbital + 1}", rdm.modes)


def reduced_density_spin_mode(ci: CIVector, mode: int = 0) -> ReducedDensityMatrix:
    """2x2 density matrix of a single spin-orbital mode, order (empty, occupied)."""
    rdm = partial_trace_modes(ci, (mode,))
    return ReducedDensityMatrix(rdm.matrix, f"mode {mode + 1}", rdm.modes)


def von_neumann_entropy(rho: ReducedDensityMatrix | np.ndarray) -> float:
    """-Tr(rho log2 rho) in bits."""
    mat = rho.matrix if isinstance(rho, ReducedDensityMatrix) else np.asarray(rho, dtype=float)
    tr = float(np.trace(mat))
    if abs(tr - 1.0) > TRACE_TOL:
        raise DensityMatrixError(f"density matrix trace is {tr:.12f}, expected 1")
    p = np.linalg.eigvalsh(0.5 * (mat + mat.conj().T))
    if p[0] < -NEGATIVE_TOL:
        raise DensityMatrixError(f"density matrix has negative eigenvalue {p[0]:.3e}")
    p = p[p > CLAMP]
    return float(max(0.0, -np.sum(p * np.log2(p))))


def binary_entropy(p: float) -> float:
    return von_neumann_entropy(np.diag([p, 1.0 - p]))


def shannon_bits(probs) -> float:
    """-sum p log2 p over the given weights, as they stand (no renormalization)."""
    p = np.asarray(probs, dtype=float)
    p = p[p > CLAMP]
    return float(max(0.0, -np.sum(p * np.log2(p))))


# Closed-form cross-checks. These use the orbital-1 formulas in terms of w
# (4x4 spatial) and in terms of CI amplitudes (2x2 spin mode).

def spatial_density_from_omega(om: OmegaMatrix) -> np.ndarray:
    """Diagonal (empty, up, down, double) of orbital 1 from the w matrix.

    Empty counts every up/down pair in the other orbitals, "up only" pairs
    mode 0 with a down mode elsewhere, "down only" pairs mode 1 with an up
    mode elsewhere.
    """
    w = om.omega
    m = om.n_modes // 2
    up_rest = [2 * i for i in range(1, m)]
    down_rest = [2 * i + 1 for i in range(1, m)]
    empty = 4 * sum(w[a, b] ** 2 for a in up_rest for b in down_rest)
    up_only = 4 * sum(w[0, b] ** 2 for b in down_rest)
    down_only = 4 * sum(w[1, a] ** 2 for a in up_rest)
    double = 4 * w[0, 1] ** 2
    return np.array([empty, up_only, down_only, double])


def spin_mode_density_formula(ci: CIVector) -> np.ndarray:
    """Diagonal (empty, occupied) of mode 0 from the reference, its single
    excitations and the paired double excitations only."""
    m = ci.space.n_orbitals
    c = ci.amplitude
    empty = sum(c((1, 2 * i)) ** 2 for i in range(1, m))            # 1up -> i up
    empty += sum(c((2 * i, 2 * i + 1)) ** 2 for i in range(1, m))   # pair -> orbital i
    occupied = c((0, 1)) ** 2
    occupied += sum(c((0, 2 * i + 1)) ** 2 for i in range(1, m))    # 1down -> i down
    return np.array([empty, occupied])


def outside_paired_pattern(ci: CIVector) -> float:
    """Weight of determinants the spin-mode formula ignores."""
    m = ci.space.n_orbitals
    covered = {(0, 1)}
    covered |= {(1, 2 * i) for i in range(1, m)}
    covered |= {(0, 2 * i + 1) for i in range(1, m)}
    covered |= {(2 * i, 2 * i + 1) for i in range(1, m)}
    w = 0.0
    for amp, det in zip(ci.amplitudes, ci.space.dets):
        if tuple(modes(det)) not in covered:
            w += amp**2
    return float(w)


@dataclass(frozen=True)
class EntanglementReport:
    s_spatial: float
    s_spin_mode: float
    s_spin_mode_formula: float
    formula_deviation: float
    ignored_weight: float


def entanglement_report(ci: CIVector, orbital: int = 0, mode: int = 0) -> EntanglementReport:
    s_sp = von_neumann_entropy(reduced_density_spatial(ci, orbital))
    s_mode = von_neumann_entropy(reduced_density_spin_mode(ci, mode))
    if mode == 0:
        s_formula = shannon_bits(spin_mode_density_formula(ci))
    else:
        s_formula = float("nan")
    return EntanglementReport(s_sp, s_mode, s_formula, abs(s_mode - s_formula),
                              outside_paired_pattern(ci))
