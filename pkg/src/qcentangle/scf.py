"""Restricted and unrestricted Hartree-Fock for two-electron systems."""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass, field, replace

import numpy as np

from .integrals import IntegralSet

log = logging.getLogger(__name__)

LINDEP_CUTOFF = 1e-10


class SCFConvergenceError(RuntimeError):
    """SCF did not converge; ``result`` carries the last iterate."""

    def __init__(self, message, result):
        super().__init__(message)
        self.result = result


class LinearDependenceError(ValueError):
    pass


@dataclass
class ScfResult:
    energy: float
    mo_coeff: np.ndarray | tuple[np.ndarray, np.ndarray]
    mo_energy: np.ndarray | tuple[np.ndarray, np.ndarray]
    converged: bool
    n_iter: int
    density_change: float
    commutator_norm: float = float("nan")
    history: list[float] = field(default_factory=list, repr=False)

    @property
    def restricted(self) -> bool:
        return not isinstance(self.mo_coeff, tuple)

    @property
    def spin_orbitals(self) -> tuple[np.ndarray, np.ndarray]:
        """(alpha, beta) coefficient matrices; identical for RHF."""
        if self.restricted:
            return self.mo_coeff, self.mo_coeff
        return self.mo_coeff


def orthogonalizer(S: np.ndarray) -> np.ndarray:
    """Symmetric S^(-1/2); raises if S is numerically singular."""
    w, U = np.linalg.eigh(S)
    if w[0] < LINDEP_CUTOFF:
        raise LinearDependenceError(
            f"overlap matrix is singular to tolerance: smallest eigenvalue {w[0]:.3e} "
            f"< {LINDEP_CUTOFF:g}"
        )
    return (U / np.sqrt(w)) @ U.T


def _coulomb_exchange(eri, D):
    J = np.einsum("pqrs,rs->pq", eri, D)
    K = np.einsum("prqs,rs->pq", eri, D)
    return J, K


def _diagonalize(F, X):
    e, Cp = np.linalg.eigh(X.T @ F @ X)
    return e, X @ Cp


class DIIS:
    """Pulay extrapolation of Fock matrices.

    Error vectors are FDS - SDF. Returns ``None`` when the extrapolation
    matrix is ill-conditioned so the caller can fall back to damping.
    """

    def __init__(self, size=6, max_cond=1e14):
        self.size = size
        self.max_cond = max_cond
        self.focks = deque(maxlen=size)
        self.errors = deque(maxlen=size)

    def push(self, fock, error):
        self.focks.append(fock)
        self.errors.append(np.ravel(error))

    def extrapolate(self):
        n = len(self.focks)
        if n < 2:
            return self.focks[-1]
        B = -np.ones((n + 1, n + 1))
        B[n, n] = 0.0
        for i in range(n):
            for j in range(i + 1):
                B[i, j] = B[j, i] = self.errors[i] @ self.errors[j]
        rhs = np.zeros(n + 1)
        rhs[n] = -1.0
        scale = np.max(np.diag(B)[:n])
        if not scale > 0:
            return self.focks[-1]
        B[:n, :n] /= scale
        if not np.all(np.isfinite(B)) or np.linalg.cond(B) > self.max_cond:
            return None
        try:
            coef = np.linalg.solve(B, rhs)[:n]
        except np.linalg.LinAlgError:
            return None
        return sum(c * f for c, f in zip(coef, self.focks))

    def reset(self):
        self.focks.clear()
        self.errors.clear()


def _check_nelec(nelec):
    if nelec != 2:
        raise ValueError(f"only two-electron systems are supported (nelec={nelec})")


def run_rhf(ints: IntegralSet, nelec: int = 2, *, max_iter: int = 200,
            e_tol: float = 1e-12, grad_tol: float = 1e-9, d_tol: float = 1e-10,
            diis_size: int = 6, damping: float = 0.5, guess: np.ndarray | None = None) -> ScfResult:
    """Closed-shell Hartree-Fock.

    Converged when the orbital gradient ||FDS - SDF||_F, the energy change and
    the density change all fall below their tolerances. ``guess`` is an
    optional starting coefficient matrix; the default is the core guess.
    """
    _check_nelec(nelec)
    nocc = nelec // 2
    S, h, eri = ints.overlap, ints.hcore, ints.eri
    X = orthogonalizer(S)
    if guess is None:
        _, C = _diagonalize(h, X)
    else:
        C = guess
    D = C[:, :nocc] @ C[:, :nocc].T  # D = P / 2
    diis = DIIS(diis_size)
    energy = 0.0
    history = []
    F_prev = None
    for it in range(1, max_iter + 1):
        J, K = _coulomb_exchange(eri, D)
        F = h + 2.0 * J - K
        e_new = float(np.sum(D * (h + F))) + ints.nuclear_repulsion
        err = F @ D @ S - S @ D @ F
        gnorm = float(np.linalg.norm(err))
        dE = abs(e_new - energy)
        energy = e_new
        history.append(energy)

        diis.push(F, X.T @ err @ X)
        F_ext = diis.extrapolate()
        if F_ext is None:
            diis.reset()
            F_ext = F if F_prev is None else (1 - damping) * F + damping * F_prev
        F_prev = F
        eps, C = _diagonalize(F_ext, X)
        D_new = C[:, :nocc] @ C[:, :nocc].T
        dD = float(np.linalg.norm(D_new - D))
        log.info("rhf iter=%d energy=%.14f grad=%.3e dD=%.3e", it, energy, gnorm, dD)
        D = D_new
        if gnorm < grad_tol and dE < e_tol and dD < d_tol:
            break
    converged = gnorm < grad_tol and dE < e_tol and dD < d_tol
    # report the energy and orbitals of the final density
    J, K = _coulomb_exchange(eri, D)
    F = h + 2.0 * J - K
    energy = float(np.sum(D * (h + F))) + ints.nuclear_repulsion
    eps, C = _diagonalize(F, X)
    result = ScfResult(energy, C, eps, converged, it, dD, gnorm, history)
    if not converged:
        raise SCFConvergenceError(
            f"RHF not converged after {it} iterations (grad={gnorm:.2e}, dE={dE:.2e}, dD={dD:.2e})",
            result,
        )
    return result


def mix_homo_lumo(C: np.ndarray, nocc: int, angle: float) -> np.ndarray:
    """Rotate HOMO and LUMO columns of ``C`` by ``angle`` radians."""
    C = C.copy()
    if C.shape[1] <= nocc or angle == 0.0:
        return C
    h, l = C[:, nocc - 1].copy(), C[:, nocc].copy()
    c, s = math.cos(angle), math.sin(angle)
    C[:, nocc - 1] = c * h + s * l
    C[:, nocc] = -s * h + c * l
    return C


def run_uhf(ints: IntegralSet, nelec: int = 2, guess_mix: float = math.pi / 8, *,
            max_iter: int = 200, e_tol: float = 1e-12, grad_tol: float = 1e-9,
            d_tol: float = 1e-10, diis_size: int = 6, damping: float = 0.5,
            rhf: ScfResult | None = None) -> ScfResult:
    """Unrestricted Hartree-Fock started from a spin-broken RHF guess.

    The RHF HOMO and LUMO are mixed by ``+guess_mix`` for alpha and
    ``-guess_mix`` for beta. With ``guess_mix = 0`` the alpha and beta
    densities stay equal and the RHF solution is returned unchanged.
    """
    _check_nelec(nelec)
    na = nb = nelec // 2
    S, h, eri = ints.overlap, ints.hcore, ints.eri
    X = orthogonalizer(S)
    if rhf is None:
        rhf = run_rhf(ints, nelec, max_iter=max_iter, e_tol=e_tol, grad_tol=grad_tol,
                      d_tol=d_tol, diis_size=diis_size, damping=damping)
    Ca = mix_homo_lumo(rhf.mo_coeff, na, guess_mix)
    Cb = mix_homo_lumo(rhf.mo_coeff, nb, -guess_mix)
    Da = Ca[:, :na] @ Ca[:, :na].T
    Db = Cb[:, :nb] @ Cb[:, :nb].T
    diis = DIIS(diis_size)
    energy = 0.0
    history = []
    prev = None
    for it in range(1, max_iter + 1):
        Ja, Ka = _coulomb_exchange(eri, Da)
        Jb, Kb = _coulomb_exchange(eri, Db)
        Fa = h + Ja + Jb - Ka
        Fb = h + Ja + Jb - Kb
        e_new = 0.5 * float(np.sum(Da * (h + Fa)) + np.sum(Db * (h + Fb))) + ints.nuclear_repulsion
        err_a = Fa @ Da @ S - S @ Da @ Fa
        err_b = Fb @ Db @ S - S @ Db @ Fb
        gnorm = float(math.hypot(np.linalg.norm(err_a), np.linalg.norm(err_b)))
        dE = abs(e_new - energy)
        energy = e_new
        history.append(energy)

        diis.push(np.stack([Fa, Fb]), np.concatenate([np.ravel(X.T @ err_a @ X),
                                                      np.ravel(X.T @ err_b @ X)]))
        F_ext = diis.extrapolate()
        if F_ext is None:
            diis.reset()
            cur = np.stack([Fa, Fb])
            F_ext = cur if prev is None else (1 - damping) * cur + damping * prev
        prev = np.stack([Fa, Fb])
        ea, Ca = _diagonalize(F_ext[0], X)
        eb, Cb = _diagonalize(F_ext[1], X)
        Da_new = Ca[:, :na] @ Ca[:, :na].T
        Db_new = Cb[:, :nb] @ Cb[:, :nb].T
        dD = float(math.hypot(np.linalg.norm(Da_new - Da), np.linalg.norm(Db_new - Db)))
        log.info("uhf iter=%d energy=%.14f grad=%.3e dD=%.3e", it, energy, gnorm, dD)
        Da, Db = Da_new, Db_new
        if gnorm < grad_tol and dE < e_tol and dD < d_tol:
            break
    converged = gnorm < grad_tol and dE < e_tol and dD < d_tol
    Ja, Ka = _coulomb_exchange(eri, Da)
    Jb, Kb = _coulomb_exchange(eri, Db)
    Fa = h + Ja + Jb - Ka
    Fb = h + Ja + Jb - Kb
    energy = 0.5 * float(np.sum(Da * (h + Fa)) + np.sum(Db * (h + Fb))) + ints.nuclear_repulsion
    ea, Ca = _diagonalize(Fa, X)
    eb, Cb = _diagonalize(Fb, X)
    result = ScfResult(energy, (Ca, Cb), (ea, eb), converged, it, dD, gnorm, history)
    if not converged:
        raise SCFConvergenceError(
            f"UHF not converged after {it} iterations (grad={gnorm:.2e}, dE={dE:.2e}, dD={dD:.2e})",
            result,
        )
    return result


def _check_orthonormal(S, C, tol):
    dev = float(np.linalg.norm(C.T @ S @ C - np.eye(C.shape[1])))
    if dev > tol:
        raise ValueError(f"orbitals are not S-orthonormal: ||C^T S C - 1||_F = {dev:.3e}")


def transform_to_mo(ints: IntegralSet, C: np.ndarray, tol: float = 1e-8) -> IntegralSet:
    """Integrals in the orbital basis given by the columns of ``C``."""
    _check_orthonormal(ints.overlap, C, tol)
    S = C.T @ ints.overlap @ C
    h = C.T @ ints.hcore @ C
    eri = np.einsum("pqrs,pi,qj,rk,sl->ijkl", ints.eri, C, C, C, C, optimize=True)
    return IntegralSet(S, 0.5 * (h + h.T), eri, ints.nuclear_repulsion)


@dataclass(frozen=True)
class SpinOrbitalIntegrals:
    """Integrals over 2m spin orbitals in interleaved order (1a, 1b, 2a, 2b, ...).

    ``eri[p, q, r, s]`` is (pq|rs) including the spin integration, so any
    entry pairing different spins within a charge distribution is zero.
    """

    hcore: np.ndarray
    eri: np.ndarray
    nuclear_repulsion: float = 0.0

    @property
    def n_modes(self) -> int:
        return self.hcore.shape[0]


def spin_orbital_integrals(ints: IntegralSet,
                           C: np.ndarray | tuple[np.ndarray, np.ndarray] | None = None,
                           tol: float = 1e-8) -> SpinOrbitalIntegrals:
    """Expand spatial integrals to spin orbitals.

    ``C`` may be ``None`` (``ints`` is already in an orthonormal MO basis),
    one coefficient matrix, or an (alpha, beta) pair as produced by UHF.
    """
    if C is None:
        Ca = Cb = np.eye(ints.m)
    elif isinstance(C, tuple):
        Ca, Cb = C
    else:
        Ca = Cb = C
    _check_orthonormal(ints.overlap, Ca, tol)
    _check_orthonormal(ints.overlap, Cb, tol)
    m = Ca.shape[1]
    n = 2 * m
    spins = (Ca, Cb)
    h = np.zeros((n, n))
    eri = np.zeros((n, n, n, n))
    for s, Cs in enumerate(spins):
        hs = Cs.T @ ints.hcore @ Cs
        h[s::2, s::2] = 0.5 * (hs + hs.T)
    for s1, C1 in enumerate(spins):
        for s2, C2 in enumerate(spins):
            g = np.einsum("pqrs,pi,qj,rk,sl->ijkl", ints.eri, C1, C1, C2, C2, optimize=True)
            eri[s1::2, s1::2, s2::2, s2::2] = g
    return SpinOrbitalIntegrals(h, eri, ints.nuclear_repulsion)


def rotate_occupied(result: ScfResult, U: np.ndarray, nocc: int) -> ScfResult:
    """Apply an orthogonal rotation ``U`` among the occupied orbitals."""
    C = result.mo_coeff.copy()
    C[:, :nocc] = C[:, :nocc] @ U
    return replace(result, mo_coeff=C)


def rhf_energy(ints: IntegralSet, C: np.ndarray, nocc: int = 1) -> float:
    D = C[:, :nocc] @ C[:, :nocc].T
    J, K = _coulomb_exchange(ints.eri, D)
    return float(np.sum(D * (2 * ints.hcore + 2 * J - K))) + ints.nuclear_repulsion
