"""Full configuration interaction for two electrons.

Determinants are bitmasks over 2m spin-orbital modes in interleaved order,
mode 2k is spatial orbital k with spin up and mode 2k+1 the same orbital
with spin down. Bit ``p`` set means mode ``p`` is occupied, and a
determinant with modes p < q is the ordered product a+_p a+_q |vac>.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .integrals import IntegralSet
from .scf import SpinOrbitalIntegrals, spin_orbital_integrals


@dataclass(frozen=True)
class DeterminantSpace:
    n_orbitals: int
    dets: tuple[int, ...]

    def __len__(self):
        return len(self.dets)

    @property
    def n_modes(self) -> int:
        return 2 * self.n_orbitals

    @property
    def reference(self) -> int:
        """Index of the aufbau determinant |1100...>."""
        return self.index(0b11)

    def index(self, det: int) -> int:
        return self.dets.index(det)

    def occupied(self, i: int) -> tuple[int, int]:
        return tuple(modes(self.dets[i]))

    def occupation_string(self, i: int) -> str:
        det = self.dets[i]
        return "".join("1" if det >> p & 1 else "0" for p in range(self.n_modes))

    def sz(self) -> np.ndarray:
        """Twice the S_z quantum number of each determinant."""
        out = []
        for det in self.dets:
            out.append(sum(1 if p % 2 == 0 else -1 for p in modes(det)))
        return np.array(out)


def modes(det: int) -> list[int]:
    out = []
    p = 0
    while det:
        if det & 1:
            out.append(p)
        det >>= 1
        p += 1
    return out


def enumerate_determinants(m: int) -> DeterminantSpace:
    if m < 1:
        raise ValueError(f"need at least one spatial orbital, got m={m}")
    dets = tuple((1 << p) | (1 << q) for p, q in combinations(range(2 * m), 2))
    return DeterminantSpace(m, dets)


def _between(det: int, lo: int, hi: int) -> int:
    """Number of occupied modes strictly between ``lo`` and ``hi``."""
    if lo > hi:
        lo, hi = hi, lo
    mask = ((1 << hi) - 1) & ~((1 << (lo + 1)) - 1)
    return bin(det & mask).count("1")


def excitation_sign(det: int, hole: int, particle: int) -> int:
    """Sign of a+_particle a_hole acting on ``det``."""
    return -1 if _between(det, hole, particle) % 2 else 1


def _antisym(g, p, q, r, s):
    # <pq||rs> = (pr|qs) - (ps|qr)
    return g[p, r, q, s] - g[p, s, q, r]


def build_hamiltonian(mo_ints: IntegralSet | SpinOrbitalIntegrals, space: DeterminantSpace,
                      include_nuclear: bool = True) -> np.ndarray:
    """CI Hamiltonian over ``space`` by the Slater-Condon rules.

    ``mo_ints`` is either a spatial integral set in an orthonormal MO basis
    or spin-orbital integrals (e.g. from UHF orbitals).
    """
    if isinstance(mo_ints, IntegralSet):
        so = spin_orbital_integrals(mo_ints)
    else:
        so = mo_ints
    if so.n_modes != space.n_modes:
        raise ValueError(
            f"integrals cover {so.n_modes} spin orbitals but the determinant space has {space.n_modes}"
        )
    h, g = so.hcore, so.eri
    n = len(space)
    H = np.zeros((n, n))
    for i, di in enumerate(space.dets):
        occ_i = modes(di)
        for j in range(i + 1):
            dj = space.dets[j]
            diff = di ^ dj
            ndiff = bin(diff).count("1") // 2
            if ndiff == 0:
                val = sum(h[p, p] for p in occ_i)
                val += sum(_antisym(g, p, q, p, q) for p, q in combinations(occ_i, 2))
            elif ndiff == 1:
                hole = (dj & diff).bit_length() - 1  # in j, not in i
                part = (di & diff).bit_length() - 1  # in i, not in j
                sign = excitation_sign(dj, hole, part)
                common = [k for k in occ_i if k != part]
                val = h[part, hole] + sum(_antisym(g, part, k, hole, k) for k in common)
                val *= sign
            elif ndiff == 2:
                p, q = modes(di & diff)
                r, s = modes(dj & diff)
                sign = excitation_sign(dj, r, p)
                sign *= excitation_sign(dj ^ (1 << r) ^ (1 << p), s, q)
                val = sign * _antisym(g, p, q, r, s)
            else:
                val = 0.0
            H[i, j] = H[j, i] = val
    if include_nuclear:
        H[np.diag_indices(n)] += so.nuclear_repulsion
    return H


@dataclass(frozen=True)
class CIVector:
    amplitudes: np.ndarray
    space: DeterminantSpace
    energy: float = float("nan")
    reference: int = 0

    def __post_init__(self):
        if self.amplitudes.shape != (len(self.space),):
            raise ValueError("amplitude vector does not match the determinant space")

    def amplitude(self, occupied_modes) -> float:
        det = 0
        for p in occupied_modes:
            det |= 1 << p
        try:
            return float(self.amplitudes[self.space.index(det)])
        except ValueError:
            return 0.0

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def fix_phase(v: np.ndarray, reference: int = 0) -> np.ndarray:
    """Make the reference amplitude nonnegative (first nonzero if it vanishes)."""
    pivot = v[reference]
    if abs(pivot) < 1e-12:
        nz = np.flatnonzero(np.abs(v) > 1e-12)
        pivot = v[nz[0]] if nz.size else 1.0
    return -v if pivot < 0 else v


def lowest_eigenpair(H: np.ndarray, space: DeterminantSpace | None = None,
                     reference: int = 0, degeneracy_tol: float = 0.0
                     ) -> tuple[float, CIVector | np.ndarray]:
    """Ground state of a symmetric matrix, phase-fixed on ``reference``.

    Returns a :class:`CIVector` when ``space`` is given, otherwise the bare
    eigenvector.

    With ``degeneracy_tol > 0`` every eigenvector within that energy window
    of the lowest one is treated as degenerate, and the returned state is the
    normalized projection of the reference determinant onto that window. The
    result is then an eigenvector only up to the window width. This mimics an
    iterative solver started from the reference that stops at an energy
    threshold; it is off by default.
    """
    H = np.asarray(H, dtype=float)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {H.shape}")
    if not np.allclose(H, H.T, rtol=0, atol=1e-12):
        raise ValueError("matrix is not symmetric")
    Hs = 0.5 * (H + H.T)
    w, V = np.linalg.eigh(Hs)
    v = V[:, 0]
    if degeneracy_tol > 0:
        window = V[:, w - w[0] <= degeneracy_tol]
        proj = window @ window[reference]
        if np.linalg.norm(proj) > 1e-8:
            v = proj / np.linalg.norm(proj)
    v = fix_phase(v, reference)
    e = float(w[0]) if degeneracy_tol <= 0 else float(v @ Hs @ v)
    if space is None:
        return e, v
    return e, CIVector(v, space, e, reference)


@dataclass(frozen=True)
class CorrelationReport:
    e_exact: float
    e_uhf: float

    @property
    def e_corr(self) -> float:
        return abs(self.e_exact - self.e_uhf)


def correlation_energy(e_exact: float, e_uhf: float) -> CorrelationReport:
    if not (np.isfinite(e_exact) and np.isfinite(e_uhf)):
        raise ValueError("energies must be finite")
    return CorrelationReport(float(e_exact), float(e_uhf))


def solve_fci(mo_ints: IntegralSet | SpinOrbitalIntegrals, degeneracy_tol: float = 0.0) -> CIVector:
    """Lowest FCI state for two electrons in the given orbital basis."""
    n_modes = mo_ints.n_modes if isinstance(mo_ints, SpinOrbitalIntegrals) else 2 * mo_ints.m
    space = enumerate_determinants(n_modes // 2)
    H = build_hamiltonian(mo_ints, space)
    _, vec = lowest_eigenpair(H, space, space.reference, degeneracy_tol)
    return vec
