"""End-to-end runs: H2 dissociation scans, the He atom point, spin-model
sweeps and CI on integrals read from an FCIDUMP file."""

from __future__ import annotations

import logging
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import spinmodel
from .ci import build_hamiltonian, correlation_energy, enumerate_determinants, lowest_eigenpair
from .entanglement import (reduced_density_spatial, reduced_density_spin_mode,
                           von_neumann_entropy)
from .integrals import IntegralSet, compute_integrals
from .io import ResultRow, ResultTable, read_fcidump
from .molbasis import Molecule, atom, build_orbital_basis, diatomic, load_basis
from .scf import run_rhf, run_uhf, spin_orbital_integrals

log = logging.getLogger(__name__)

REFERENCES = ("rhf", "uhf")


@dataclass(frozen=True)
class ScanConfig:
    """Settings for an H2 dissociation scan.

    Grid values are in ``units``; rows always report R in angstrom.
    ``orbital`` and ``mode`` are 0-based entanglement targets.
    """

    basis: str = "3-21g"
    r_start: float = 0.3
    r_stop: float = 6.0
    r_step: float = 0.05
    units: str = "angstrom"
    references: tuple[str, ...] = ("uhf", "rhf")
    orbital: int = 0
    mode: int = 0
    guess_mix: float = math.pi / 8
    degeneracy_tol: float = 0.0
    warm_start: bool = False
    jobs: int = 1

    def __post_init__(self):
        if not self.r_step > 0:
            raise ValueError(f"r_step must be positive, got {self.r_step}")
        if not self.r_start < self.r_stop:
            raise ValueError(f"r_start ({self.r_start}) must be below r_stop ({self.r_stop})")
        if self.r_start <= 0:
            raise ValueError("r_start must be positive")
        bad = [r for r in self.references if r not in REFERENCES]
        if bad or not self.references:
            raise ValueError(f"reference must be one of {REFERENCES}, got {self.references}")
        if self.orbital < 0 or self.mode < 0:
            raise ValueError("entanglement targets must be nonnegative")
        if self.units not in ("angstrom", "bohr"):
            raise ValueError(f"units must be 'angstrom' or 'bohr', got {self.units!r}")

    def grid(self) -> np.ndarray:
        """Grid points from r_start to r_stop inclusive, rounded to 1e-10."""
        n = int(math.floor((self.r_stop - self.r_start) / self.r_step + 1e-9))
        return np.round(self.r_start + self.r_step * np.arange(n + 1), 10)

    def grid_angstrom(self) -> np.ndarray:
        g = self.grid()
        return g if self.units == "angstrom" else g / 1.8897259886


def _entropies(vec, orbital, mode):
    if 2 * orbital + 1 >= vec.space.n_modes or mode >= vec.space.n_modes:
        raise ValueError(
            f"entanglement target (orbital {orbital + 1}, mode {mode + 1}) is outside "
            f"the {vec.space.n_orbitals}-orbital space"
        )
    s_sp = von_neumann_entropy(reduced_density_spatial(vec, orbital))
    s_mode = von_neumann_entropy(reduced_density_spin_mode(vec, mode))
    return s_sp, s_mode


def analyze_system(mol: Molecule, basis, references=("uhf",), orbital=0, mode=0,
                   guess_mix=math.pi / 8, degeneracy_tol=0.0, r_label=0.0,
                   rhf_guess=None, return_scf=False):
    """RHF, UHF, FCI and orbital entropies for one geometry.

    Returns one row per requested orbital reference. E_c is always
    |E_FCI - E_UHF|. With ``return_scf`` the RHF result is returned too.
    """
    bs = load_basis(basis) if isinstance(basis, str) else basis
    ints = compute_integrals(build_orbital_basis(mol, bs), mol)
    rhf = run_rhf(ints, mol.n_electrons, guess=rhf_guess)
    uhf = run_uhf(ints, mol.n_electrons, guess_mix, rhf=rhf)
    rows = []
    for ref in references:
        C = rhf.mo_coeff if ref == "rhf" else uhf.mo_coeff
        so = spin_orbital_integrals(ints, C)
        space = enumerate_determinants(so.n_modes // 2)
        H = build_hamiltonian(so, space)
        e_fci, _ = lowest_eigenpair(H)
        _, vec = lowest_eigenpair(H, space, space.reference, degeneracy_tol)
        report = correlation_energy(e_fci, uhf.energy)
        s_sp, s_mode = _entropies(vec, orbital, mode)
        rows.append(ResultRow(float(r_label), rhf.energy, uhf.energy, e_fci,
                              report.e_corr, s_sp, s_mode, ref))
    return (rows, rhf) if return_scf else rows


def _scan_point(args):
    r_ang, cfg = args
    mol = diatomic("H", "H", r_ang, units="angstrom")
    try:
        return analyze_system(mol, cfg.basis, cfg.references, cfg.orbital, cfg.mode,
                              cfg.guess_mix, cfg.degeneracy_tol, r_label=r_ang), None
    except Exception as exc:  # recorded per row, the scan continues
        log.warning("scan point R=%.4f failed: %s", r_ang, exc)
        return [], f"{type(exc).__name__}: {exc}"


def run_h2_scan(cfg: ScanConfig = ScanConfig()) -> ResultTable:
    grid = [float(r) for r in cfg.grid_angstrom()]
    table = ResultTable()
    if cfg.warm_start:
        # sequential, each RHF starts from the previous point's orbitals;
        # this couples grid points and can change where UHF breaks symmetry
        guess = None
        for r in grid:
            mol = diatomic("H", "H", r, units="angstrom")
            try:
                rows, rhf = analyze_system(mol, cfg.basis, cfg.references, cfg.orbital,
                                           cfg.mode, cfg.guess_mix, cfg.degeneracy_tol,
                                           r_label=r, rhf_guess=guess, return_scf=True)
                table.rows.extend(rows)
                guess = rhf.mo_coeff
            except Exception as exc:
                table.failures.append((r, f"{type(exc).__name__}: {exc}"))
        return table
    tasks = [(r, cfg) for r in grid]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_scan_point, tasks))
    else:
        results = [_scan_point(t) for t in tasks]
    for r, (rows, err) in zip(grid, results):
        if err is None:
            table.rows.extend(rows)
        else:
            table.failures.append((r, err))
    return table


def run_he_point(basis="3-21g", references=("uhf", "rhf"), orbital=0, mode=0) -> ResultTable:
    """The helium atom, recorded at R = 0."""
    return ResultTable(analyze_system(atom("He"), basis, references, orbital, mode))


def run_spin_sweep(R_grid=None, B_values=(0.05, 0.1, 0.2), gamma: float = 1.0):
    """Rows of (R bohr, B, J, S) for the two-spin model with J from R."""
    if R_grid is None:
        R_grid = np.round(np.arange(0.5, 12.0 + 1e-9, 0.05), 10)
    if any(b == 0 for b in B_values):
        raise ValueError("B values must be nonzero")
    rows = spinmodel.sweep_entanglement(R_grid, B_values, gamma)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", spinmodel.AsymptoticRangeWarning)
        return [(R, B, spinmodel.exchange_coupling(R), S) for R, B, S in rows]


def run_from_fcidump(path, orbital: int = 0, mode: int = 0,
                     degeneracy_tol: float = 0.0) -> ResultRow:
    """FCI and orbital entropies on externally supplied MO integrals.

    No SCF is run; the reference-determinant energy stands in for both
    E_RHF and E_UHF, and E_c is measured from it.
    """
    text = Path(path).read_text()
    ints, meta = read_fcidump(text)
    if meta.nelec != 2:
        raise ValueError(f"unsupported system: FCIDUMP has NELEC={meta.nelec}, only 2 is supported")
    return fci_row(ints, orbital, mode, degeneracy_tol)


def fci_row(ints: IntegralSet, orbital=0, mode=0, degeneracy_tol=0.0, r_label=0.0) -> ResultRow:
    space = enumerate_determinants(ints.m)
    H = build_hamiltonian(ints, space)
    e_fci, _ = lowest_eigenpair(H)
    _, vec = lowest_eigenpair(H, space, space.reference, degeneracy_tol)
    e_ref = float(H[space.reference, space.reference])
    s_sp, s_mode = _entropies(vec, orbital, mode)
    return ResultRow(r_label, e_ref, e_ref, e_fci, abs(e_fci - e_ref), s_sp, s_mode, "fcidump")


def mo_integrals(mol: Molecule, basis="3-21g") -> IntegralSet:
    """Integrals in the canonical RHF orbital basis (what export-fcidump writes)."""
    from .scf import transform_to_mo

    bs = load_basis(basis) if isinstance(basis, str) else basis
    ints = compute_integrals(build_orbital_basis(mol, bs), mol)
    return transform_to_mo(ints, run_rhf(ints, mol.n_electrons).mo_coeff)
