"""Two-electron quantum chemistry with orbital entanglement entropy.

Gaussian s-type integrals, Hartree-Fock, full CI, fermionic reduced density
matrices and the analytic two-spin model.
"""

__version__ = "0.1.0"

from .ci import (CIVector, CorrelationReport, DeterminantSpace, build_hamiltonian,
                 correlation_energy, enumerate_determinants, lowest_eigenpair, solve_fci)
from .entanglement import (OmegaMatrix, ReducedDensityMatrix, omega_from_ci,
                           partial_trace_modes, reduced_density_spatial,
                           reduced_density_spin_mode, von_neumann_entropy)
from .integrals import IntegralSet, boys_f0, compute_integrals
from .molbasis import (BasisSet, Molecule, OrbitalBasis, atom, build_orbital_basis, diatomic,
                       load_basis, parse_basis_file)
from .scf import ScfResult, run_rhf, run_uhf, spin_orbital_integrals, transform_to_mo
from .spinmodel import (SpinPairParams, SpinPairSpectrum, analytic_spectrum, exchange_coupling,
                        ground_state_entropy_closed_form, spin_hamiltonian, sweep_entanglement)

__all__ = [
    "BasisSet", "CIVector", "CorrelationReport", "DeterminantSpace", "IntegralSet", "Molecule",
    "OmegaMatrix", "OrbitalBasis", "ReducedDensityMatrix", "ScfResult", "SpinPairParams",
    "SpinPairSpectrum", "analytic_spectrum", "atom", "boys_f0", "build_hamiltonian",
    "build_orbital_basis", "compute_integrals", "correlation_energy", "diatomic", "enumerate_determinants",
    "exchange_coupling", "ground_state_entropy_closed_form", "load_basis", "lowest_eigenpair",
    "omega_from_ci", "parse_basis_file", "partial_trace_modes", "reduced_density_spatial",
    "reduced_density_spin_mode", "run_rhf", "run_uhf", "solve_fci", "spin_hamiltonian",
    "spin_orbital_integrals", "sweep_entanglement", "transform_to_mo", "von_neumann_entropy",
]
