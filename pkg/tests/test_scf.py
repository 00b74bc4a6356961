import logging
import math

import numpy as np
import pytest
from scipy.linalg import eigh

from conftest import integrals_for
from qcentangle.ci import build_hamiltonian, enumerate_determinants, lowest_eigenpair
from qcentangle.integrals import IntegralSet
from qcentangle.molbasis import Molecule, diatomic
from qcentangle.scf import (DIIS, LinearDependenceError, SCFConvergenceError, orthogonalizer,
                            rhf_energy, rotate_occupied, run_rhf, run_uhf,
                            spin_orbital_integrals, transform_to_mo)

# Independent reference (a general-purpose quantum chemistry package, run
# offline with the same basis definitions).
H2_STO3G_RHF_REF = -1.1167143251
H2_STO3G_FCI_REF = -1.1372759436
HE_321G_RHF_REF = -2.8356798736


def h2(r, basis="3-21g", units="angstrom"):
    mol = diatomic("H", "H", r, units=units)
    return integrals_for(mol, basis)[1]


def test_h2_sto3g_rhf(h2_sto3g):
    res = run_rhf(h2_sto3g[2])
    assert res.converged
    assert res.energy == pytest.approx(-1.1167, abs=1e-3)
    assert res.energy == pytest.approx(H2_STO3G_RHF_REF, abs=1e-9)


def test_he_321g_rhf(he_321g):
    res = run_rhf(he_321g[2])
    assert res.energy == pytest.approx(-2.8357, abs=1e-3)
    assert res.energy == pytest.approx(HE_321G_RHF_REF, abs=1e-9)


def test_singular_overlap_raises():
    mol = diatomic("H", "H", 1e-7, units="bohr")
    ob, ints = integrals_for(mol, "sto-3g")
    with pytest.raises(LinearDependenceError):
        run_rhf(ints)


def test_orthogonalizer(h2_321g):
    S = h2_321g[2].overlap
    X = orthogonalizer(S)
    assert np.allclose(X.T @ S @ X, np.eye(len(S)), atol=1e-12)


def test_nonconvergence_carries_last_iterate(h2_321g):
    with pytest.raises(SCFConvergenceError) as info:
        run_rhf(h2_321g[2], max_iter=2)
    res = info.value.result
    assert not res.converged
    assert res.n_iter == 2
    assert np.isfinite(res.energy)


def test_convergence_criteria_met(h2_321g):
    res = run_rhf(h2_321g[2])
    assert res.commutator_norm < 1e-9
    assert res.density_change < 1e-10
    assert abs(res.history[-1] - res.history[-2]) < 1e-12


def test_rhf_idempotency(h2_321g):
    ints = h2_321g[2]
    C = run_rhf(ints).mo_coeff
    P = 2 * np.outer(C[:, 0], C[:, 0])
    assert np.allclose(P @ ints.overlap @ P, 2 * P, atol=1e-8)


def test_occupied_rotation_invariance(h2_321g):
    ints = h2_321g[2]
    res = run_rhf(ints)
    rotated = rotate_occupied(res, np.array([[-1.0]]), 1)
    assert rhf_energy(ints, rotated.mo_coeff) == pytest.approx(res.energy, abs=1e-10)


def test_rhf_energy_matches_scf(he_321g):
    res = run_rhf(he_321g[2])
    assert rhf_energy(he_321g[2], res.mo_coeff) == pytest.approx(res.energy, abs=1e-12)


def test_uhf_collapses_at_equilibrium():
    ints = h2(0.74)
    assert run_uhf(ints).energy == pytest.approx(run_rhf(ints).energy, abs=1e-8)


@pytest.mark.parametrize("r", [3.0, 4.0, 6.0])
def test_uhf_breaks_symmetry_when_stretched(r):
    ints = h2(r)
    assert run_uhf(ints).energy < run_rhf(ints).energy - 1e-4


def test_uhf_dissociation_limit():
    # one H atom carries one electron, so its energy is the lowest
    # generalized eigenvalue of hcore; charge -1 only satisfies the
    # two-electron constructor and does not enter the one-electron integrals
    _, a = integrals_for(Molecule.from_atoms([("H", (0, 0, 0))], charge=-1), "3-21g")
    e_h = eigh(a.hcore, a.overlap, eigvals_only=True)[0]
    assert run_uhf(h2(5.0)).energy == pytest.approx(2 * e_h, abs=1e-3)


def test_guess_mix_zero_is_rhf():
    ints = h2(3.0)
    assert run_uhf(ints, guess_mix=0.0).energy == pytest.approx(run_rhf(ints).energy, abs=1e-10)


@pytest.mark.parametrize("r", [0.5, 0.74, 1.5, 2.5, 4.0])
def test_variational_bounds(r):
    ints = h2(r)
    rhf, uhf = run_rhf(ints), run_uhf(ints)
    so = spin_orbital_integrals(ints, rhf.mo_coeff)
    e_fci, _ = lowest_eigenpair(build_hamiltonian(so, enumerate_determinants(ints.m)))
    assert uhf.energy <= rhf.energy + 1e-12
    assert e_fci <= uhf.energy + 1e-12


def test_transform_identity_on_orthonormal_set():
    rng = np.random.default_rng(3)
    h = rng.normal(size=(2, 2))
    g = rng.normal(size=(2, 2, 2, 2))
    ints = IntegralSet(np.eye(2), h + h.T, g, 0.3)
    out = transform_to_mo(ints, np.eye(2))
    assert np.array_equal(out.eri, ints.eri)
    assert np.allclose(out.hcore, ints.hcore)


def test_transform_preserves_symmetry(h2_321g):
    ints = h2_321g[2]
    C = run_rhf(ints).mo_coeff
    mo = transform_to_mo(ints, C)
    g = mo.eri
    assert np.allclose(mo.overlap, np.eye(ints.m), atol=1e-10)
    for perm in ["pqrs->qprs", "pqrs->pqsr", "pqrs->rspq"]:
        assert np.allclose(g, np.einsum(perm, g), atol=1e-12)


def test_mo_coulomb_positive(h2_sto3g):
    ints = h2_sto3g[2]
    mo = transform_to_mo(ints, run_rhf(ints).mo_coeff)
    assert mo.eri[0, 0, 0, 0] > 0


def test_transform_rejects_nonorthonormal(h2_321g):
    with pytest.raises(ValueError, match="orthonormal"):
        transform_to_mo(h2_321g[2], np.eye(4))


def test_nelec_must_be_two(h2_321g):
    with pytest.raises(ValueError):
        run_rhf(h2_321g[2], nelec=4)


def test_diis_falls_back_when_ill_conditioned():
    d = DIIS(size=3)
    F = np.eye(2)
    e = np.ones(4)
    d.push(F, e)
    d.push(F, e)
    assert d.extrapolate() is None


def test_iteration_log_lines(h2_321g, caplog):
    with caplog.at_level(logging.INFO, logger="qcentangle"):
        run_rhf(h2_321g[2])
    lines = [r.getMessage() for r in caplog.records if "rhf iter=" in r.getMessage()]
    assert lines and "energy=" in lines[0] and "grad=" in lines[0]


def test_uhf_orbitals_orthonormal():
    ints = h2(4.0)
    Ca, Cb = run_uhf(ints).mo_coeff
    for C in (Ca, Cb):
        assert np.allclose(C.T @ ints.overlap @ C, np.eye(ints.m), atol=1e-10)
    assert not np.allclose(np.abs(Ca), np.abs(Cb), atol=1e-3)
    assert math.isfinite(run_uhf(ints).energy)
