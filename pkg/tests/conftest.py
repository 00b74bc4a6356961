import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qcentangle.integrals import compute_integrals  # noqa: E402
from qcentangle.molbasis import atom, build_orbital_basis, diatomic, load_basis  # noqa: E402


def integrals_for(mol, basis):
    ob = build_orbital_basis(mol, load_basis(basis))
    return ob, compute_integrals(ob, mol)


@pytest.fixture(scope="session")
def h2_sto3g():
    mol = diatomic("H", "H", 1.4, units="bohr")
    return (mol,) + integrals_for(mol, "sto-3g")


@pytest.fixture(scope="session")
def h2_321g():
    mol = diatomic("H", "H", 0.74, units="angstrom")
    return (mol,) + integrals_for(mol, "3-21g")


@pytest.fixture(scope="session")
def he_321g():
    mol = atom("He")
    return (mol,) + integrals_for(mol, "3-21g")


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
