"""Molecules, s-type Gaussian basis sets and the orbital basis built from them.

Lengths are bohr everywhere in this module. ``ANGSTROM_TO_BOHR`` is used by the
input readers when the caller says the coordinates are in angstrom.
"""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

ANGSTROM_TO_BOHR = 1.8897259886

ELEMENTS = ("H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne")
ATOMIC_NUMBERS = {symbol.upper(): z for z, symbol in enumerate(ELEMENTS, start=1)}

BASIS_DIR_ENV = "QCENTANGLE_BASIS_DIR"


class BasisError(ValueError):
    """Malformed or unsupported basis set definition."""


def atomic_number(symbol: str) -> int:
    try:
        return ATOMIC_NUMBERS[symbol.strip().upper()]
    except KeyError:
        raise ValueError(f"unknown element symbol {symbol!r}") from None


def element_symbol(z: int) -> str:
    if not 1 <= z <= len(ELEMENTS):
        raise ValueError(f"no element symbol for atomic number {z}")
    return ELEMENTS[z - 1]


@dataclass(frozen=True)
class Nucleus:
    atomic_number: int
    charge: float
    position: tuple[float, float, float]


@dataclass(frozen=True)
class Molecule:
    """Point nuclei plus a net charge.

    Only two-electron systems are accepted; the electron count is derived
    from the atomic numbers and the net charge.
    """

    nuclei: tuple[Nucleus, ...]
    net_charge: int = 0

    def __post_init__(self):
        if not self.nuclei:
            raise ValueError("molecule has no nuclei")
        for nuc in self.nuclei:
            if not np.all(np.isfinite(nuc.position)):
                raise ValueError(f"non-finite nuclear position {nuc.position}")
        if self.n_electrons != 2:
            raise ValueError(
                f"only two-electron systems are supported, got {self.n_electrons} electrons"
            )

    @classmethod
    def from_atoms(cls, atoms: Iterable[tuple[str | int, Sequence[float]]],
                   charge: int = 0, units: str = "bohr") -> "Molecule":
        scale = _unit_scale(units)
        nuclei = []
        for label, pos in atoms:
            z = label if isinstance(label, int) else atomic_number(label)
            xyz = tuple(float(x) * scale for x in pos)
            nuclei.append(Nucleus(z, float(z), xyz))
        return cls(tuple(nuclei), int(charge))

    @property
    def n_electrons(self) -> int:
        return sum(n.atomic_number for n in self.nuclei) - self.net_charge

    @property
    def coords(self) -> np.ndarray:
        return np.array([n.position for n in self.nuclei], dtype=float)

    @property
    def charges(self) -> np.ndarray:
        return np.array([n.charge for n in self.nuclei], dtype=float)

    def translated(self, shift: Sequence[float]) -> "Molecule":
        shift = np.asarray(shift, dtype=float)
        nuclei = tuple(
            Nucleus(n.atomic_number, n.charge, tuple(np.asarray(n.position) + shift))
            for n in self.nuclei
        )
        return Molecule(nuclei, self.net_charge)


def _unit_scale(units: str) -> float:
    units = units.lower()
    if units in ("bohr", "au", "a.u."):
        return 1.0
    if units in ("angstrom", "ang", "a"):
        return ANGSTROM_TO_BOHR
    raise ValueError(f"unknown length unit {units!r}; expected 'angstrom' or 'bohr'")


def diatomic(symbol_a: str, symbol_b: str, distance: float, units: str = "bohr",
             charge: int = 0) -> Molecule:
    """Two atoms on the z axis, separated by ``distance``."""
    return Molecule.from_atoms(
        [(symbol_a, (0.0, 0.0, 0.0)), (symbol_b, (0.0, 0.0, distance))],
        charge=charge, units=units,
    )


def atom(symbol: str, charge: int = 0) -> Molecule:
    return Molecule.from_atoms([(symbol, (0.0, 0.0, 0.0))], charge=charge)


def parse_molecule(text: str, units: str = "angstrom") -> Molecule:
    """Read a minimal XYZ-style geometry.

    Accepted lines are ``Element x y z``, an optional ``charge N`` line, an
    optional leading atom count and ``#`` comments.
    """
    atoms = []
    charge = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0].lower() == "charge":
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: expected 'charge N'")
            charge = int(parts[1])
        elif len(parts) == 1 and parts[0].isdigit() and not atoms:
            continue
        elif len(parts) == 4:
            try:
                atoms.append((parts[0], tuple(float(x) for x in parts[1:])))
            except ValueError:
                raise ValueError(f"line {lineno}: bad coordinates {raw!r}") from None
        else:
            raise ValueError(f"line {lineno}: cannot parse {raw!r}")
    return Molecule.from_atoms(atoms, charge=charge, units=units)


def primitive_norm(exponent):
    """Normalization constant of an s-type Gaussian exp(-a r^2)."""
    return (2.0 * np.asarray(exponent, dtype=float) / math.pi) ** 0.75


@dataclass(frozen=True)
class Shell:
    """Contracted s shell.

    ``coefficients`` multiply unit-normalized primitives and are rescaled so
    the contracted function has unit self-overlap.
    """

    exponents: tuple[float, ...]
    coefficients: tuple[float, ...]

    @classmethod
    def normalized(cls, exponents: Sequence[float], coefficients: Sequence[float]) -> "Shell":
        a = np.asarray(exponents, dtype=float)
        d = np.asarray(coefficients, dtype=float)
        if a.size == 0:
            raise BasisError("shell has no primitives")
        if a.shape != d.shape:
            raise BasisError("exponent and coefficient counts differ")
        if np.any(a <= 0) or not np.all(np.isfinite(a)):
            raise BasisError(f"exponents must be positive, got {a.tolist()}")
        p = a[:, None] + a[None, :]
        # overlap of unit-normalized s primitives
        s = (2.0 * np.sqrt(a[:, None] * a[None, :]) / p) ** 1.5
        self_overlap = d @ s @ d
        if self_overlap <= 0:
            raise BasisError("contracted function has zero norm")
        d = d / math.sqrt(self_overlap)
        return cls(tuple(a.tolist()), tuple(d.tolist()))

    @property
    def n_primitives(self) -> int:
        return len(self.exponents)

    @property
    def norm_coefficients(self) -> np.ndarray:
        """Coefficients of the raw primitives exp(-a r^2)."""
        return np.asarray(self.coefficients) * primitive_norm(self.exponents)


@dataclass(frozen=True)
class BasisSet:
    name: str
    shells: dict[int, tuple[Shell, ...]] = field(default_factory=dict)

    def __getitem__(self, z: int) -> tuple[Shell, ...]:
        return self.shells[z]

    def __contains__(self, z: int) -> bool:
        return z in self.shells


_SHELL_RE = re.compile(r"^([A-Za-z]+)\s+(\d+)\s+([-+0-9.eEdD]+)$")


def _float(token: str) -> float:
    return float(token.replace("D", "E").replace("d", "e"))


def parse_basis_file(text: str, name: str = "custom") -> BasisSet:
    """Parse Gaussian94-format basis text containing only S shells."""
    shells: dict[int, list[Shell]] = {}
    lines = [
        (n, ln.split("!", 1)[0].strip())
        for n, ln in enumerate(text.splitlines(), start=1)
    ]
    lines = [(n, ln) for n, ln in lines if ln]
    i = 0
    current = None
    while i < len(lines):
        lineno, line = lines[i]
        if line.startswith("****"):
            if current is not None and not shells[current]:
                raise BasisError(f"line {lineno}: empty block for element {element_symbol(current)}")
            current = None
            i += 1
            continue
        if current is None:
            parts = line.split()
            try:
                current = atomic_number(parts[0])
            except ValueError as exc:
                raise BasisError(f"line {lineno}: {exc}") from None
            if current in shells:
                raise BasisError(f"line {lineno}: duplicate block for {parts[0]}")
            shells[current] = []
            i += 1
            continue
        match = _SHELL_RE.match(line)
        if not match:
            raise BasisError(f"line {lineno}: expected shell header, got {line!r}")
        kind, nprim, scale = match.group(1).upper(), int(match.group(2)), _float(match.group(3))
        if kind != "S":
            raise BasisError(
                f"line {lineno}: unsupported angular momentum {kind!r} shell for "
                f"{element_symbol(current)} (only S shells are supported)"
            )
        if nprim < 1:
            raise BasisError(f"line {lineno}: shell with no primitives")
        if i + nprim >= len(lines):
            raise BasisError(f"line {lineno}: truncated shell")
        exps, coefs = [], []
        for k in range(1, nprim + 1):
            plineno, pline = lines[i + k]
            parts = pline.split()
            if len(parts) != 2:
                raise BasisError(f"line {plineno}: expected 'exponent coefficient'")
            exp = _float(parts[0]) * scale**2
            if not exp > 0:
                raise BasisError(f"line {plineno}: non-positive exponent {parts[0]}")
            exps.append(exp)
            coefs.append(_float(parts[1]))
        shells[current].append(Shell.normalized(exps, coefs))
        i += nprim + 1
    if current is not None and not shells[current]:
        raise BasisError(f"empty block for element {element_symbol(current)}")
    if not shells:
        raise BasisError("no element blocks found")
    return BasisSet(name, {z: tuple(s) for z, s in shells.items()})


def format_basis(bs: BasisSet) -> str:
    """Emit ``bs`` in Gaussian94 format; ``parse_basis_file`` reads it back."""
    out = ["****"]
    for z in sorted(bs.shells):
        out.append(f"{element_symbol(z)}     0")
        for shell in bs.shells[z]:
            out.append(f"S   {shell.n_primitives}   1.00")
            for a, d in zip(shell.exponents, shell.coefficients):
                out.append(f"  {a!r:>24}  {d!r:>24}")
        out.append("****")
    return "\n".join(out) + "\n"


def basis_dir() -> Path:
    override = os.environ.get(BASIS_DIR_ENV)
    if override:
        return Path(override)
    return Path(str(resources.files("qcentangle") / "data"))


def load_basis(name_or_path: str) -> BasisSet:
    """Load a basis by fixture name (``sto-3g``, ``3-21g``) or file path."""
    path = Path(name_or_path)
    if not path.is_file():
        path = basis_dir() / f"{name_or_path.lower()}.gbs"
        if not path.is_file():
            raise FileNotFoundError(f"no basis file for {name_or_path!r} (looked in {path.parent})")
    return parse_basis_file(path.read_text(), name=path.stem)


@dataclass(frozen=True)
class BasisFunction:
    center: int
    shell: Shell


@dataclass(frozen=True)
class OrbitalBasis:
    """Contracted functions placed on nuclei, ordered by atom then shell."""

    functions: tuple[BasisFunction, ...]
    centers: np.ndarray = field(repr=False, compare=False)

    @property
    def m(self) -> int:
        return len(self.functions)

    @property
    def n_spin_orbitals(self) -> int:
        return 2 * self.m

    def primitives(self):
        """Flattened primitives: (centers (n,3), exponents, coefficients, owner index)."""
        xyz, a, c, owner = [], [], [], []
        for mu, fn in enumerate(self.functions):
            for exp, coef in zip(fn.shell.exponents, fn.shell.norm_coefficients):
                xyz.append(self.centers[fn.center])
                a.append(exp)
                c.append(coef)
                owner.append(mu)
        return np.array(xyz), np.array(a), np.array(c), np.array(owner)


def build_orbital_basis(mol: Molecule, bs: BasisSet) -> OrbitalBasis:
    missing = sorted({n.atomic_number for n in mol.nuclei if n.atomic_number not in bs})
    if missing:
        raise BasisError(f"basis {bs.name!r} has no functions for atomic number(s) {missing}")
    functions = tuple(
        BasisFunction(k, shell)
        for k, nuc in enumerate(mol.nuclei)
        for shell in bs[nuc.atomic_number]
    )
    return OrbitalBasis(functions, mol.coords)
