"""Command-line driver.

    qcentangle scan-h2        H2 dissociation curve (energies, E_c, entropies)
    qcentangle he             helium atom point
    qcentangle spin-sweep     two-spin model entropy versus R for several B
    qcentangle fcidump-run    FCI + entropies on integrals from an FCIDUMP file
    qcentangle export-fcidump write RHF-orbital integrals of a molecule
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from pathlib import Path

from . import __version__
from .io import FcidumpMeta, ResultTable, emit_results, write_fcidump
from .molbasis import BASIS_DIR_ENV, atom, diatomic, parse_molecule
from .pipeline import (ScanConfig, mo_integrals, run_from_fcidump, run_h2_scan,
                       run_he_point, run_spin_sweep)

log = logging.getLogger("qcentangle")


def _floats(text):
    return [float(x) for x in text.split(",") if x.strip()]


def _write(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _references(choice):
    return ("uhf", "rhf") if choice == "both" else (choice,)


def _add_output(p):
    p.add_argument("--format", choices=("csv", "json"), default="csv", help="output format")
    p.add_argument("--out", default="-", help="output path ('-' for stdout)")


def _add_targets(p):
    p.add_argument("--orbital", type=int, default=1,
                   help="spatial orbital (1-based) whose 4x4 reduced density matrix is used")
    p.add_argument("--mode", type=int, default=1,
                   help="spin-orbital mode (1-based, interleaved up/down) for the 2x2 matrix")


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(
        prog="qcentangle", formatter_class=fmt,
        description="Two-electron full CI with orbital entanglement entropy, plus the two-spin model. "
                    f"Basis fixtures are read from ${BASIS_DIR_ENV} when set.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="log SCF iterations (-vv for debug)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan-h2", formatter_class=fmt, help="H2 dissociation scan")
    p.add_argument("--basis", default="3-21g", help="basis fixture name or .gbs path")
    p.add_argument("--r-start", type=float, default=0.3, help="first bond length (--units)")
    p.add_argument("--r-stop", type=float, default=6.0, help="last bond length, inclusive")
    p.add_argument("--r-step", type=float, default=0.05, help="grid spacing")
    p.add_argument("--units", choices=("angstrom", "bohr"), default="angstrom",
                   help="length unit of the grid; output R is always angstrom")
    p.add_argument("--reference", choices=("rhf", "uhf", "both"), default="both",
                   help="orbitals defining the entanglement modes")
    p.add_argument("--guess-mix", type=float, default=math.pi / 8,
                   help="HOMO/LUMO mixing angle (rad) that breaks UHF spin symmetry")
    p.add_argument("--degeneracy-tol", type=float, default=0.0,
                   help="follow the reference determinant inside this energy window "
                        "above the ground state (0 = exact ground state)")
    p.add_argument("--warm-start", action="store_true",
                   help="reuse the previous point's RHF orbitals; couples grid points "
                        "and can move the UHF symmetry-breaking point")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    _add_targets(p)
    _add_output(p)

    p = sub.add_parser("he", formatter_class=fmt, help="helium atom point (R = 0)")
    p.add_argument("--basis", default="3-21g", help="basis fixture name or .gbs path")
    p.add_argument("--reference", choices=("rhf", "uhf", "both"), default="both",
                   help="orbitals defining the entanglement modes")
    _add_targets(p)
    _add_output(p)

    p = sub.add_parser("spin-sweep", formatter_class=fmt,
                       help="two-spin model entropy versus R for several B")
    p.add_argument("--r-start", type=float, default=0.5, help="bohr")
    p.add_argument("--r-stop", type=float, default=12.0, help="bohr")
    p.add_argument("--r-step", type=float, default=0.05, help="bohr")
    p.add_argument("--b-values", type=_floats, default=[0.05, 0.1, 0.2],
                   help="comma-separated field strengths (a.u.)")
    p.add_argument("--gamma", type=float, default=1.0, help="anisotropy (1 = Ising)")
    _add_output(p)

    p = sub.add_parser("fcidump-run", formatter_class=fmt,
                       help="FCI and entropies on integrals from an FCIDUMP file")
    p.add_argument("path", help="FCIDUMP file with NELEC=2")
    p.add_argument("--degeneracy-tol", type=float, default=0.0,
                   help="follow the reference determinant inside this energy window")
    _add_targets(p)
    _add_output(p)

    p = sub.add_parser("export-fcidump", formatter_class=fmt,
                       help="write RHF-orbital integrals as FCIDUMP")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--molecule", help="XYZ-style geometry file ('El x y z' lines, 'charge N')")
    src.add_argument("--system", choices=("he", "h2"), help="built-in system")
    p.add_argument("--r", type=float, default=0.74, help="H2 bond length for --system h2")
    p.add_argument("--units", choices=("angstrom", "bohr"), default="angstrom",
                   help="length unit of --r and of the geometry file")
    p.add_argument("--basis", default="3-21g", help="basis fixture name or .gbs path")
    p.add_argument("--out", default="-", help="output path ('-' for stdout)")
    return parser


def _emit_table(table: ResultTable, args) -> int:
    for r, err in table.failures:
        print(f"warning: point R={r:g} failed: {err}", file=sys.stderr)
    if table.rows:
        _write(emit_results(table, args.format), args.out)
    return 1 if table.failures else 0


def _spin_text(rows, fmt):
    names = ["R", "B", "J", "S"]
    if fmt == "json":
        data = [dict(zip(names, (float(f"{v:.11e}") for v in row))) for row in rows]
        return json.dumps({"columns": names, "rows": data}, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(names)
    for row in rows:
        w.writerow([f"{v:.11e}" for v in row])
    return buf.getvalue()


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s %(message)s")

    try:
        if args.command == "scan-h2":
            cfg = ScanConfig(args.basis, args.r_start, args.r_stop, args.r_step, args.units,
                             _references(args.reference), args.orbital - 1, args.mode - 1,
                             args.guess_mix, args.degeneracy_tol, args.warm_start, args.jobs)
            return _emit_table(run_h2_scan(cfg), args)
        if args.command == "he":
            table = run_he_point(args.basis, _references(args.reference),
                                 args.orbital - 1, args.mode - 1)
            return _emit_table(table, args)
        if args.command == "spin-sweep":
            if any(b == 0 for b in args.b_values):
                parser.error("--b-values must be nonzero")
            cfg = ScanConfig(r_start=args.r_start, r_stop=args.r_stop, r_step=args.r_step,
                             units="bohr")
            rows = run_spin_sweep(cfg.grid(), args.b_values, args.gamma)
            _write(_spin_text(rows, args.format), args.out)
            return 0
        if args.command == "fcidump-run":
            row = run_from_fcidump(args.path, args.orbital - 1, args.mode - 1,
                                   args.degeneracy_tol)
            return _emit_table(ResultTable([row]), args)
        if args.command == "export-fcidump":
            if args.molecule:
                mol = parse_molecule(Path(args.molecule).read_text(), units=args.units)
            elif args.system == "he":
                mol = atom("He")
            else:
                mol = diatomic("H", "H", args.r, units=args.units)
            ints = mo_integrals(mol, args.basis)
            _write(write_fcidump(ints, FcidumpMeta(ints.m, mol.n_electrons, 0)), args.out)
            return 0
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
