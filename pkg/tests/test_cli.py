import json
import subprocess
import sys

import pytest

from qcentangle.cli import build_parser, main
from qcentangle.io import parse_results
from qcentangle.molbasis import BASIS_DIR_ENV


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_help_shows_defaults(capsys):
    for sub in ["scan-h2", "he", "spin-sweep", "fcidump-run", "export-fcidump"]:
        with pytest.raises(SystemExit):
            main([sub, "--help"])
        text = capsys.readouterr().out
        assert "default" in text
    with pytest.raises(SystemExit):
        main(["scan-h2", "--help"])
    text = capsys.readouterr().out
    for flag in ["--basis", "--r-start", "--r-stop", "--r-step", "--units", "--reference",
                 "--format", "--out"]:
        assert flag in text
    assert "0.05" in text and "3-21g" in text


def test_env_var_named_in_help(capsys):
    with pytest.raises(SystemExit):
        main(["--help"])
    assert BASIS_DIR_ENV in capsys.readouterr().out


def test_he_csv(capsys):
    code, out, _ = run(["he", "--reference", "uhf"], capsys)
    assert code == 0
    (row,) = parse_results(out, "csv")
    assert row.E_c == pytest.approx(0.0149, abs=0.0015)


def test_scan_json_to_file(tmp_path, capsys):
    out = tmp_path / "scan.json"
    code, _, _ = run(["scan-h2", "--r-start", "0.7", "--r-stop", "0.8", "--r-step", "0.05",
                      "--format", "json", "--out", str(out)], capsys)
    assert code == 0
    rows = parse_results(out.read_text(), "json")
    assert [r.reference for r in rows] == ["uhf", "rhf"] * 3


def test_scan_byte_identical(tmp_path, capsys):
    args = ["scan-h2", "--r-start", "0.5", "--r-stop", "1.5", "--r-step", "0.25"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(args + ["--out", str(a)], capsys)
    run(args + ["--out", str(b)], capsys)
    assert a.read_bytes() == b.read_bytes()


def test_scan_bad_config_exit_code(capsys):
    code, _, err = run(["scan-h2", "--r-start", "2", "--r-stop", "1"], capsys)
    assert code == 2 and "error" in err


def test_scan_partial_failure_exit_code(capsys):
    code, out, err = run(["scan-h2", "--basis", "sto-3g", "--r-start", "0.7", "--r-stop", "0.8",
                          "--r-step", "0.1", "--orbital", "3"], capsys)
    assert code == 1 and "failed" in err


def test_spin_sweep(capsys):
    code, out, _ = run(["spin-sweep", "--r-start", "1", "--r-stop", "2", "--r-step", "0.5",
                        "--b-values", "0.1,0.2", "--format", "json"], capsys)
    data = json.loads(out)
    assert code == 0 and data["columns"] == ["R", "B", "J", "S"]
    assert len(data["rows"]) == 6


def test_spin_sweep_zero_field(capsys):
    with pytest.raises(SystemExit):
        main(["spin-sweep", "--b-values", "0,0.1"])


def test_export_then_run(tmp_path, capsys):
    dump = tmp_path / "he.fcidump"
    code, _, _ = run(["export-fcidump", "--system", "he", "--out", str(dump)], capsys)
    assert code == 0 and "NELEC=2" in dump.read_text()
    code, out, _ = run(["fcidump-run", str(dump)], capsys)
    (row,) = parse_results(out, "csv")
    assert code == 0 and row.S_spatial == pytest.approx(0.0313, abs=0.004)


def test_export_molecule_file(tmp_path, capsys):
    geom = tmp_path / "h2.xyz"
    geom.write_text("H 0 0 0\nH 0 0 1.4\n")
    code, out, _ = run(["export-fcidump", "--molecule", str(geom), "--units", "bohr",
                        "--basis", "sto-3g"], capsys)
    assert code == 0 and "NORB=2" in out


def test_fcidump_run_truncated(tmp_path, capsys):
    dump = tmp_path / "bad.fcidump"
    dump.write_text(" &FCI NORB=1,NELEC=2,MS2=0,\n &END\n 0.5 1 1\n")
    code, _, err = run(["fcidump-run", str(dump)], capsys)
    assert code == 2 and "line 3" in err


def test_missing_file(capsys):
    code, _, err = run(["fcidump-run", "/nonexistent/file"], capsys)
    assert code == 2


def test_basis_env_override(tmp_path, monkeypatch, capsys):
    (tmp_path / "tiny.gbs").write_text("****\nHe 0\nS 1 1.00\n 1.5 1.0\n****\n")
    monkeypatch.setenv(BASIS_DIR_ENV, str(tmp_path))
    code, out, _ = run(["he", "--basis", "tiny", "--reference", "rhf"], capsys)
    assert code == 0 and parse_results(out)[0].E_c == pytest.approx(0.0, abs=1e-12)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qcentangle.cli", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip()


def test_verbose_logs_scf_iterations(capsys):
    import logging
    root = logging.getLogger()
    old = list(root.handlers)
    for h in old:
        root.removeHandler(h)
    try:
        code, _, err = run(["-v", "he", "--reference", "rhf"], capsys)
    finally:
        for h in list(root.handlers):
            root.removeHandler(h)
        for h in old:
            root.addHandler(h)
    assert code == 0 and "rhf iter=" in err


def test_parser_subcommands():
    p = build_parser()
    assert p.parse_args(["he"]).command == "he"
