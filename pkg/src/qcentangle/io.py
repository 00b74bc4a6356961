"""FCIDUMP integral files and scan-result tables."""

from __future__ import annotations

import csv
import io as _io
import json
import math
import re
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .integrals import IntegralSet


class FcidumpError(ValueError):
    pass


@dataclass(frozen=True)
class FcidumpMeta:
    norb: int
    nelec: int = 2
    ms2: int = 0


_FLOAT_FMT = "{:24.16e}"


def _unique_eri_indices(m):
    for i in range(m):
        for j in range(i + 1):
            ij = i * (i + 1) // 2 + j
            for k in range(m):
                for l in range(k + 1):
                    kl = k * (k + 1) // 2 + l
                    if kl <= ij:
                        yield i, j, k, l


def write_fcidump(ints: IntegralSet, meta: FcidumpMeta | None = None, tol: float = 0.0) -> str:
    """FCIDUMP text with one record per symmetry-unique integral.

    Records with ``|value| <= tol`` are skipped; the default writes every
    unique entry. Values carry 17 significant digits so a read-back is exact
    to double precision.
    """
    m = ints.m
    meta = meta or FcidumpMeta(m)
    lines = [
        f" &FCI NORB={meta.norb},NELEC={meta.nelec},MS2={meta.ms2},",
        "  ORBSYM=" + "1," * m,
        "  ISYM=1,",
        " &END",
    ]

    def rec(v, i, j, k, l):
        lines.append(f"{_FLOAT_FMT.format(v)} {i:4d} {j:4d} {k:4d} {l:4d}")

    for i, j, k, l in _unique_eri_indices(m):
        v = ints.eri[i, j, k, l]
        if abs(v) > tol or tol == 0.0:
            rec(v, i + 1, j + 1, k + 1, l + 1)
    for i in range(m):
        for j in range(i + 1):
            v = ints.hcore[i, j]
            if abs(v) > tol or tol == 0.0:
                rec(v, i + 1, j + 1, 0, 0)
    rec(ints.nuclear_repulsion, 0, 0, 0, 0)
    return "\n".join(lines) + "\n"


_KEY = re.compile(r"([A-Za-z][A-Za-z0-9_]*)\s*=")


def _parse_header(text):
    """KEY=value pairs of a namelist header; a value runs to the next key."""
    text = re.sub(r"&FCI|&END|/", " ", text, flags=re.IGNORECASE)
    keys = list(_KEY.finditer(text))
    values = {}
    for n, match in enumerate(keys):
        stop = keys[n + 1].start() if n + 1 < len(keys) else len(text)
        values[match.group(1).upper()] = text[match.end():stop].strip().strip(",").strip()
    return values


def read_fcidump(text: str) -> tuple[IntegralSet, FcidumpMeta]:
    """Parse FCIDUMP text and expand the 8-fold permutational symmetry.

    Entries absent from the file are zero. The overlap of the returned set is
    the identity (FCIDUMP integrals are in an orthonormal basis).
    """
    lines = text.splitlines()
    body_start = None
    for n, line in enumerate(lines):
        stripped = line.strip().upper()
        if stripped.endswith("&END") or stripped == "/":
            body_start = n + 1
            break
    if body_start is None:
        raise FcidumpError("FCIDUMP header is not terminated by &END")
    keys = _parse_header(" ".join(lines[:body_start]))
    try:
        norb = int(keys["NORB"])
    except (KeyError, ValueError):
        raise FcidumpError("FCIDUMP header lacks a valid NORB") from None
    nelec = int(keys.get("NELEC", 0))
    ms2 = int(keys.get("MS2", 0))
    if norb < 1:
        raise FcidumpError(f"NORB must be positive, got {norb}")

    m = norb
    eri = np.zeros((m, m, m, m))
    h = np.zeros((m, m))
    e_nuc = 0.0
    for n in range(body_start, len(lines)):
        lineno = n + 1
        parts = lines[n].split()
        if not parts:
            continue
        if len(parts) != 5:
            raise FcidumpError(f"line {lineno}: expected 'value i j k l', got {lines[n]!r}")
        try:
            v = float(parts[0].replace("D", "E").replace("d", "e"))
            i, j, k, l = (int(x) for x in parts[1:])
        except ValueError:
            raise FcidumpError(f"line {lineno}: malformed record {lines[n]!r}") from None
        if not math.isfinite(v):
            raise FcidumpError(f"line {lineno}: non-finite value")
        if any(x < 0 or x > m for x in (i, j, k, l)):
            raise FcidumpError(f"line {lineno}: index out of range 0..{m} in {lines[n]!r}")
        if i == j == k == l == 0:
            e_nuc = v
        elif k == 0 and l == 0:
            if i == 0 or j == 0:
                raise FcidumpError(f"line {lineno}: orbital energy records are not supported")
            h[i - 1, j - 1] = h[j - 1, i - 1] = v
        else:
            if 0 in (i, j, k, l):
                raise FcidumpError(f"line {lineno}: incomplete two-electron index set")
            p, q, r, s = i - 1, j - 1, k - 1, l - 1
            for a, b, c, d in ((p, q, r, s), (q, p, r, s), (p, q, s, r), (q, p, s, r),
                               (r, s, p, q), (s, r, p, q), (r, s, q, p), (s, r, q, p)):
                eri[a, b, c, d] = v
    return IntegralSet(np.eye(m), h, eri, e_nuc), FcidumpMeta(norb, nelec, ms2)


# --- result tables ---------------------------------------------------------

SIG_DIGITS = 12


@dataclass
class ResultRow:
    R: float                 # angstrom; 0 for a single atom
    E_RHF: float
    E_UHF: float
    E_FCI: float
    E_c: float
    S_spatial: float
    S_spinmode: float
    reference: str


COLUMNS = [f.name for f in fields(ResultRow)]


@dataclass
class ResultTable:
    rows: list[ResultRow] = field(default_factory=list)
    failures: list[tuple[float, str]] = field(default_factory=list)

    def __len__(self):
        return len(self.rows)

    def column(self, name: str, reference: str | None = None) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows
                         if reference is None or r.reference == reference])


def _fmt(v):
    if isinstance(v, str):
        return v
    return f"{v:.{SIG_DIGITS - 1}e}"


def emit_results(table: ResultTable | list[ResultRow], fmt: str = "csv") -> str:
    rows = table.rows if isinstance(table, ResultTable) else list(table)
    if not rows:
        raise ValueError("result table is empty")
    for n, row in enumerate(rows):
        bad = [k for k, v in asdict(row).items() if isinstance(v, float) and not math.isfinite(v)]
        if bad:
            raise ValueError(f"row {n} (R={row.R}) has non-finite field(s) {bad}; refusing to emit")
    if fmt == "csv":
        buf = _io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(COLUMNS)
        for row in rows:
            writer.writerow([_fmt(getattr(row, c)) for c in COLUMNS])
        return buf.getvalue()
    if fmt == "json":
        payload = [{c: (getattr(row, c) if isinstance(getattr(row, c), str)
                        else float(_fmt(getattr(row, c)))) for c in COLUMNS}
                   for row in rows]
        return json.dumps({"columns": COLUMNS, "rows": payload}, indent=1) + "\n"
    raise ValueError(f"unknown format {fmt!r}; expected 'csv' or 'json'")


def parse_results(text: str, fmt: str = "csv") -> list[ResultRow]:
    if fmt == "csv":
        reader = csv.DictReader(_io.StringIO(text))
        if reader.fieldnames != COLUMNS:
            raise ValueError(f"unexpected columns {reader.fieldnames}")
        return [ResultRow(**{c: (r[c] if c == "reference" else float(r[c])) for c in COLUMNS})
                for r in reader]
    if fmt == "json":
        data = json.loads(text)
        return [ResultRow(**{c: r[c] for c in COLUMNS}) for r in data["rows"]]
    raise ValueError(f"unknown format {fmt!r}")
