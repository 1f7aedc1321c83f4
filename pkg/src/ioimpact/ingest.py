"""File ingestion: IO tables, satellite accounts, scenarios, blowup history.

Table layout (CSV, UTF-8, comma-delimited, period decimal separator)::

    sector,<code_1>,...,<code_n>,HH,NPISH,GOV,GFCF,INV,EXP,total_output
    <code_1>,z_11,...,z_1n,f_HH,...,f_EXP,x_1
    ...
    <code_n>,z_n1,...,z_nn,...,x_n
    IMPORTS,m_1,...,m_n,,,,,,,
    VALUE_ADDED,va_1,...,va_n,,,,,,,
    TOTAL_USES,x_1,...,x_n,,,,,,,

Sector codes must match the metadata file (``code,name`` rows, order defines
the matrix order). Satellite files are ``sector,<kind>`` CSVs with one row
per sector. Scenario files are JSON; see parse_scenario. Parsing is total:
either a fully populated object is returned or an error carrying the file
coordinates is raised.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .errors import ScenarioConfigError, StructuralError, TableParseError
from .scenario import IntermediateSpec, Reallocation, ScenarioSpec, UseRatio
from .table import (
    FD_CODES,
    FinalDemandBlock,
    IOTable,
    SatelliteAccount,
    SATELLITE_KINDS,
    Sector,
)

TRAILING_ROWS = ("IMPORTS", "VALUE_ADDED", "TOTAL_USES")


def _read_rows(path) -> list[list[str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        return [row for row in csv.reader(fh)]


def _cell(raw: str, row: int, col: int) -> float:
    try:
        return float(raw)
    except ValueError:
        raise TableParseError(f"malformed numeric cell {raw!r}", row=row, column=col) from None


def parse_sector_metadata(path) -> list[Sector]:
    """Read the ``code,name`` metadata file; order defines matrix order."""
    rows = _read_rows(path)
    if not rows or [c.strip() for c in rows[0][:2]] != ["code", "name"]:
        raise TableParseError(f"{path}: expected header 'code,name'", row=1)
    sectors = []
    seen = set()
    for r, row in enumerate(rows[1:], start=2):
        if not row or not any(cell.strip() for cell in row):
            continue
        if len(row) < 2:
            raise TableParseError("metadata row needs code and name", row=r)
        code = row[0].strip()
        if code in seen:
            raise TableParseError(f"duplicate sector code {code!r}", row=r)
        seen.add(code)
        sectors.append(Sector(code=code, name=row[1].strip(), index=len(sectors)))
    if not sectors:
        raise TableParseError(f"{path}: no sectors defined")
    return sectors


def parse_satellite_file(path, codes: tuple[str, ...]) -> SatelliteAccount:
    """Read one ``sector,<kind>`` file covering every sector exactly once."""
    rows = _read_rows(path)
    if not rows or len(rows[0]) != 2 or rows[0][0].strip() != "sector":
        raise TableParseError(f"{path}: expected header 'sector,<kind>'", row=1)
    kind = rows[0][1].strip()
    if kind not in SATELLITE_KINDS:
        raise TableParseError(
            f"{path}: unknown satellite kind {kind!r}; expected one of {SATELLITE_KINDS}", row=1
        )
    values = {}
    for r, row in enumerate(rows[1:], start=2):
        if not row or not any(cell.strip() for cell in row):
            continue
        code = row[0].strip()
        if code not in codes:
            raise TableParseError(f"{path}: unknown sector code {code!r}", row=r)
        if code in values:
            raise TableParseError(f"{path}: duplicate sector {code!r}", row=r)
        values[code] = _cell(row[1], r, 2)
    missing = [c for c in codes if c not in values]
    if missing:
        raise StructuralError(f"{path}: satellite {kind!r} missing sectors {missing}")
    return SatelliteAccount(kind=kind, values=np.array([values[c] for c in codes]))


def parse_io_table(table_file, sector_metadata_file, satellite_files=()) -> IOTable:
    """Parse the table CSV plus metadata and satellite files into an IOTable.

    The result is structurally checked but not identity-validated; run
    validate_table (after drop_zero_sectors, for real tables) next.
    """
    sectors = parse_sector_metadata(sector_metadata_file)
    codes = tuple(s.code for s in sectors)
    n = len(codes)
    rows = _read_rows(table_file)
    expected_header = ["sector", *codes, *FD_CODES, "total_output"]
    width = len(expected_header)
    if not rows:
        raise TableParseError(f"{table_file}: empty file")
    header = [c.strip() for c in rows[0]]
    if header != expected_header:
        raise TableParseError(
            f"{table_file}: header mismatch; expected {expected_header[:4]}... "
            f"per the metadata file, got {header[:4]}...",
            row=1,
        )
    if len(rows) != 1 + n + len(TRAILING_ROWS):
        raise TableParseError(
            f"{table_file}: expected {1 + n + len(TRAILING_ROWS)} rows "
            f"({n} sectors + trailing {', '.join(TRAILING_ROWS)}), got {len(rows)}"
        )

    Z = np.zeros((n, n))
    fd = np.zeros((n, len(FD_CODES)))
    x = np.zeros(n)
    for i in range(n):
        r = 2 + i
        row = rows[1 + i]
        if len(row) != width:
            raise TableParseError(f"row has {len(row)} cells, expected {width}", row=r)
        if row[0].strip() != codes[i]:
            raise TableParseError(
                f"expected sector {codes[i]!r} per metadata order, got {row[0].strip()!r}",
                row=r,
                column=1,
            )
        for j in range(n):
            Z[i, j] = _cell(row[1 + j], r, 2 + j)
        for c in range(len(FD_CODES)):
            fd[i, c] = _cell(row[1 + n + c], r, 2 + n + c)
        x[i] = _cell(row[width - 1], r, width)

    trailing = {}
    for t, label in enumerate(TRAILING_ROWS):
        r = 2 + n + t
        row = rows[1 + n + t]
        if len(row) != width:
            raise TableParseError(f"row has {len(row)} cells, expected {width}", row=r)
        if row[0].strip() != label:
            raise TableParseError(
                f"expected trailing row {label!r}, got {row[0].strip()!r}", row=r, column=1
            )
        values = np.zeros(n)
        for j in range(n):
            values[j] = _cell(row[1 + j], r, 2 + j)
        for c in range(n + 1, width):
            if row[c].strip():
                raise TableParseError(
                    f"trailing row {label} must leave final-demand cells empty", row=r, column=c + 1
                )
        trailing[label] = values

    satellites = {}
    for sat_path in satellite_files:
        sat = parse_satellite_file(sat_path, codes)
        if sat.kind in satellites:
            raise StructuralError(f"satellite kind {sat.kind!r} supplied twice")
        satellites[sat.kind] = sat

    return IOTable(
        sectors=tuple(sectors),
        Z=Z,
        final_demand=FinalDemandBlock(fd),
        imports=trailing["IMPORTS"],
        value_added=trailing["VALUE_ADDED"],
        satellites=satellites,
        x=x,
    )


def _num(v: float) -> str:
    return repr(float(v))


def _quoted(text: str) -> str:
    if any(ch in text for ch in ',"\n'):
        return '"' + text.replace('"', '""') + '"'
    return text


def write_table_files(table: IOTable, out_dir) -> dict:
    """Write a table back to the canonical file layout.

    Emits ``table.csv``, ``sectors.csv``, and one ``satellite_<kind>.csv``
    per account; values use shortest round-trip formatting so a parse of the
    output reproduces the table exactly. Returns the paths written.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    codes = table.codes
    n = table.n
    blank = [""] * (len(FD_CODES) + 1)

    lines = [",".join(["sector", *codes, *FD_CODES, "total_output"])]
    for i in range(n):
        cells = [codes[i]]
        cells += [_num(v) for v in table.Z[i, :]]
        cells += [_num(v) for v in table.final_demand.values[i, :]]
        cells.append(_num(table.x[i]))
        lines.append(",".join(cells))
    for label, values in (
        ("IMPORTS", table.imports),
        ("VALUE_ADDED", table.value_added),
        ("TOTAL_USES", table.Z.sum(axis=0) + table.imports + table.value_added),
    ):
        lines.append(",".join([label, *[_num(v) for v in values], *blank]))
    table_path = out_dir / "table.csv"
    table_path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    meta_path = out_dir / "sectors.csv"
    meta_lines = ["code,name"] + [f"{s.code},{_quoted(s.name)}" for s in table.sectors]
    meta_path.write_text("\n".join(meta_lines) + "\n", encoding="utf-8")

    paths = {"table": table_path, "sectors": meta_path, "satellites": {}}
    for kind, sat in sorted(table.satellites.items()):
        sat_path = out_dir / f"satellite_{kind}.csv"
        sat_lines = [f"sector,{kind}"] + [
            f"{codes[j]},{_num(sat.values[j])}" for j in range(n)
        ]
        sat_path.write_text("\n".join(sat_lines) + "\n", encoding="utf-8")
        paths["satellites"][kind] = sat_path
    return paths


def parse_scenario(scenario_file) -> ScenarioSpec:
    """Parse and validate a scenario JSON file.

    Schema::

        {
          "name": str,
          "target_sector": str,
          "sub_service_drop": float in [0, 1],
          "component_ratios": {"HH"|...|"EXP": float in [0, 1]},
          "absolute_changes": {component: signed amount},      # optional
          "reallocation": {"savings_fraction": float,
                           "shares": {sector_code: float}},    # optional
          "intermediate": {"apply": bool,
                           "use_ratios": {sector_code: float},
                           "default_ratio": float},            # optional
          "blowup_factor": float >= 0                          # optional
        }

    An empty or missing reallocation block means the savings-only scenario.
    """
    path = Path(scenario_file)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ScenarioConfigError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ScenarioConfigError(f"{path}: top level must be an object")

    known = {
        "name",
        "target_sector",
        "sub_service_drop",
        "component_ratios",
        "absolute_changes",
        "reallocation",
        "intermediate",
        "blowup_factor",
    }
    unknown = set(raw) - known
    if unknown:
        raise ScenarioConfigError(f"{path}: unknown fields {sorted(unknown)}")
    for required in ("name", "target_sector", "sub_service_drop"):
        if required not in raw:
            raise ScenarioConfigError(f"{path}: missing required field {required!r}")

    realloc = None
    block = raw.get("reallocation")
    if block:
        if "savings_fraction" not in block:
            raise ScenarioConfigError(f"{path}: reallocation needs savings_fraction")
        realloc = Reallocation(
            savings_fraction=block["savings_fraction"],
            shares=dict(block.get("shares", {})),
        )

    intermediate = None
    block = raw.get("intermediate")
    if block:
        intermediate = IntermediateSpec(
            apply=bool(block.get("apply", True)),
            use_ratios=UseRatio(
                ratios=dict(block.get("use_ratios", {})),
                default=block.get("default_ratio", 1.0),
            ),
        )

    return ScenarioSpec(
        name=str(raw["name"]),
        target_sector=str(raw["target_sector"]),
        sub_service_drop=raw["sub_service_drop"],
        component_ratios=dict(raw.get("component_ratios", {})),
        absolute_changes=dict(raw.get("absolute_changes", {})),
        reallocation=realloc,
        intermediate=intermediate,
        blowup_factor=raw.get("blowup_factor", 1.0),
    )


def parse_blowup_history(fd_file, gdp_file) -> tuple[dict[int, float], dict[int, float]]:
    """Read ``year,total_final_demand`` and ``year,gdp_growth`` CSVs."""

    def read(path, value_name):
        rows = _read_rows(path)
        if not rows or rows[0][0].strip() != "year":
            raise TableParseError(f"{path}: expected header 'year,{value_name}'", row=1)
        out = {}
        for r, row in enumerate(rows[1:], start=2):
            if not row or not any(c.strip() for c in row):
                continue
            try:
                year = int(row[0])
            except ValueError:
                raise TableParseError(f"malformed year {row[0]!r}", row=r, column=1) from None
            out[year] = _cell(row[1], r, 2)
        return out

    return read(fd_file, "total_final_demand"), read(gdp_file, "gdp_growth")


def disaggregate_aggregate(total: float, weights, integral: bool = False) -> np.ndarray:
    """Split an aggregate across sectors proportionally to weights.

    With integral=True (headcounts) a largest-remainder correction keeps the
    parts summing to the whole; ties go to the lower index.
    """
    w = np.asarray(weights, dtype=float)
    if np.any(w < 0):
        raise ValueError("weights must be non-negative")
    wsum = w.sum()
    if wsum <= 0:
        raise ValueError("weights must not all be zero")
    shares = total * w / wsum
    if not integral:
        return shares
    whole = round(total)
    if abs(total - whole) > 1e-9:
        raise ValueError(f"integral split needs an integral total, got {total!r}")
    floors = np.floor(shares).astype(int)
    remainder = int(whole - floors.sum())
    order = sorted(range(len(w)), key=lambda i: (-(shares[i] - floors[i]), i))
    out = floors.astype(float)
    for i in order[:remainder]:
        out[i] += 1
    return out
