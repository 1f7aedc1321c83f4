"""Validated in-memory representation of an industry-by-industry IO table.

An IOTable bundles the interindustry flow matrix with final demand, imports,
value added, satellite accounts, and gross output. Construction enforces the
structural layout; :func:`validate_table` checks the accounting identities
that make downstream coefficient math safe:

    row i:     x_i = sum_j Z_ij + sum_c f_ic
    column j:  x_j = sum_i Z_ij + imports_j + value_added_j

All monetary values are currency millions at basic prices; employment is a
headcount. Tables are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import StructuralError

# Final-demand components, in canonical column order. The short codes are the
# column headers used by the CSV layout and the keys accepted in scenario files.
FD_COMPONENTS = (
    "household_consumption",
    "npish_consumption",
    "government_consumption",
    "gross_fixed_capital_formation",
    "inventory_changes",
    "exports",
)
FD_CODES = ("HH", "NPISH", "GOV", "GFCF", "INV", "EXP")
FD_CODE_TO_COMPONENT = dict(zip(FD_CODES, FD_COMPONENTS))
FD_COMPONENT_TO_CODE = dict(zip(FD_COMPONENTS, FD_CODES))

# Only inventory changes are legitimately negative in national accounts.
SIGNED_FD_COMPONENTS = frozenset({"inventory_changes"})

SATELLITE_KINDS = (
    "income",
    "value_added",
    "employment",
    "gross_fixed_capital_formation",
)

# Identity tolerance defaults. Synthetic tables are exact up to float error;
# published national-accounts tables are rounded to whole millions.
SYNTHETIC_REL_TOL = 1e-6
INGESTED_REL_TOL = 5e-3


def _readonly(a) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Sector:
    """One industry sector: short code, full label, matrix position."""

    code: str
    name: str
    index: int


@dataclass(frozen=True)
class FinalDemandBlock:
    """Per-sector final-demand components as an n x 6 matrix.

    Columns follow :data:`FD_COMPONENTS`. Rows are sectors in table order.
    """

    values: np.ndarray

    def __post_init__(self):
        values = _readonly(self.values)
        if values.ndim != 2 or values.shape[1] != len(FD_COMPONENTS):
            raise StructuralError(
                f"final-demand block must be n x {len(FD_COMPONENTS)}, got {values.shape}"
            )
        object.__setattr__(self, "values", values)

    def component(self, name: str) -> np.ndarray:
        """Column for one component, addressed by full name or short code."""
        name = FD_CODE_TO_COMPONENT.get(name, name)
        try:
            col = FD_COMPONENTS.index(name)
        except ValueError:
            raise KeyError(f"unknown final-demand component {name!r}") from None
        return self.values[:, col]

    def totals(self) -> np.ndarray:
        """Total final demand per sector (row sums)."""
        return self.values.sum(axis=1)

    @classmethod
    def from_components(cls, n: int, **components) -> "FinalDemandBlock":
        """Build a block from named component vectors; missing ones are zero."""
        values = np.zeros((n, len(FD_COMPONENTS)))
        for name, vec in components.items():
            key = FD_CODE_TO_COMPONENT.get(name, name)
            if key not in FD_COMPONENTS:
                raise StructuralError(f"unknown final-demand component {name!r}")
            values[:, FD_COMPONENTS.index(key)] = np.asarray(vec, dtype=float)
        return cls(values)


@dataclass(frozen=True)
class SatelliteAccount:
    """Per-sector auxiliary vector translated through output changes.

    Monetary kinds are currency millions; employment is a headcount.
    """

    kind: str
    values: np.ndarray

    def __post_init__(self):
        if self.kind not in SATELLITE_KINDS:
            raise StructuralError(
                f"unknown satellite kind {self.kind!r}; expected one of {SATELLITE_KINDS}"
            )
        object.__setattr__(self, "values", _readonly(self.values))


@dataclass(frozen=True)
class IOTable:
    """A complete, structurally checked IO table.

    Fields
    ------
    sectors : ordered sectors; index equals matrix position
    Z : n x n interindustry flows (seller row i -> buyer column j)
    final_demand : per-sector component block
    imports : per-sector imports row
    value_added : per-sector value-added row
    satellites : mapping kind -> SatelliteAccount
    x : per-sector total gross output
    """

    sectors: tuple[Sector, ...]
    Z: np.ndarray
    final_demand: FinalDemandBlock
    imports: np.ndarray
    value_added: np.ndarray
    satellites: dict[str, SatelliteAccount] = field(default_factory=dict)
    x: np.ndarray = None
    unit: str = "currency millions"

    def __post_init__(self):
        object.__setattr__(self, "sectors", tuple(self.sectors))
        object.__setattr__(self, "Z", _readonly(self.Z))
        object.__setattr__(self, "imports", _readonly(self.imports))
        object.__setattr__(self, "value_added", _readonly(self.value_added))
        object.__setattr__(self, "x", _readonly(self.x))
        object.__setattr__(self, "satellites", dict(self.satellites))
        check_structure(self)

    @property
    def n(self) -> int:
        return len(self.sectors)

    @property
    def codes(self) -> tuple[str, ...]:
        return tuple(s.code for s in self.sectors)

    @property
    def f(self) -> np.ndarray:
        """Total final demand per sector."""
        return self.final_demand.totals()

    def sector_index(self, code: str) -> int:
        for s in self.sectors:
            if s.code == code:
                return s.index
        raise KeyError(f"unknown sector code {code!r}")


def check_structure(table: IOTable) -> None:
    """Raise StructuralError on any dimension or indexing inconsistency."""
    n = len(table.sectors)
    if n == 0:
        raise StructuralError("table has no sectors")
    codes = [s.code for s in table.sectors]
    if len(set(codes)) != n:
        dupes = sorted({c for c in codes if codes.count(c) > 1})
        raise StructuralError(f"duplicate sector codes: {dupes}")
    if [s.index for s in table.sectors] != list(range(n)):
        raise StructuralError("sector indices must be contiguous 0..n-1 in order")
    if table.Z.shape != (n, n):
        raise StructuralError(f"Z must be {n}x{n}, got {table.Z.shape}")
    if table.final_demand.values.shape[0] != n:
        raise StructuralError(
            f"final-demand block has {table.final_demand.values.shape[0]} rows, expected {n}"
        )
    for name, vec in (("imports", table.imports), ("value_added", table.value_added), ("x", table.x)):
        if vec.shape != (n,):
            raise StructuralError(f"{name} must have length {n}, got {vec.shape}")
    for kind, sat in table.satellites.items():
        if sat.kind != kind:
            raise StructuralError(f"satellite stored under {kind!r} declares kind {sat.kind!r}")
        if sat.values.shape != (n,):
            raise StructuralError(
                f"satellite {kind!r} has length {sat.values.shape[0]}, expected {n}"
            )


@dataclass(frozen=True)
class Violation:
    """One accounting-identity or sign violation found by validation."""

    kind: str  # row_identity | column_identity | negative_flow
    sector: str
    expected: float
    actual: float
    rel_err: float
    message: str


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    violations: tuple[Violation, ...]
    warnings: tuple[str, ...]
    rel_tol: float

    def lines(self) -> list[str]:
        out = [f"validation {'PASSED' if self.passed else 'FAILED'} (rel_tol={self.rel_tol:g})"]
        for v in self.violations:
            out.append(f"  violation [{v.kind}] {v.message}")
        for w in self.warnings:
            out.append(f"  warning: {w}")
        return out


def validate_table(table: IOTable, rel_tol: float = SYNTHETIC_REL_TOL) -> ValidationReport:
    """Check the row and column accounting identities and flow signs.

    Returns a report listing every violation with sector, expected, actual,
    and relative error. The report passes iff no identity violation exceeds
    ``rel_tol`` and no interindustry flow is negative. The input table is
    never modified. Structural defects raise StructuralError instead of
    being reported.
    """
    if rel_tol <= 0:
        raise ValueError(f"rel_tol must be positive, got {rel_tol}")
    check_structure(table)

    violations: list[Violation] = []
    warnings: list[str] = []
    codes = table.codes

    neg = np.argwhere(table.Z < 0)
    for i, j in neg:
        violations.append(
            Violation(
                kind="negative_flow",
                sector=codes[i],
                expected=0.0,
                actual=float(table.Z[i, j]),
                rel_err=float("nan"),
                message=f"Z[{codes[i]},{codes[j]}] = {table.Z[i, j]:g} is negative",
            )
        )

    row_sums = table.Z.sum(axis=1) + table.f
    col_sums = table.Z.sum(axis=0) + table.imports + table.value_added
    for kind, actual in (("row_identity", row_sums), ("column_identity", col_sums)):
        for j in range(table.n):
            expected = float(table.x[j])
            got = float(actual[j])
            denom = max(abs(expected), 1e-30)
            rel_err = abs(expected - got) / denom
            if rel_err > rel_tol:
                violations.append(
                    Violation(
                        kind=kind,
                        sector=codes[j],
                        expected=expected,
                        actual=got,
                        rel_err=rel_err,
                        message=(
                            f"{kind.replace('_', ' ')} for {codes[j]}: "
                            f"expected {expected:g}, got {got:g} (rel err {rel_err:.4g})"
                        ),
                    )
                )

    for comp in FD_COMPONENTS:
        if comp in SIGNED_FD_COMPONENTS:
            continue
        col = table.final_demand.component(comp)
        for j in np.flatnonzero(col < 0):
            warnings.append(
                f"negative {comp} entry for sector {codes[j]}: {col[j]:g}"
            )

    income = table.satellites.get("income")
    if income is not None:
        slack = rel_tol * np.maximum(np.abs(table.value_added), 1.0)
        for j in np.flatnonzero(income.values > table.value_added + slack):
            warnings.append(
                f"income exceeds value added for sector {codes[j]}: "
                f"{income.values[j]:g} > {table.value_added[j]:g}"
            )

    employment = table.satellites.get("employment")
    if employment is not None:
        for j in np.flatnonzero(employment.values < 0):
            warnings.append(
                f"negative employment for sector {codes[j]}: {employment.values[j]:g}"
            )

    return ValidationReport(
        passed=not violations,
        violations=tuple(violations),
        warnings=tuple(warnings),
        rel_tol=rel_tol,
    )


def drop_zero_sectors(table: IOTable) -> tuple[IOTable, list[Sector]]:
    """Remove sectors with no gross output, re-indexing everything else.

    Pairwise flows among retained sectors are preserved exactly. Returns the
    reduced table and the dropped sectors.
    """
    keep = table.x > 0
    if keep.all():
        return table, []
    dropped = [s for s, k in zip(table.sectors, keep) if not k]
    idx = np.flatnonzero(keep)
    sectors = tuple(
        Sector(code=s.code, name=s.name, index=new)
        for new, s in enumerate(table.sectors[i] for i in idx)
    )
    satellites = {
        kind: SatelliteAccount(kind=kind, values=sat.values[idx])
        for kind, sat in table.satellites.items()
    }
    reduced = IOTable(
        sectors=sectors,
        Z=table.Z[np.ix_(idx, idx)],
        final_demand=FinalDemandBlock(table.final_demand.values[idx, :]),
        imports=table.imports[idx],
        value_added=table.value_added[idx],
        satellites=satellites,
        x=table.x[idx],
        unit=table.unit,
    )
    return reduced, dropped


def rescale(table: IOTable, factor: float) -> IOTable:
    """Uniformly rescale all currency cells (unit change); employment is kept."""
    if factor <= 0:
        raise ValueError("rescale factor must be positive")
    satellites = {}
    for kind, sat in table.satellites.items():
        vals = sat.values if kind == "employment" else sat.values * factor
        satellites[kind] = SatelliteAccount(kind=kind, values=vals)
    return replace(
        table,
        Z=table.Z * factor,
        final_demand=FinalDemandBlock(table.final_demand.values * factor),
        imports=table.imports * factor,
        value_added=table.value_added * factor,
        satellites=satellites,
        x=table.x * factor,
    )
