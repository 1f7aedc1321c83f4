"""Economy-wide impacts of a demand shock.

Two routes are implemented over the same model. The first propagates a
final-demand change through the Leontief inverse and normalizes to output
(dx = L df, q = dx / x), asserting on every call that the equivalent
fixed-point system q = A* q + f* agrees. The second partially extracts the
target sector's deliveries by scaling its coefficient row per purchaser and
re-solves the economy. Output changes translate into satellite changes
through the coefficient rows, and an aged-table correction can inflate the
nominal figures without touching the normalized ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import EmptyEconomyError, InternalConsistencyError, StructuralError
from .leontief import LeontiefModel, check_productive, resolve_satellite_coefficients
from .scenario import DemandDelta
from .table import SATELLITE_KINDS, Sector

# Agreement required between the direct and fixed-point inoperability routes.
FIXED_POINT_TOL = 1e-9

# Satellite kinds reported in impact results, in output order.
IMPACT_KINDS = ("value_added", "income", "employment", "gross_fixed_capital_formation")

TOP_OVERLAP_K = 10


@dataclass(frozen=True)
class ExtractionSpec:
    """A partial extraction of sector k's deliveries.

    alpha holds one intensity per purchasing sector; b_k is the target's
    coefficient row with a zero at the diagonal (own use is part of the
    sector's recipe and is never extracted); f_bar is the final-demand vector
    solved against.
    """

    k: int
    alpha: np.ndarray
    b_k: np.ndarray
    f_bar: np.ndarray
    label: str = ""

    def __post_init__(self):
        alpha = np.array(self.alpha, dtype=float)
        if np.any((alpha < 0) | (alpha > 1)):
            raise ValueError("extraction intensities must lie in [0, 1]")
        b_k = np.array(self.b_k, dtype=float)
        if b_k[self.k] != 0.0:
            raise ValueError("extraction row must be zero at the target's own position")
        for a in (alpha, b_k):
            a.setflags(write=False)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "b_k", b_k)
        fbar = np.array(self.f_bar, dtype=float)
        fbar.setflags(write=False)
        object.__setattr__(self, "f_bar", fbar)


def make_extraction_spec(
    model: LeontiefModel,
    target,
    alpha: np.ndarray,
    f_bar: np.ndarray | None = None,
    label: str = "",
) -> ExtractionSpec:
    """Derive the zero-diagonal extraction row from the model's coefficients."""
    k = model.sector_index(target)
    b_k = model.A[k, :].copy()
    b_k[k] = 0.0
    return ExtractionSpec(
        k=k,
        alpha=alpha,
        b_k=b_k,
        f_bar=model.f if f_bar is None else f_bar,
        label=label,
    )


@dataclass(frozen=True)
class ImpactResult:
    """Per-sector and aggregate consequences of one shock run.

    q is the normalized output change dx/x with losses negative; dx and the
    satellite changes are nominal and carry any blowup applied; pct_output is
    the economy-wide output change relative to baseline output and is never
    rescaled by a blowup.
    """

    method: str  # "inoperability" | "extraction"
    scenario: str
    sectors: tuple[Sector, ...]
    q: np.ndarray
    dx: np.ndarray
    satellite_changes: dict[str, np.ndarray]
    totals: dict[str, float]
    pct_output: float
    blowup_applied: float = 1.0

    def __post_init__(self):
        for name in ("q", "dx"):
            a = np.array(getattr(self, name), dtype=float)
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    @property
    def codes(self) -> tuple[str, ...]:
        return tuple(s.code for s in self.sectors)


def interdependency_matrix(model: LeontiefModel) -> np.ndarray:
    """A* with entries a_ij * (x_j / x_i); equals A when outputs are equal."""
    x = model.x
    return model.A * (x[np.newaxis, :] / x[:, np.newaxis])


def demand_perturbation(delta: DemandDelta, x: np.ndarray) -> np.ndarray:
    """Demand change normalized to output, positive for a loss."""
    return -np.asarray(delta.delta, dtype=float) / x


def _assemble(model, method, scenario, dx) -> ImpactResult:
    q = dx / model.x
    changes = satellite_deltas(model, dx)
    totals = {"output": float(dx.sum())}
    for kind in IMPACT_KINDS:
        if kind in changes:
            totals[kind] = float(changes[kind].sum())
    return ImpactResult(
        method=method,
        scenario=scenario,
        sectors=model.sectors,
        q=q,
        dx=dx,
        satellite_changes=changes,
        totals=totals,
        pct_output=float(dx.sum() / model.x.sum()),
    )


def inoperability(model: LeontiefModel, delta: DemandDelta) -> ImpactResult:
    """Propagate a final-demand change: dx = L df, q = dx / x.

    The equivalent fixed-point system q = A* q + f* is solved on every call
    and must agree with the direct route to within FIXED_POINT_TOL;
    disagreement signals a defect in the model math, not in the inputs.
    """
    dx = model.L @ delta.delta
    q = dx / model.x

    a_star = interdependency_matrix(model)
    f_star = demand_perturbation(delta, model.x)
    q_loss = np.linalg.solve(np.eye(model.table.n) - a_star, f_star)
    gap = np.abs(q_loss - (-q)).max()
    if gap > FIXED_POINT_TOL:
        raise InternalConsistencyError(
            f"direct and fixed-point inoperability disagree by {gap:.3e}"
        )
    return _assemble(model, "inoperability", delta.scenario, dx)


def partial_extraction(model: LeontiefModel, spec: ExtractionSpec) -> ImpactResult:
    """Scale the target's deliveries per purchaser and re-solve the economy.

    Row k of A becomes a_kj (1 - alpha_j) for j != k; the diagonal and the
    whole k-th column stay untouched. The new output solves
    (I - A_bar) x_bar = f_bar.
    """
    A = model.A
    k = spec.k
    n = A.shape[0]
    a_bar = A.copy()
    scale = 1.0 - spec.alpha
    scale[k] = 1.0
    a_bar[k, :] = A[k, :] * scale
    check_productive(a_bar)
    x_bar = np.linalg.solve(np.eye(n) - a_bar, spec.f_bar)
    dx = x_bar - model.x
    return _assemble(model, "extraction", spec.label, dx)


def full_extraction(model: LeontiefModel, target, label: str = "") -> ImpactResult:
    """Remove sector k entirely: its row, its column, and its final demand.

    The classical bound for the partial form; with the target's demand gone
    its output falls to zero and the rest of the economy re-solves without it.
    """
    k = model.sector_index(target)
    n = model.table.n
    if n == 1:
        raise EmptyEconomyError("extracting the only sector leaves an empty economy")
    a_bar = model.A.copy()
    a_bar[k, :] = 0.0
    a_bar[:, k] = 0.0
    f_bar = model.f.copy()
    f_bar[k] = 0.0
    check_productive(a_bar)
    x_bar = np.linalg.solve(np.eye(n) - a_bar, f_bar)
    dx = x_bar - model.x
    return _assemble(model, "extraction", label, dx)


def satellite_deltas(model: LeontiefModel, dx: np.ndarray) -> dict[str, np.ndarray]:
    """Translate an output change into per-satellite changes, dh = h_c * dx.

    Kinds with neither a satellite account nor a table fallback are omitted.
    """
    out: dict[str, np.ndarray] = {}
    for kind in SATELLITE_KINDS:
        try:
            coeff = resolve_satellite_coefficients(model, kind)
        except ValueError:
            continue
        out[kind] = coeff * dx
    return out


def apply_blowup(result: ImpactResult, b: float) -> ImpactResult:
    """Inflate every nominal figure by b; q and the percentage aggregate are
    exact regardless of table age and stay untouched."""
    if b <= 0:
        raise ValueError(f"blowup factor must be positive, got {b}")
    return replace(
        result,
        dx=result.dx * b,
        satellite_changes={k: v * b for k, v in result.satellite_changes.items()},
        totals={k: v * b for k, v in result.totals.items()},
        blowup_applied=result.blowup_applied * b,
    )


def estimate_blowup_factor(fd_totals: dict, gdp_growth: dict) -> float:
    """Estimate the demand growth between the table year and the study year.

    Historical years give ratios (final-demand growth / GDP growth); the
    average ratio applied to the projection years' GDP growth compounds into
    the factor: b = prod_y (1 + avg_ratio * gdp_growth_y) over years after
    the last final-demand observation.
    """
    years = sorted(fd_totals)
    ratios = []
    for prev, year in zip(years, years[1:]):
        growth = gdp_growth.get(year)
        if growth is None or growth == 0:
            continue
        fd_growth = fd_totals[year] / fd_totals[prev] - 1.0
        ratios.append(fd_growth / growth)
    if len(ratios) < 2:
        raise ValueError(
            f"need at least two historical final-demand/GDP ratio observations, got {len(ratios)}"
        )
    avg_ratio = math.fsum(ratios) / len(ratios)
    last_fd_year = years[-1]
    b = 1.0
    for year in sorted(gdp_growth):
        if year > last_fd_year:
            b *= 1.0 + avg_ratio * gdp_growth[year]
    return b


@dataclass(frozen=True)
class ComparisonReport:
    """Side-by-side differences between two impact results."""

    scenario: str
    method_a: str
    method_b: str
    sectors: tuple[Sector, ...]
    q_a: np.ndarray = field(repr=False)
    q_b: np.ndarray = field(repr=False)
    dx_diff: np.ndarray = field(repr=False)
    totals_a: dict[str, float]
    totals_b: dict[str, float]
    total_diffs: dict[str, float]
    pct_a: float
    pct_b: float
    pct_diff: float
    top_overlap: tuple[str, ...]


def compare_methods(a: ImpactResult, b: ImpactResult) -> ComparisonReport:
    """Per-sector and aggregate differences (a minus b), plus the overlap of
    the two most-affected rankings. Requires identical sector sets."""
    if a.codes != b.codes:
        raise StructuralError("impact results cover different sector sets")
    metrics = sorted(set(a.totals) & set(b.totals))
    total_diffs = {m: a.totals[m] - b.totals[m] for m in metrics}
    k = min(TOP_OVERLAP_K, len(a.sectors))

    def top(result):
        order = sorted(range(len(result.q)), key=lambda i: (result.q[i], i))
        return [result.codes[i] for i in order[:k]]

    top_a = top(a)
    top_b = set(top(b))
    overlap = tuple(code for code in top_a if code in top_b)
    return ComparisonReport(
        scenario=a.scenario if a.scenario == b.scenario else f"{a.scenario} vs {b.scenario}",
        method_a=a.method,
        method_b=b.method,
        sectors=a.sectors,
        q_a=a.q,
        q_b=b.q,
        dx_diff=a.dx - b.dx,
        totals_a={m: a.totals[m] for m in metrics},
        totals_b={m: b.totals[m] for m in metrics},
        total_diffs=total_diffs,
        pct_a=a.pct_output,
        pct_b=b.pct_output,
        pct_diff=a.pct_output - b.pct_output,
        top_overlap=overlap,
    )
