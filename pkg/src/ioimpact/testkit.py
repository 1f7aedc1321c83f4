"""Independent oracles and generators backing the property tests.

The truncated-expansion oracle recomputes the Leontief inverse by a route
that shares no code with the solver; the economy generator produces seeded
tables that are identity-consistent by construction; canonical_e2 is the
two-sector worked example used throughout the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonProductiveEconomyError
from .table import FinalDemandBlock, IOTable, SatelliteAccount, Sector

# Partial-sum norm above this is treated as divergence.
ORACLE_DIVERGENCE_CAP = 1e6


def neumann_oracle(A: np.ndarray, K: int) -> np.ndarray:
    """Truncated power series sum_{k=0..K} A^k.

    For ||A|| < 1 the truncation error is bounded by ||A||^(K+1) / (1 - ||A||),
    decreasing monotonically in K. Divergence (growing partial-sum norm) is
    reported as a non-productive economy.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    term = np.eye(n)
    total = np.eye(n)
    for _ in range(K):
        term = term @ A
        total += term
        if np.abs(term).max() > ORACLE_DIVERGENCE_CAP:
            raise NonProductiveEconomyError(
                "power-series terms grow without bound; economy is not productive"
            )
    return total


@dataclass(frozen=True)
class EconomyGenSpec:
    """Parameters for the random-economy generator.

    max_column_sum < 1 bounds every column sum of A, which guarantees a
    convergent production expansion.
    """

    n: int
    seed: int
    max_column_sum: float = 0.8
    final_demand_range: tuple[float, float] = (10.0, 100.0)
    employment_range: tuple[float, float] = (1.0, 50.0)
    income_share_range: tuple[float, float] = (0.3, 0.7)
    import_share_range: tuple[float, float] = (0.1, 0.9)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if not 0 < self.max_column_sum < 1:
            raise ValueError("max_column_sum must lie in (0, 1)")


def random_economy(spec: EconomyGenSpec) -> IOTable:
    """Deterministic-per-seed productive economy.

    A is drawn with column sums at most max_column_sum, final demand is drawn
    positive, and x solves the balance x = Ax + f, so both accounting
    identities hold to solver precision. Final demand is split across
    household consumption, government consumption, and exports; the column
    residual is split between imports and value added.
    """
    rng = np.random.default_rng(spec.seed)
    n = spec.n
    raw = rng.random((n, n)) + 1e-3
    target = rng.uniform(0.2, 1.0, n) * spec.max_column_sum
    A = raw / raw.sum(axis=0) * target

    f = rng.uniform(*spec.final_demand_range, n)
    x = np.linalg.solve(np.eye(n) - A, f)
    Z = A * x[np.newaxis, :]

    shares = rng.dirichlet(np.ones(3), n)  # household, government, exports
    fd = FinalDemandBlock.from_components(
        n,
        household_consumption=f * shares[:, 0],
        government_consumption=f * shares[:, 1],
        exports=f * shares[:, 2],
    )

    residual = x - Z.sum(axis=0)
    imports = residual * rng.uniform(*spec.import_share_range, n)
    value_added = residual - imports
    income = value_added * rng.uniform(*spec.income_share_range, n)
    employment = rng.uniform(*spec.employment_range, n)

    sectors = tuple(Sector(code=f"S{i + 1}", name=f"Sector {i + 1}", index=i) for i in range(n))
    return IOTable(
        sectors=sectors,
        Z=Z,
        final_demand=fd,
        imports=imports,
        value_added=value_added,
        satellites={
            "income": SatelliteAccount("income", income),
            "employment": SatelliteAccount("employment", employment),
        },
        x=x,
    )


def canonical_e2() -> IOTable:
    """The two-sector desk economy used across the test suite.

    Z = [[50, 20], [30, 40]], household demand [30, 30], x = [100, 100],
    employment [10, 20], income [20, 25], value added [30, 40]; imports
    absorb the column residual. Derived: A = [[0.5, 0.2], [0.3, 0.4]],
    L = [[2.5, 0.8333...], [1.25, 2.0833...]].
    """
    Z = np.array([[50.0, 20.0], [30.0, 40.0]])
    x = np.array([100.0, 100.0])
    value_added = np.array([30.0, 40.0])
    imports = x - Z.sum(axis=0) - value_added
    sectors = (Sector("S1", "Sector 1", 0), Sector("S2", "Sector 2", 1))
    return IOTable(
        sectors=sectors,
        Z=Z,
        final_demand=FinalDemandBlock.from_components(
            2, household_consumption=np.array([30.0, 30.0])
        ),
        imports=imports,
        value_added=value_added,
        satellites={
            "income": SatelliteAccount("income", np.array([20.0, 25.0])),
            "employment": SatelliteAccount("employment", np.array([10.0, 20.0])),
        },
        x=x,
    )
