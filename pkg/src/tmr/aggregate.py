"""Mean and standard deviation of scores across several prediction runs."""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InconsistentRuns
from .scoring import MetricReport


@dataclass(frozen=True)
class RunSet:
    gold_fingerprint: str
    reports: tuple[MetricReport, ...]

    @classmethod
    def from_reports(cls, reports: Sequence[MetricReport]) -> RunSet:
        if not reports:
            raise InconsistentRuns("at least one run is required")
        return cls(reports[0].gold_fingerprint, tuple(reports))


@dataclass(frozen=True)
class AggregateCell:
    """Mean and spread of one metric, in percent."""

    mean: Fraction | float
    std: float
    n: int


def mean_std(values: Sequence[Fraction | float], population: bool = False
             ) -> tuple[Fraction | float, float]:
    """Arithmetic mean and standard deviation (n-1 denominator unless ``population``).

    A single value has standard deviation 0.
    """
    if not values:
        raise ValueError("no values to aggregate")
    mean = statistics.mean(values)
    if len(values) == 1:
        return mean, 0.0
    std = statistics.pstdev(values) if population else statistics.stdev(values)
    return mean, float(std)


@dataclass(frozen=True)
class AggregateReport:
    types: tuple[str, ...]
    cells: dict[tuple[str, str, str], AggregateCell | None]
    sizes: dict[tuple[str, str], int]
    n: int
    population_std: bool = False


def aggregate_runs(runs: RunSet, population: bool = False) -> AggregateReport:
    """Combine runs cell by cell on unrounded values.

    A cell that is undefined (empty subset) in any run is undefined in the
    aggregate.
    """
    reports = runs.reports
    if not reports:
        raise InconsistentRuns("at least one run is required")
    first = reports[0]
    for r in reports:
        if r.gold_fingerprint != runs.gold_fingerprint:
            raise InconsistentRuns(f"run {r.source or '?'} was scored against different gold data")
        if r.subset_sizes() != first.subset_sizes() or r.types != first.types:
            raise InconsistentRuns(f"run {r.source or '?'} has different subset sizes")

    per_run = [r.cells() for r in reports]
    cells = {}
    for key in per_run[0]:
        values = [c[key] for c in per_run]
        if any(v is None for v in values):
            cells[key] = None
            continue
        mean, std = mean_std([100 * v for v in values], population)
        cells[key] = AggregateCell(mean, std, len(values))
    return AggregateReport(first.types, cells, first.subset_sizes(), len(reports), population)
