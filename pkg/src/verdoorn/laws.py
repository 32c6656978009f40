"""The four growth-law specifications and their cross-equation identities.

On growth rates satisfying p = q - e, the four bivariate regressions

    Verdoorn   p on q   (slope b)
    Kaldor     e on q   (slope d)
    Rowthorn1  p on e   (slope eps1)
    Rowthorn2  q on e   (slope eps2)

are algebraically entangled: the Verdoorn and Kaldor fits satisfy
c = -a and d = 1 - b and share residuals up to sign, while the two
Rowthorn fits share an intercept and satisfy eps2 = 1 + eps1 with
identical residuals. Those relations hold exactly whenever all four
equations are estimated on the identical observation set, which is why
this module always estimates a cell that way and reports the gaps as a
self-check.

Returns to scale are summarized by 1/(1 - b) from the Verdoorn slope:
1 means constant returns, values above 1 increasing returns. Slopes at
or above 1 make the index blow up (rendered as unbounded) and negative
slopes are flagged as economically unacceptable; both degeneracies are
verdicts, not errors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import EstimationError, InvalidComparisonError, InvalidInputError
from .ols import FitResult, ols_fit
from .panel import GrowthSeries, SeriesMode

__all__ = [
    "CellLabel",
    "IdentityReport",
    "ScaleLabel",
    "ScaleVerdict",
    "SpecEstimate",
    "SpecKind",
    "Specification",
    "VERDOORN_REFERENCE_ELASTICITY",
    "VERDOORN_REFERENCE_RANGE",
    "check_identities",
    "economies_of_scale",
    "estimate",
    "run_cell",
    "specification",
]

# Classic reference value for the productivity-output elasticity, with
# the historical outer limits around it. Informational only: deviations
# are annotated in reports, never treated as pass/fail.
VERDOORN_REFERENCE_ELASTICITY = 0.45
VERDOORN_REFERENCE_RANGE = (0.41, 0.57)

_SCALE_ZERO_TOL = 1e-12


class SpecKind(Enum):
    VERDOORN = "verdoorn"
    KALDOR = "kaldor"
    ROWTHORN1 = "rowthorn1"
    ROWTHORN2 = "rowthorn2"


@dataclass(frozen=True)
class Specification:
    """A (response, regressor) pair fixed by the specification kind."""

    kind: SpecKind
    response: str
    regressor: str


_SPECIFICATIONS = {
    SpecKind.VERDOORN: Specification(SpecKind.VERDOORN, "p", "q"),
    SpecKind.KALDOR: Specification(SpecKind.KALDOR, "e", "q"),
    SpecKind.ROWTHORN1: Specification(SpecKind.ROWTHORN1, "p", "e"),
    SpecKind.ROWTHORN2: Specification(SpecKind.ROWTHORN2, "q", "e"),
}


def specification(kind: SpecKind) -> Specification:
    return _SPECIFICATIONS[kind]


class ScaleLabel(Enum):
    INCREASING = "increasing"
    CONSTANT = "constant"
    DECREASING = "decreasing"
    UNBOUNDED = "unbounded"
    UNACCEPTABLE = "unacceptable"


@dataclass(frozen=True)
class ScaleVerdict:
    """Returns-to-scale index 1/(1 - b) plus its classification.

    The raw value is kept even for unacceptable slopes (b < 0 gives a
    value between 0 and 1) so nothing is hidden behind the label; a
    slope at or above 1 has no finite index and carries value inf.
    """

    value: float
    label: ScaleLabel

    def rendered(self, decimals: int = 3) -> str:
        if self.label is ScaleLabel.UNBOUNDED:
            return "∞"
        if self.label is ScaleLabel.UNACCEPTABLE:
            return "---"
        return f"{self.value:.{decimals}f}"


def economies_of_scale(b: float) -> ScaleVerdict:
    """Classify the returns-to-scale index implied by a Verdoorn slope."""
    if not math.isfinite(b):
        raise InvalidInputError(f"slope must be finite, got {b!r}")
    if b >= 1.0:
        return ScaleVerdict(math.inf, ScaleLabel.UNBOUNDED)
    if abs(b) <= _SCALE_ZERO_TOL:
        return ScaleVerdict(1.0, ScaleLabel.CONSTANT)
    value = 1.0 / (1.0 - b)
    if b < 0.0:
        return ScaleVerdict(value, ScaleLabel.UNACCEPTABLE)
    return ScaleVerdict(value, ScaleLabel.INCREASING)


@dataclass(frozen=True)
class SpecEstimate:
    """One specification estimated on one series; scale is attached to
    the Verdoorn fit only (the index is derived from b alone)."""

    spec: Specification
    fit: FitResult
    scale: ScaleVerdict | None = None


def estimate(
    series: GrowthSeries,
    kind: SpecKind,
    *,
    dw_within_regions: bool = False,
) -> SpecEstimate:
    """Estimate one specification on a series.

    ``dw_within_regions=True`` drops residual pairs straddling a region
    boundary from the Durbin-Watson sum, for stacked panels where the
    adjacency of the last year of one region and the first of the next
    is an artifact of ordering.
    """
    spec = specification(kind)
    x = series.values(spec.regressor)
    y = series.values(spec.response)
    segments = series.region_run_lengths() if dw_within_regions else None
    try:
        fit = ols_fit(x, y, dw_segments=segments)
    except EstimationError as exc:
        raise type(exc)(f"{kind.value} on series {series.label!r}: {exc}") from exc
    scale = economies_of_scale(fit.slope) if kind is SpecKind.VERDOORN else None
    return SpecEstimate(spec, fit, scale)


@dataclass(frozen=True)
class IdentityReport:
    """Gaps in the cross-equation identities; all vanish (to rounding)
    when the four fits share one observation set with p = q - e."""

    intercept_negation_gap: float  # a + c
    slope_complement_gap: float  # b + d - 1
    rowthorn_intercept_gap: float  # lambda1 - lambda2
    rowthorn_slope_gap: float  # eps2 - eps1 - 1
    dw_verdoorn_kaldor_gap: float
    dw_rowthorn_gap: float

    def max_abs_gap(self) -> float:
        return max(
            abs(self.intercept_negation_gap),
            abs(self.slope_complement_gap),
            abs(self.rowthorn_intercept_gap),
            abs(self.rowthorn_slope_gap),
            abs(self.dw_verdoorn_kaldor_gap),
            abs(self.dw_rowthorn_gap),
        )


def check_identities(estimates: list[SpecEstimate] | tuple[SpecEstimate, ...]) -> IdentityReport:
    """Measure the cross-equation identity gaps over one cell's four fits.

    All four estimates must come from the identical observation set;
    differing sample sizes are rejected as an invalid comparison.
    """
    by_kind: dict[SpecKind, SpecEstimate] = {}
    for est in estimates:
        if est.spec.kind in by_kind:
            raise ValueError(f"duplicate estimate for {est.spec.kind.value}")
        by_kind[est.spec.kind] = est
    missing = [k.value for k in SpecKind if k not in by_kind]
    if missing:
        raise ValueError(f"missing estimates for: {missing}")

    sizes = {k.value: e.fit.n for k, e in by_kind.items()}
    if len(set(sizes.values())) != 1:
        raise InvalidComparisonError(
            f"estimates come from different observation sets: n = {sizes}"
        )

    verdoorn = by_kind[SpecKind.VERDOORN].fit
    kaldor = by_kind[SpecKind.KALDOR].fit
    row1 = by_kind[SpecKind.ROWTHORN1].fit
    row2 = by_kind[SpecKind.ROWTHORN2].fit
    return IdentityReport(
        intercept_negation_gap=verdoorn.intercept + kaldor.intercept,
        slope_complement_gap=verdoorn.slope + kaldor.slope - 1.0,
        rowthorn_intercept_gap=row1.intercept - row2.intercept,
        rowthorn_slope_gap=row2.slope - row1.slope - 1.0,
        dw_verdoorn_kaldor_gap=verdoorn.durbin_watson - kaldor.durbin_watson,
        dw_rowthorn_gap=row1.durbin_watson - row2.durbin_watson,
    )


@dataclass(frozen=True)
class CellLabel:
    """Identifies one table cell: sector, period and estimation mode."""

    sector: str
    period: str
    mode: str

    def caption(self) -> str:
        return f"{self.sector} | {self.period} | {self.mode}"

    def key(self) -> str:
        return f"{self.sector}|{self.period}|{self.mode}"

    @classmethod
    def from_key(cls, key: str) -> "CellLabel":
        sector, period, mode = key.split("|")
        return cls(sector, period, mode)


@dataclass(frozen=True)
class VerdoornReport:
    """All four estimates for one cell, the identity gaps and the
    deviation of the Verdoorn slope from the classic reference 0.45."""

    cell: CellLabel
    estimates: tuple[SpecEstimate, SpecEstimate, SpecEstimate, SpecEstimate]
    identities: IdentityReport
    reference_gap: float

    def estimate_for(self, kind: SpecKind) -> SpecEstimate:
        for est in self.estimates:
            if est.spec.kind is kind:
                return est
        raise KeyError(kind)


def run_cell(
    series: GrowthSeries,
    *,
    period: str | None = None,
    dw_within_regions: bool = False,
) -> VerdoornReport:
    """Estimate all four specifications on one series and package the
    estimates, identity gaps and reference annotation into a report.

    ``period`` overrides the derived period string (first to last
    calendar year covered); cross-section series only remember each
    region's final year, so callers holding the pre-averaging data can
    pass the exact span.
    """
    estimates = tuple(
        estimate(series, kind, dw_within_regions=dw_within_regions)
        for kind in (SpecKind.VERDOORN, SpecKind.KALDOR, SpecKind.ROWTHORN1, SpecKind.ROWTHORN2)
    )
    identities = check_identities(estimates)
    b = estimates[0].fit.slope
    if period is None:
        years = [o.year_to for o in series.observations]
        first = min(years) - 1 if series.mode is SeriesMode.POOLED else min(years)
        period = f"{first}-{max(years)}"
    cell = CellLabel(series.label, period, series.mode.value)
    return VerdoornReport(
        cell=cell,
        estimates=estimates,
        identities=identities,
        reference_gap=b - VERDOORN_REFERENCE_ELASTICITY,
    )
