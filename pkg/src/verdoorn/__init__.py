"""Panel econometrics for Verdoorn's Law.

Estimates the four classic growth-law specifications (Verdoorn, Kaldor
and the two Rowthorn forms) on regional level panels, classifies the
implied returns to scale, checks the cross-equation identities that tie
the four fits together, and ships a seeded Monte Carlo harness for
estimator-quality experiments.
"""

from .errors import (
    DegenerateRegressorError,
    EmptySelectionError,
    EstimationError,
    InsufficientUnitsError,
    InvalidComparisonError,
    InvalidInputError,
    PanelParseError,
    PanelValidationError,
    SampleTooSmallError,
    VerdoornError,
)
from .laws import (
    CellLabel,
    IdentityReport,
    ScaleLabel,
    ScaleVerdict,
    SpecEstimate,
    SpecKind,
    Specification,
    VERDOORN_REFERENCE_ELASTICITY,
    VERDOORN_REFERENCE_RANGE,
    VerdoornReport,
    check_identities,
    economies_of_scale,
    estimate,
    run_cell,
    specification,
)
from .ols import (
    FitResult,
    SignificanceMark,
    durbin_watson,
    mark_significance,
    ols_fit,
    regularized_incomplete_beta,
    t_critical,
    t_two_sided_p,
)
from .panel import (
    GrowthObservation,
    GrowthSeries,
    LoadResult,
    PanelObservation,
    Rejection,
    SeriesMode,
    cross_section,
    growth_rates,
    load_panel,
    load_series,
    pool,
    save_series,
    write_rejections,
)
from .report import read_results, render_table, report_rows, write_results
from .simulate import (
    DgpConfig,
    ExperimentResult,
    InfluenceRecord,
    QLaw,
    RecoverySummary,
    fixture_panel,
    generate,
    influence,
    load_dgp_config,
    recovery_experiment,
    write_fixture,
    write_summaries,
)

__version__ = "0.1.0"
