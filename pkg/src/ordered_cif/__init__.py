"""Order-restricted inference for cause-1 cumulative incidence across
several populations under competing risks and right censoring.

The pieces: incidence and hazard estimation per group, weighted isotonic
regression to impose a hypothesized ordering, a sequential one-sided
supremum test of equality against that ordering, Gaussian-multiplier
resampling for censored-data p-values, and simultaneous confidence
bands on a transformed scale.
"""

from .bands import BandResult, TransformSpec, compute_band, get_transform
from .data import (
    FailureRecord,
    GroupSample,
    MultiGroupDataset,
    ingest_csv,
    pooled_event_grid,
    write_csv,
)
from .errors import (
    ConfigError,
    DataError,
    DomainError,
    OrderedCifError,
    PreconditionError,
    RangeError,
)
from .estimators import (
    CifEstimate,
    CovarianceKernel,
    HazardEstimate,
    SurvivalEstimate,
    cif_censored,
    empirical_cif,
    event_table,
    km_left,
    nelson_aalen,
    plugin_covariance,
    plugin_covariance_matrix,
)
from .isotonic import (
    IsotonicProblem,
    RestrictedCifSet,
    isoreg_maxmin,
    isoreg_weighted,
    restrict_cifs,
)
from .ordered_test import (
    SequentialTestReport,
    WeightScheme,
    pvalue_analytic,
    pvalue_resampled,
    sequential_stats,
    sequential_test,
)
from .resampling import (
    AbsSup,
    CountingProcessData,
    ReplicateBatch,
    build_counting,
    replicate_sups,
    sup_quantile,
    zhat_replicate,
)
from .simulate import (
    ScenarioSpec,
    StudyReport,
    gen_competing,
    load_scenario,
    run_study,
    true_cif1,
)
from .stepfun import StepFunction, evaluate

__version__ = "0.1.0"

__all__ = [
    "AbsSup",
    "BandResult",
    "CifEstimate",
    "ConfigError",
    "CountingProcessData",
    "CovarianceKernel",
    "DataError",
    "DomainError",
    "FailureRecord",
    "GroupSample",
    "HazardEstimate",
    "IsotonicProblem",
    "MultiGroupDataset",
    "OrderedCifError",
    "PreconditionError",
    "RangeError",
    "ReplicateBatch",
    "RestrictedCifSet",
    "ScenarioSpec",
    "SequentialTestReport",
    "StepFunction",
    "StudyReport",
    "SurvivalEstimate",
    "TransformSpec",
    "WeightScheme",
    "build_counting",
    "cif_censored",
    "compute_band",
    "empirical_cif",
    "evaluate",
    "event_table",
    "gen_competing",
    "get_transform",
    "ingest_csv",
    "isoreg_maxmin",
    "isoreg_weighted",
    "km_left",
    "load_scenario",
    "nelson_aalen",
    "plugin_covariance",
    "plugin_covariance_matrix",
    "pooled_event_grid",
    "pvalue_analytic",
    "pvalue_resampled",
    "replicate_sups",
    "restrict_cifs",
    "run_study",
    "sequential_stats",
    "sequential_test",
    "sup_quantile",
    "true_cif1",
    "write_csv",
    "zhat_replicate",
]
