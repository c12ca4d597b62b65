"""lexivar: lexicon-filtered social-post attention series and VAR analysis.

The package turns dated multilingual posts into monthly topic-attention
counts, pairs them with economic indicator series, and runs a reproducible
vector-autoregression chain over every (page, topic, indicator) triple:
unit-root screening and differencing, information-criterion lag choice,
OLS estimation with structural-break dummies, Granger non-causality Wald
tests, bootstrap impulse responses, and cointegration/whiteness
diagnostics, all emitted as publication-shaped tables.
"""

from ._kernels import BACKEND
from .causality import GrangerResult, toda_yamamoto_granger, wald_exclusion
from .corpus import (
    InterruptionSpec,
    Lexicon,
    Post,
    aggregate_monthly,
    attach_labels,
    build_interruption,
    lexicon_filter,
    load_indicator,
    load_lexicon,
    load_posts,
    normalize_text,
)
from .diagnostics import (
    JohansenRankRow,
    JohansenResult,
    LjungBoxResult,
    johansen_trace,
    ljung_box,
)
from .errors import (
    AlignmentError,
    ConfigurationError,
    CorpusFormatError,
    DegenerateInputError,
    GapError,
    LexivarError,
    NonStationarityError,
    SingularDesignError,
)
from .irf import IrfResult, irf, ma_coefficients, orthogonal_responses
from .months import MonthStamp, month_range
from .report import build_tables, emit_tables, fmt_number, render_manifest
from .series import (
    AcfResult,
    Role,
    TimeSeries,
    acf,
    align,
    difference,
    min_max_normalize,
)
from .stationarity import AdfResult, adf_test, ensure_stationary
from .varmodel import (
    CoefficientCell,
    CoefficientTable,
    PanelDataset,
    VarModel,
    coefficient_table,
    companion_matrix,
    fit_var,
    select_lag,
    significance_stars,
    simulate_var,
    spectral_radius,
)
from .workflow import (
    IndicatorSpec,
    ReportBundle,
    RunConfig,
    TripleFailure,
    TripleResult,
    load_config,
    run_workflow,
    triple_seed,
)

__version__ = "0.1.0"

__all__ = [
    "AcfResult",
    "AdfResult",
    "AlignmentError",
    "BACKEND",
    "CoefficientCell",
    "CoefficientTable",
    "ConfigurationError",
    "CorpusFormatError",
    "DegenerateInputError",
    "GapError",
    "GrangerResult",
    "IndicatorSpec",
    "InterruptionSpec",
    "IrfResult",
    "JohansenRankRow",
    "JohansenResult",
    "Lexicon",
    "LexivarError",
    "LjungBoxResult",
    "MonthStamp",
    "NonStationarityError",
    "PanelDataset",
    "Post",
    "ReportBundle",
    "Role",
    "RunConfig",
    "SingularDesignError",
    "TimeSeries",
    "TripleFailure",
    "TripleResult",
    "VarModel",
    "acf",
    "adf_test",
    "aggregate_monthly",
    "align",
    "attach_labels",
    "build_interruption",
    "build_tables",
    "coefficient_table",
    "companion_matrix",
    "difference",
    "emit_tables",
    "ensure_stationary",
    "fit_var",
    "fmt_number",
    "irf",
    "johansen_trace",
    "lexicon_filter",
    "ljung_box",
    "load_config",
    "load_indicator",
    "load_lexicon",
    "load_posts",
    "ma_coefficients",
    "min_max_normalize",
    "month_range",
    "normalize_text",
    "orthogonal_responses",
    "render_manifest",
    "run_workflow",
    "select_lag",
    "significance_stars",
    "simulate_var",
    "spectral_radius",
    "toda_yamamoto_granger",
    "triple_seed",
    "wald_exclusion",
    "__version__",
]
