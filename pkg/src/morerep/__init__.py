"""Certainty-weighted, decay-aware aggregation of opinions into reputations."""

from .conversion import (
    ConversionConfig,
    MatchResult,
    NormBounds,
    Strategy,
    compute_norm_bounds,
    convert,
    convert_gmv,
    convert_mv,
    convert_naive,
    gmv_normalize,
)
from .distributions import (
    BINARY,
    Distribution,
    EvaluationSpace,
    SpaceMismatchError,
    emd,
    entropy,
    flat,
    mix,
    target,
)
from .engine import (
    DecayParams,
    GroupOpinionState,
    Opinion,
    ReputationLedger,
    TimeOrderError,
    certainty,
    decay,
    group_exact,
    group_update,
    process_odb,
    reputation,
    review,
)
from .prediction import (
    LeagueTable,
    Outcome,
    PredictionConfig,
    baseline_predict,
    baseline_update,
    predict,
    relative_strength,
)

__version__ = "0.1.0"
