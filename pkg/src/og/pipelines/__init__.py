"""On-demand pipelines: synthetic generation, augmentation, training, batch prediction."""

from .augment import augment
from .features import FEATURE_NAMES, WINDOW_SIZE, WINDOW_STRIDE, iter_windows, window_features
from .models import (
    DEFAULT_GAP_THRESHOLD_S,
    DEFAULT_JUMP_SPEED_KN,
    DEFAULT_MAX_SPEED_KN,
    DEFAULT_ZONES,
    InsufficientWindowError,
    MlModel,
    ModelError,
    RuleModel,
    WindowScore,
    model_from_params,
    score_fix_window,
)
from .predict import (
    PredictionError,
    batch_predict,
    detect_anomalies,
    measure_against_labels,
    persist_anomalies,
)
from .synth import DEFAULT_RATES, SynthConfigError, SynthResult, synth_generate
from .train import (
    InsufficientDataError,
    TrainingError,
    evaluate_model,
    nearest_rank_quantile,
    normal_stretches,
    train_ml,
    train_rule,
)

__all__ = [
    "DEFAULT_GAP_THRESHOLD_S",
    "DEFAULT_JUMP_SPEED_KN",
    "DEFAULT_MAX_SPEED_KN",
    "DEFAULT_RATES",
    "DEFAULT_ZONES",
    "FEATURE_NAMES",
    "WINDOW_SIZE",
    "WINDOW_STRIDE",
    "InsufficientDataError",
    "InsufficientWindowError",
    "MlModel",
    "ModelError",
    "PredictionError",
    "RuleModel",
    "SynthConfigError",
    "SynthResult",
    "TrainingError",
    "WindowScore",
    "augment",
    "batch_predict",
    "detect_anomalies",
    "evaluate_model",
    "iter_windows",
    "measure_against_labels",
    "model_from_params",
    "nearest_rank_quantile",
    "normal_stretches",
    "persist_anomalies",
    "score_fix_window",
    "synth_generate",
    "train_ml",
    "train_rule",
    "window_features",
]
