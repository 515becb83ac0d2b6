"""Class cover catch digraph classifiers and their evaluation harness.

Two cover families: pure covers whose open balls never swallow a
non-target point, and random-walk covers that trade purity for fewer,
better-placed balls. Both compress a training class to a small set of
prototype balls used by a scaled-dissimilarity classifier.
"""

from .classifier import (
    CccdModel,
    Prediction,
    discriminant,
    load_model,
    model_from_json,
    model_to_json,
    predict,
    predict_batch,
    save_model,
    scaled_dissimilarity,
    train,
    weighted_dissimilarity,
)
from .core import (
    LabeledDataset,
    cross_distance_matrix,
    dataset_to_csv,
    distance,
    parse_dataset,
    sample_uniform_box,
)
from .evaluation import (
    ClassifierSpec,
    EvalReport,
    SimulationConfig,
    auc,
    knn_predict,
    knn_predict_batch,
    knn_scores,
    local_imbalance,
    overlap_alpha,
    overlap_delta,
    pilot_select,
    pilot_study,
    reduction_stats,
    run_simulation,
)
from .pccd import ClassCover, CoverBall, Digraph, build_pccd_digraph, greedy_dominating_set, pccd_cover, pccd_radius
from .rwccd import RwBallSelection, RwProfile, rw_cover, rw_profile, rw_radius, rw_score

__version__ = "0.1.0"

__all__ = [
    "CccdModel",
    "ClassCover",
    "ClassifierSpec",
    "CoverBall",
    "Digraph",
    "EvalReport",
    "LabeledDataset",
    "Prediction",
    "RwBallSelection",
    "RwProfile",
    "SimulationConfig",
    "auc",
    "build_pccd_digraph",
    "cross_distance_matrix",
    "dataset_to_csv",
    "discriminant",
    "distance",
    "greedy_dominating_set",
    "knn_predict",
    "knn_predict_batch",
    "knn_scores",
    "load_model",
    "local_imbalance",
    "model_from_json",
    "model_to_json",
    "overlap_alpha",
    "overlap_delta",
    "parse_dataset",
    "pccd_cover",
    "pccd_radius",
    "pilot_select",
    "pilot_study",
    "predict",
    "predict_batch",
    "reduction_stats",
    "run_simulation",
    "rw_cover",
    "rw_profile",
    "rw_radius",
    "rw_score",
    "sample_uniform_box",
    "save_model",
    "scaled_dissimilarity",
    "train",
    "weighted_dissimilarity",
]
