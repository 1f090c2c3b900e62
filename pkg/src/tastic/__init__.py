"""Lag- and tilt-tolerant dissimilarity clustering for short time series."""

from .clustering import (
    ClusterLabels,
    Dendrogram,
    agglomerate,
    cut,
    hierarchical,
    kmeans,
)
from .datagen import ClusterRecipe, GeneratorSpec, generate, preset
from .dissimilarity import (
    AlphaSpec,
    DissimilarityMatrix,
    TimeSeries,
    TravelParams,
    base_dissim,
    default_alpha,
    dissim_matrix,
    pearson_dissim,
    shift_tilt,
    tastic_dissim,
    time_travel_dissim,
    trend_travel_dissim,
    weighted_euclidean,
)
from .evaluation import METHODS, accuracy, ari, compare_methods, elbow_curve, profile, wcd
from .io import load_dataset, save_dataset

__version__ = "0.1.0"

__all__ = [
    "AlphaSpec", "ClusterLabels", "ClusterRecipe", "Dendrogram", "DissimilarityMatrix",
    "GeneratorSpec", "METHODS", "TimeSeries", "TravelParams", "accuracy", "agglomerate", "ari",
    "base_dissim", "compare_methods", "cut", "default_alpha", "dissim_matrix", "elbow_curve",
    "generate", "hierarchical", "kmeans", "load_dataset", "pearson_dissim", "preset", "profile",
    "save_dataset", "shift_tilt", "tastic_dissim", "time_travel_dissim", "trend_travel_dissim",
    "wcd", "weighted_euclidean",
]
