"""Compact-sized probabilistic neural network (CS-PNN).

A hyperparameter-free RBF classifier built in one pass: hidden units are
added only for misclassified training patterns, the shared radius adapts to
each presented pattern, and whole classes or single units can be removed
(unlearned) and relearned at any time.
"""
from .baseline import StaticPnnModel, build_static, evaluate_static, max_pairwise_distance
from .core import (CsPnnModel, ForwardResult, OutputUnit, RbfUnit, activation, forward,
                   max_centroid_distance, unique_radius)
from .data_io import (DatasetSpec, NormalizationParams, XorShift64Star, apply_normalizer,
                      fit_normalizer, load_csv, load_idx, read_manifest,
                      seeded_class_permutation, split_by_classes)
from .dataset import LabeledDataset
from .estimators import CSPNNClassifier, MinMaxNormalizer, StaticPNNClassifier
from .exceptions import (ConfigError, ContractViolation, CsPnnError, DataParseError,
                         ModelEmptyError, NotFoundError)
from .learning import EvalReport, construct, evaluate, unlearn_classes, unlearn_units

__version__ = "0.1.0"

__all__ = [
    "CSPNNClassifier", "StaticPNNClassifier", "MinMaxNormalizer",
    "CsPnnModel", "RbfUnit", "OutputUnit", "ForwardResult", "LabeledDataset", "EvalReport",
    "StaticPnnModel", "DatasetSpec", "NormalizationParams", "XorShift64Star",
    "activation", "forward", "max_centroid_distance", "unique_radius",
    "construct", "evaluate", "unlearn_classes", "unlearn_units",
    "build_static", "evaluate_static", "max_pairwise_distance",
    "load_csv", "load_idx", "fit_normalizer", "apply_normalizer", "split_by_classes",
    "seeded_class_permutation", "read_manifest",
    "CsPnnError", "ContractViolation", "ModelEmptyError", "NotFoundError",
    "ConfigError", "DataParseError",
]
