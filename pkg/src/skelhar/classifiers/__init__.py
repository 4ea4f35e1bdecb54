"""Six classical classifiers behind one train/predict contract."""

from __future__ import annotations

import numpy as np

from ..features import FeatureMatrix
from .base import (
    BaggedTreesSpec,
    ClassifierSpec,
    CubicSvmSpec,
    FineKnnSpec,
    FineTreeSpec,
    LinearDiscriminantSpec,
    MlpSpec,
    TrainedModel,
)
from .knn import FineKnnModel, train_knn
from .lda import LinearDiscriminantModel, SingularCovarianceError, train_lda
from .mlp import MlpModel, initial_weights, mlp_loss_and_gradient, train_mlp
from .svm import BinarySvm, CubicSvmModel, cubic_kernel, train_cubic_svm
from .tree import BaggedTreesModel, FineTreeModel, train_bagged_trees, train_fine_tree

__all__ = [
    "BaggedTreesModel",
    "BaggedTreesSpec",
    "BinarySvm",
    "ClassifierSpec",
    "CubicSvmModel",
    "CubicSvmSpec",
    "FineKnnModel",
    "FineKnnSpec",
    "FineTreeModel",
    "FineTreeSpec",
    "LinearDiscriminantModel",
    "LinearDiscriminantSpec",
    "MlpModel",
    "MlpSpec",
    "SingularCovarianceError",
    "TrainedModel",
    "cubic_kernel",
    "initial_weights",
    "mlp_loss_and_gradient",
    "model_from_json_dict",
    "predict",
    "train",
    "train_arrays",
    "train_bagged_trees",
    "train_cubic_svm",
    "train_fine_tree",
    "train_knn",
    "train_lda",
    "train_mlp",
]

_TRAINERS = {
    FineTreeSpec: train_fine_tree,
    BaggedTreesSpec: train_bagged_trees,
    FineKnnSpec: train_knn,
    CubicSvmSpec: train_cubic_svm,
    LinearDiscriminantSpec: train_lda,
    MlpSpec: train_mlp,
}

_MODEL_KINDS = {
    cls.kind: cls
    for cls in (FineTreeModel, BaggedTreesModel, FineKnnModel, CubicSvmModel,
                LinearDiscriminantModel, MlpModel)
}


def train_arrays(spec: ClassifierSpec, x: np.ndarray, y: np.ndarray) -> TrainedModel:
    """Train on raw arrays (rows, labels)."""
    try:
        trainer = _TRAINERS[type(spec)]
    except KeyError:
        raise TypeError(f"unknown classifier spec {type(spec).__name__}") from None
    return trainer(spec, x, y)


def train(spec: ClassifierSpec, features: FeatureMatrix) -> TrainedModel:
    """Train on a labeled feature matrix."""
    if features.labels is None:
        raise ValueError("training requires a labeled feature matrix")
    return train_arrays(spec, features.rows, features.labels)


def predict(model: TrainedModel, rows: np.ndarray) -> np.ndarray:
    return model.predict(rows)


def model_from_json_dict(d: dict) -> TrainedModel:
    try:
        cls = _MODEL_KINDS[d["kind"]]
    except KeyError:
        raise ValueError(f"unknown model kind {d.get('kind')!r}") from None
    return cls.from_json_dict(d)
