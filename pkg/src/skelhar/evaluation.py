"""Partitioning, cross-validation, metrics, and the experiment driver.

Protocol: rows are split 60/20/20 (train/test/validation) stratified by
class label by default. Model assessment runs stratified S-fold
cross-validation inside the train+test pool; the validation partition is
touched exactly once, by the final model, and produces the headline report.
PCA, when enabled, is fitted on the train partition only. report.json
labels which protocol produced each number.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .classifiers import (
    BaggedTreesSpec,
    ClassifierSpec,
    CubicSvmSpec,
    FineKnnSpec,
    FineTreeSpec,
    LinearDiscriminantSpec,
    MlpSpec,
    TrainedModel,
    train_arrays,
)
from .dataset import DatasetManifest
from .features import (
    FeatureMatrix,
    JointSubset,
    Modality,
    build_feature_matrix,
)
from .pca import PcaModel, pca_fit, pca_transform
from .skeleton import N_CLASSES, STATIONARY_LABELS, validate_sequence


class StratifyBy(enum.Enum):
    CLASS_LABEL = "class"
    PARTICIPANT = "participant"


@dataclass(frozen=True)
class SplitPlan:
    train_frac: float = 0.60
    test_frac: float = 0.20
    validation_frac: float = 0.20
    stratify_by: StratifyBy = StratifyBy.CLASS_LABEL
    seed: int = 0

    def __post_init__(self):
        total = self.train_frac + self.test_frac + self.validation_frac
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"split fractions must sum to 1.0, got {total}")
        if min(self.train_frac, self.test_frac, self.validation_frac) <= 0:
            raise ValueError("split fractions must be positive")


@dataclass(frozen=True)
class SplitIndices:
    train: np.ndarray
    test: np.ndarray
    validation: np.ndarray

    @property
    def pool(self) -> np.ndarray:
        """Train+test rows: the model-development pool."""
        return np.sort(np.concatenate([self.train, self.test]))


def split(matrix: FeatureMatrix, plan: SplitPlan) -> SplitIndices:
    """Disjoint stratified train/test/validation row partition.

    Within each stratum the test and validation shares are floored and the
    remainder goes to train, so per-stratum sizes sit within one row of the
    exact fractions. Deterministic in plan.seed.
    """
    if matrix.labels is None:
        raise ValueError("split requires a labeled feature matrix")
    if plan.stratify_by is StratifyBy.CLASS_LABEL:
        strata_key = matrix.labels
    else:
        if matrix.participants is None:
            raise ValueError("participant stratification requires participant ids")
        strata_key = matrix.participants

    rng = np.random.default_rng(plan.seed)
    train, test, validation = [], [], []
    for value in np.unique(strata_key):
        rows = np.nonzero(strata_key == value)[0]
        n = len(rows)
        if n < 5:
            raise ValueError(
                f"stratum {value} has only {n} rows; at least 5 are needed "
                f"for a 60/20/20 split"
            )
        perm = rng.permutation(rows)
        n_test = int(math.floor(plan.test_frac * n))
        n_val = int(math.floor(plan.validation_frac * n))
        n_train = n - n_test - n_val
        train.append(perm[:n_train])
        test.append(perm[n_train:n_train + n_test])
        validation.append(perm[n_train + n_test:])
    return SplitIndices(
        np.sort(np.concatenate(train)),
        np.sort(np.concatenate(test)),
        np.sort(np.concatenate(validation)),
    )


@dataclass(frozen=True)
class ClassMetrics:
    recall: float
    precision: float
    positive_likelihood_ratio: float  # math.inf when specificity is exactly 1


@dataclass(frozen=True)
class EvalReport:
    confusion: np.ndarray  # (9, 9) counts, rows = true, cols = predicted
    overall_accuracy: float
    per_class: dict[int, ClassMetrics]
    group_accuracy: dict[str, float | None]
    fold_accuracies: tuple[float, ...] | None = None

    def to_json_dict(self) -> dict:
        def _plr(v: float):
            return "inf" if math.isinf(v) else v

        return {
            "confusion": self.confusion.tolist(),
            "overall_accuracy": self.overall_accuracy,
            "per_class": {
                str(label): {
                    "recall": m.recall,
                    "precision": m.precision,
                    "positive_likelihood_ratio": _plr(m.positive_likelihood_ratio),
                }
                for label, m in sorted(self.per_class.items())
            },
            "group_accuracy": self.group_accuracy,
            "fold_accuracies": (
                None if self.fold_accuracies is None else list(self.fold_accuracies)
            ),
        }


def compute_report(true_labels: np.ndarray, predicted_labels: np.ndarray,
                   fold_accuracies: tuple[float, ...] | None = None) -> EvalReport:
    """Confusion matrix and derived metrics over aligned label arrays.

    Per-class positive likelihood ratio is sensitivity/(1 - specificity);
    a class with zero false positives has specificity 1 and is reported as
    the infinite marker. Classes with no true rows report recall 0, classes
    never predicted report precision 0.
    """
    true_labels = np.asarray(true_labels, dtype=np.int64)
    predicted_labels = np.asarray(predicted_labels, dtype=np.int64)
    if true_labels.shape != predicted_labels.shape or true_labels.ndim != 1:
        raise ValueError("true and predicted labels must be equal-length 1D arrays")
    if len(true_labels) == 0:
        raise ValueError("at least one labeled row is required")
    for arr, name in ((true_labels, "true"), (predicted_labels, "predicted")):
        if arr.min() < 1 or arr.max() > N_CLASSES:
            raise ValueError(f"{name} labels must lie in 1..{N_CLASSES}")

    confusion = np.zeros((N_CLASSES, N_CLASSES), dtype=np.int64)
    np.add.at(confusion, (true_labels - 1, predicted_labels - 1), 1)
    total = confusion.sum()
    overall = float(np.trace(confusion)) / float(total)

    per_class: dict[int, ClassMetrics] = {}
    for c in range(1, N_CLASSES + 1):
        tp = float(confusion[c - 1, c - 1])
        fn = float(confusion[c - 1].sum()) - tp
        fp = float(confusion[:, c - 1].sum()) - tp
        tn = float(total) - tp - fn - fp
        recall = tp / (tp + fn) if tp + fn > 0 else 0.0
        precision = tp / (tp + fp) if tp + fp > 0 else 0.0
        specificity = tn / (tn + fp) if tn + fp > 0 else 1.0
        plr = math.inf if specificity == 1.0 else recall / (1.0 - specificity)
        per_class[c] = ClassMetrics(recall, precision, plr)

    group_accuracy: dict[str, float | None] = {}
    for name, labels in (("stationary", STATIONARY_LABELS),
                         ("dynamic", tuple(range(5, N_CLASSES + 1)))):
        rows = [c - 1 for c in labels]
        group_total = confusion[rows].sum()
        if group_total == 0:
            group_accuracy[name] = None
        else:
            group_accuracy[name] = float(confusion[rows, rows].sum()) / float(group_total)

    return EvalReport(confusion, overall, per_class, group_accuracy, fold_accuracies)


def assign_folds(labels: np.ndarray, folds: int, seed: int) -> np.ndarray:
    """Stratified fold assignment: per-class shuffles dealt round-robin.

    Both global and per-class fold sizes stay within one row of N/folds.
    """
    rng = np.random.default_rng(seed)
    order = []
    for value in np.unique(labels):
        rows = np.nonzero(labels == value)[0]
        if len(rows) < folds:
            raise ValueError(
                f"class {value} has {len(rows)} rows, fewer than {folds} folds"
            )
        order.append(rng.permutation(rows))
    order = np.concatenate(order)
    assignment = np.empty(len(labels), dtype=np.int64)
    assignment[order] = np.arange(len(labels)) % folds
    return assignment


def cross_validate(spec: ClassifierSpec, matrix: FeatureMatrix, folds: int = 5,
                   seed: int = 0,
                   fold_assignment: np.ndarray | None = None) -> EvalReport:
    """Stratified S-fold cross-validation aggregating out-of-fold predictions.

    Every row lands in exactly one held-out fold; the report's confusion
    matrix covers all rows and fold_accuracies lists per-fold accuracy.
    fold_assignment overrides the assignment (testing hook); it must map
    every row to a fold in 0..folds-1.
    """
    if matrix.labels is None:
        raise ValueError("cross-validation requires a labeled feature matrix")
    if fold_assignment is None:
        fold_assignment = assign_folds(matrix.labels, folds, seed)
    else:
        fold_assignment = np.asarray(fold_assignment, dtype=np.int64)
        if fold_assignment.shape != (matrix.n_rows,):
            raise ValueError("fold_assignment must assign every row")

    predictions = np.empty(matrix.n_rows, dtype=np.int64)
    fold_accuracies = []
    for f in range(folds):
        held = np.nonzero(fold_assignment == f)[0]
        rest = np.nonzero(fold_assignment != f)[0]
        model = train_arrays(spec, matrix.rows[rest], matrix.labels[rest])
        pred = model.predict(matrix.rows[held])
        predictions[held] = pred
        fold_accuracies.append(float(np.mean(pred == matrix.labels[held])))

    return compute_report(matrix.labels, predictions, tuple(fold_accuracies))


# ---------------------------------------------------------------------------
# Experiment driver
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PcaConfig:
    enabled: bool = False
    variance_threshold: float = 0.95


@dataclass(frozen=True)
class PipelineConfig:
    modality: Modality = Modality.COORDINATES
    subset: JointSubset = field(default_factory=JointSubset.c28)
    dims: int = 3
    pca: PcaConfig = field(default_factory=PcaConfig)
    classifier: ClassifierSpec = None  # type: ignore[assignment]
    split: SplitPlan = field(default_factory=SplitPlan)
    folds: int = 5
    seed: int = 0
    # explicit source-frame positions; None selects the centered window
    frame_positions: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.dims not in (2, 3):
            raise ValueError("dims must be 2 or 3")
        if self.folds < 2:
            raise ValueError("folds must be >= 2")
        if self.classifier is None:
            raise ValueError("a classifier spec is required")
        if self.frame_positions is not None:
            object.__setattr__(self, "frame_positions", tuple(self.frame_positions))

    def with_seed(self, seed: int) -> "PipelineConfig":
        """Rewire every seed in the config to one run seed."""
        return replace(
            self,
            seed=seed,
            split=replace(self.split, seed=seed),
            classifier=replace(self.classifier, seed=seed),
        )

    def to_json_dict(self) -> dict:
        classifier = {"name": _CLASSIFIER_NAMES[type(self.classifier)]}
        for key, value in vars(self.classifier).items():
            classifier[key] = value
        return {
            "modality": self.modality.value,
            "subset": {
                "name": self.subset.name,
                "joints": [j.name for j in self.subset.joints],
            },
            "dims": self.dims,
            "pca": {
                "enabled": self.pca.enabled,
                "variance_threshold": self.pca.variance_threshold,
            },
            "classifier": classifier,
            "split": {
                "train_frac": self.split.train_frac,
                "test_frac": self.split.test_frac,
                "validation_frac": self.split.validation_frac,
                "stratify_by": self.split.stratify_by.value,
                "seed": self.split.seed,
            },
            "folds": self.folds,
            "seed": self.seed,
            "frame_positions": (
                None if self.frame_positions is None else list(self.frame_positions)
            ),
        }


_CLASSIFIER_NAMES = {
    FineTreeSpec: "tree",
    LinearDiscriminantSpec: "lda",
    CubicSvmSpec: "svm-cubic",
    FineKnnSpec: "knn",
    BaggedTreesSpec: "bagged",
    MlpSpec: "mlp",
}


@dataclass(frozen=True)
class ExperimentResult:
    report: EvalReport  # validation-holdout metrics, CV fold accuracies attached
    cv_report: EvalReport  # out-of-fold metrics on the train+test pool
    model: TrainedModel
    pca_model: PcaModel | None
    config: PipelineConfig
    split_indices: SplitIndices
    validation_scores: np.ndarray  # (n_validation, |class_set|) decision scores
    validation_truth: np.ndarray


def run_matrix_experiment(config: PipelineConfig, matrix: FeatureMatrix,
                          out_dir: str | Path | None = None) -> ExperimentResult:
    """The experiment core, starting from an extracted feature matrix."""
    indices = split(matrix, config.split)

    pca_model = None
    if config.pca.enabled:
        pca_model = pca_fit(matrix.rows[indices.train], config.pca.variance_threshold)
        matrix = matrix.with_rows(pca_transform(pca_model, matrix.rows))

    pool = indices.pool
    pool_matrix = matrix.take(pool)
    cv_report = cross_validate(config.classifier, pool_matrix,
                               folds=config.folds, seed=config.seed)

    model = train_arrays(config.classifier, pool_matrix.rows, pool_matrix.labels)
    val_rows = matrix.rows[indices.validation]
    val_pred = model.predict(val_rows)
    report = compute_report(matrix.labels[indices.validation], val_pred,
                            cv_report.fold_accuracies)

    result = ExperimentResult(report, cv_report, model, pca_model, config, indices,
                              model.decision_scores(val_rows),
                              matrix.labels[indices.validation])
    if out_dir is not None:
        write_bundle(result, out_dir)
    return result


def run_experiment(config: PipelineConfig, manifest: DatasetManifest,
                   out_dir: str | Path | None = None) -> ExperimentResult:
    """Extract features per the config, run the evaluation protocol, and
    optionally persist the report bundle."""
    for seq in manifest.sequences:
        check = validate_sequence(seq)
        if not check.ok:
            v = check.violations[0]
            raise ValueError(
                f"invalid sequence (participant={seq.participant_id}, "
                f"activity={seq.activity.label}): {v.message}"
            )
    matrix = build_feature_matrix(manifest, config.modality, config.subset,
                                  config.dims, labeled=True,
                                  frame_positions=config.frame_positions)
    return run_matrix_experiment(config, matrix, out_dir)


def _dump_json(obj: dict, path: Path) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def write_bundle(result: ExperimentResult, out_dir: str | Path) -> None:
    """Persist report.json, confusion.csv, scores.csv, config.json, model.json.

    confusion.csv is the 10x10 grid (header row/column of class labels) of
    the final validation confusion matrix; scores.csv holds one row per
    validation sample with its true label and the per-class decision scores,
    enough to plot ranking curves externally.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    report = result.report.to_json_dict()
    report["protocol"] = {
        "metrics_source": "validation-holdout",
        "fold_accuracies_source": (
            f"{result.config.folds}-fold cross-validation on the train+test pool"
        ),
        "cv_overall_accuracy": result.cv_report.overall_accuracy,
    }
    _dump_json(report, out / "report.json")

    lines = ["true\\pred," + ",".join(str(c) for c in range(1, N_CLASSES + 1))]
    for c in range(1, N_CLASSES + 1):
        row = result.report.confusion[c - 1]
        lines.append(f"{c}," + ",".join(str(int(v)) for v in row))
    (out / "confusion.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    score_columns = np.zeros((result.validation_scores.shape[0], N_CLASSES))
    for j, label in enumerate(result.model.class_set):
        score_columns[:, int(label) - 1] = result.validation_scores[:, j]
    lines = ["true_label," + ",".join(f"score_{c}" for c in range(1, N_CLASSES + 1))]
    for truth, scores in zip(result.validation_truth, score_columns):
        lines.append(f"{truth}," + ",".join(f"{v:.9g}" for v in scores))
    (out / "scores.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    _dump_json(result.config.to_json_dict(), out / "config.json")
    _dump_json(
        {
            "classifier": result.model.to_json_dict(),
            "pca": None if result.pca_model is None else result.pca_model.to_json_dict(),
        },
        out / "model.json",
    )
