"""k-nearest-neighbor classifier (Euclidean, unweighted, k=1 by default)."""

from __future__ import annotations

import numpy as np

from .base import FineKnnSpec, TrainedModel, validate_training_data

_CHUNK = 512


class FineKnnModel(TrainedModel):
    """Stores the training set; prediction is an exact nearest-neighbor scan.

    Neighbor order is (squared distance, training index); among the k
    nearest, the majority label wins and vote ties resolve to the smallest
    label. Distance ties at the k-th position therefore admit the
    lower-index training row, deterministically.
    """

    kind = "fine_knn"

    def __init__(self, spec: FineKnnSpec, train_x: np.ndarray, train_y: np.ndarray,
                 class_set: np.ndarray):
        super().__init__(spec, class_set)
        self.train_x = train_x
        self.train_y = train_y

    def predict(self, rows: np.ndarray) -> np.ndarray:
        rows = self._check_rows(rows, self.train_x.shape[1])
        k = self.spec.k
        train_sq = np.einsum("ij,ij->i", self.train_x, self.train_x)
        label_idx = np.searchsorted(self.class_set, self.train_y)

        out = np.empty(rows.shape[0], dtype=np.int64)
        for start in range(0, rows.shape[0], _CHUNK):
            q = rows[start:start + _CHUNK]
            d2 = train_sq[None, :] - 2.0 * (q @ self.train_x.T)
            d2 += np.einsum("ij,ij->i", q, q)[:, None]
            if k == 1:
                nearest = np.argmin(d2, axis=1)  # first minimum = lowest index
                out[start:start + q.shape[0]] = self.train_y[nearest]
            else:
                order = np.argsort(d2, axis=1, kind="stable")[:, :k]
                for i in range(q.shape[0]):
                    votes = np.bincount(label_idx[order[i]], minlength=len(self.class_set))
                    out[start + i] = self.class_set[int(np.argmax(votes))]
        return out

    def decision_scores(self, rows: np.ndarray) -> np.ndarray:
        """Share of the k nearest neighbors per class."""
        rows = self._check_rows(rows, self.train_x.shape[1])
        k = self.spec.k
        train_sq = np.einsum("ij,ij->i", self.train_x, self.train_x)
        label_idx = np.searchsorted(self.class_set, self.train_y)
        scores = np.empty((rows.shape[0], len(self.class_set)))
        for start in range(0, rows.shape[0], _CHUNK):
            q = rows[start:start + _CHUNK]
            d2 = train_sq[None, :] - 2.0 * (q @ self.train_x.T)
            d2 += np.einsum("ij,ij->i", q, q)[:, None]
            order = np.argsort(d2, axis=1, kind="stable")[:, :k]
            for i in range(q.shape[0]):
                votes = np.bincount(label_idx[order[i]], minlength=len(self.class_set))
                scores[start + i] = votes / k
        return scores

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "spec": {"k": self.spec.k, "seed": self.spec.seed},
            "class_set": self.class_set.tolist(),
            "train_x": self.train_x.tolist(),
            "train_y": self.train_y.tolist(),
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "FineKnnModel":
        return cls(
            FineKnnSpec(**d["spec"]),
            np.asarray(d["train_x"], dtype=np.float64),
            np.asarray(d["train_y"], dtype=np.int64),
            np.asarray(d["class_set"], dtype=np.int64),
        )


def train_knn(spec: FineKnnSpec, x: np.ndarray, y: np.ndarray) -> FineKnnModel:
    x, y = validate_training_data(x, y)
    if spec.k > x.shape[0]:
        raise ValueError(f"k={spec.k} exceeds the {x.shape[0]} training rows")
    return FineKnnModel(spec, x, y, np.unique(y))
