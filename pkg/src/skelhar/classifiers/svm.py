"""Cubic-kernel support vector machine trained by sequential minimal optimization.

Binary subproblems follow Platt's SMO with a full error cache, except that
the heuristic random starting points are replaced by fixed index order, so
training is deterministic. Multiclass uses one-vs-one voting over all label
pairs. Features are z-scored inside the model (fitted on the training set)
to keep the polynomial kernel numerically tame.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import CubicSvmSpec, TrainedModel, validate_training_data

_EPS = 1e-12
# heavily overlapping classes need thousands of (cheap) non-bound sweeps;
# the cap only guards against genuine pathologies
_MAX_SWEEPS = 100_000


def cubic_kernel(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """K(x, y) = (1 + x.y)^3, evaluated blockwise."""
    return (1.0 + a @ b.T) ** 3


def _smo(k: np.ndarray, y: np.ndarray, c: float, tol: float) -> tuple[np.ndarray, float]:
    """Solve the dual on a precomputed Gram matrix; returns (alphas, bias).

    The bias convention is f(x) = sum_i alpha_i y_i K(x_i, x) + b.
    """
    n = len(y)
    alpha = np.zeros(n)
    b = 0.0
    # errors[i] = f(x_i) - y_i, kept exact after every step
    errors = -y.astype(np.float64)

    def take_step(i1: int, i2: int) -> bool:
        nonlocal b
        if i1 == i2:
            return False
        a1, a2 = alpha[i1], alpha[i2]
        y1, y2 = y[i1], y[i2]
        e1, e2 = errors[i1], errors[i2]
        s = y1 * y2
        if s < 0:
            lo, hi = max(0.0, a2 - a1), min(c, c + a2 - a1)
        else:
            lo, hi = max(0.0, a2 + a1 - c), min(c, a2 + a1)
        if lo >= hi:
            return False
        k11, k12, k22 = k[i1, i1], k[i1, i2], k[i2, i2]
        eta = k11 + k22 - 2.0 * k12
        if eta > 0:
            a2_new = a2 + y2 * (e1 - e2) / eta
            a2_new = min(max(a2_new, lo), hi)
        else:
            # flat direction: evaluate the objective at both clip ends
            g1 = e1 + y1 - b  # sum_j alpha_j y_j K_1j
            g2 = e2 + y2 - b
            f1 = y1 * g1 - a1 * k11 - s * a2 * k12
            f2 = y2 * g2 - s * a1 * k12 - a2 * k22
            l1 = a1 + s * (a2 - lo)
            h1 = a1 + s * (a2 - hi)
            obj_lo = (l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11
                      + 0.5 * lo * lo * k22 + s * lo * l1 * k12)
            obj_hi = (h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11
                      + 0.5 * hi * hi * k22 + s * hi * h1 * k12)
            if obj_lo < obj_hi - _EPS:
                a2_new = lo
            elif obj_lo > obj_hi + _EPS:
                a2_new = hi
            else:
                return False
        if abs(a2_new - a2) < _EPS * (a2_new + a2 + _EPS):
            return False
        a1_new = a1 + s * (a2 - a2_new)

        # choose b so the updated free multiplier sits exactly on its margin
        b1 = b - e1 - y1 * (a1_new - a1) * k11 - y2 * (a2_new - a2) * k12
        b2 = b - e2 - y1 * (a1_new - a1) * k12 - y2 * (a2_new - a2) * k22
        if 0 < a1_new < c:
            b_new = b1
        elif 0 < a2_new < c:
            b_new = b2
        else:
            b_new = (b1 + b2) / 2.0

        errors[:] += (y1 * (a1_new - a1) * k[i1]
                      + y2 * (a2_new - a2) * k[i2]
                      + (b_new - b))
        alpha[i1], alpha[i2] = a1_new, a2_new
        b = b_new
        return True

    def examine(i2: int) -> bool:
        a2, y2, e2 = alpha[i2], y[i2], errors[i2]
        r2 = e2 * y2
        if not ((r2 < -tol and a2 < c) or (r2 > tol and a2 > 0)):
            return False
        non_bound = np.nonzero((alpha > 0) & (alpha < c))[0]
        if len(non_bound) > 1:
            i1 = int(non_bound[np.argmax(np.abs(errors[non_bound] - e2))])
            if take_step(i1, i2):
                return True
        for i1 in non_bound:
            if take_step(int(i1), i2):
                return True
        for i1 in range(n):
            if take_step(i1, i2):
                return True
        return False

    examine_all = True
    sweeps = 0
    while sweeps < _MAX_SWEEPS:
        sweeps += 1
        if examine_all:
            changed = sum(examine(i) for i in range(n))
        else:
            candidates = np.nonzero((alpha > 0) & (alpha < c))[0]
            changed = sum(examine(int(i)) for i in candidates)
        if examine_all:
            if changed == 0:
                return alpha, b
            examine_all = False
        elif changed == 0:
            examine_all = True
    raise RuntimeError(f"SMO did not converge within {_MAX_SWEEPS} sweeps")


@dataclass
class BinarySvm:
    """One trained one-vs-one machine: +1 for pos_label, -1 for neg_label."""

    pos_label: int
    neg_label: int
    train_x: np.ndarray  # standardized rows of the two classes
    train_y: np.ndarray  # +1 / -1
    alphas: np.ndarray
    bias: float

    def decision(self, rows: np.ndarray) -> np.ndarray:
        return (self.alphas * self.train_y) @ cubic_kernel(self.train_x, rows) + self.bias

    def kkt_residuals(self, c: float) -> np.ndarray:
        """Per-training-point violation of the dual optimality conditions."""
        margin = self.train_y * self.decision(self.train_x)
        res = np.empty_like(margin)
        at_zero = self.alphas <= _EPS
        at_c = self.alphas >= c - _EPS
        free = ~(at_zero | at_c)
        res[at_zero] = np.maximum(0.0, 1.0 - margin[at_zero])
        res[at_c] = np.maximum(0.0, margin[at_c] - 1.0)
        res[free] = np.abs(margin[free] - 1.0)
        return res


class CubicSvmModel(TrainedModel):
    kind = "cubic_svm"

    def __init__(self, spec: CubicSvmSpec, machines: list[BinarySvm],
                 mean: np.ndarray, scale: np.ndarray, class_set: np.ndarray):
        super().__init__(spec, class_set)
        self.machines = machines
        self.mean = mean
        self.scale = scale

    def _votes_and_scores(self, rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        z = (rows - self.mean) / self.scale
        n_classes = len(self.class_set)
        votes = np.zeros((rows.shape[0], n_classes), dtype=np.int64)
        scores = np.zeros((rows.shape[0], n_classes))
        pos_of = {int(label): i for i, label in enumerate(self.class_set)}
        for m in self.machines:
            f = m.decision(z)
            a, b = pos_of[m.pos_label], pos_of[m.neg_label]
            votes[:, a] += f >= 0
            votes[:, b] += f < 0
            scores[:, a] += f
            scores[:, b] -= f
        return votes, scores

    def predict(self, rows: np.ndarray) -> np.ndarray:
        rows = self._check_rows(rows, len(self.mean))
        votes, scores = self._votes_and_scores(rows)
        out = np.empty(rows.shape[0], dtype=np.int64)
        for i in range(rows.shape[0]):
            top = np.nonzero(votes[i] == votes[i].max())[0]
            if len(top) > 1:
                # argmax picks the first maximum, i.e. the smallest label on a
                # score tie
                top = top[[int(np.argmax(scores[i, top]))]]
            out[i] = self.class_set[top[0]]
        return out

    def decision_scores(self, rows: np.ndarray) -> np.ndarray:
        """Summed pairwise decision values per class."""
        rows = self._check_rows(rows, len(self.mean))
        return self._votes_and_scores(rows)[1]

    def max_kkt_residual(self) -> float:
        return max(float(m.kkt_residuals(self.spec.c).max()) for m in self.machines)

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "spec": {"c": self.spec.c, "tolerance": self.spec.tolerance,
                     "seed": self.spec.seed},
            "class_set": self.class_set.tolist(),
            "mean": self.mean.tolist(),
            "scale": self.scale.tolist(),
            "machines": [
                {
                    "pos_label": m.pos_label,
                    "neg_label": m.neg_label,
                    "train_x": m.train_x.tolist(),
                    "train_y": m.train_y.tolist(),
                    "alphas": m.alphas.tolist(),
                    "bias": m.bias,
                }
                for m in self.machines
            ],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "CubicSvmModel":
        machines = [
            BinarySvm(
                int(m["pos_label"]),
                int(m["neg_label"]),
                np.asarray(m["train_x"], dtype=np.float64),
                np.asarray(m["train_y"], dtype=np.float64),
                np.asarray(m["alphas"], dtype=np.float64),
                float(m["bias"]),
            )
            for m in d["machines"]
        ]
        return cls(
            CubicSvmSpec(**d["spec"]),
            machines,
            np.asarray(d["mean"], dtype=np.float64),
            np.asarray(d["scale"], dtype=np.float64),
            np.asarray(d["class_set"], dtype=np.int64),
        )


def train_cubic_svm(spec: CubicSvmSpec, x: np.ndarray, y: np.ndarray) -> CubicSvmModel:
    x, y = validate_training_data(x, y)
    class_set = np.unique(y)
    mean = x.mean(axis=0)
    std = x.std(axis=0)
    scale = np.where(std > 0, std, 1.0)
    z = (x - mean) / scale

    machines = []
    for i, a in enumerate(class_set):
        for b in class_set[i + 1:]:
            mask = (y == a) | (y == b)
            xs = z[mask]
            ys = np.where(y[mask] == a, 1.0, -1.0)
            gram = cubic_kernel(xs, xs)
            alphas, bias = _smo(gram, ys, spec.c, spec.tolerance)
            machines.append(BinarySvm(int(a), int(b), xs, ys, alphas, bias))
    return CubicSvmModel(spec, machines, mean, scale, class_set)
