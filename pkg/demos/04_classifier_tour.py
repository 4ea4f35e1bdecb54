#!/usr/bin/env python3
"""Train each of the six classifier families on the same posture features.

All six share one contract: train(spec, labeled matrix) -> model with
predict and per-class decision_scores. Training is deterministic given the
spec's seed, and every tie anywhere resolves to the smallest class label.
"""

import time

import numpy as np

from skelhar import (
    BaggedTreesSpec,
    CubicSvmSpec,
    FineKnnSpec,
    FineTreeSpec,
    JointSubset,
    LinearDiscriminantSpec,
    MlpSpec,
    Modality,
    SplitPlan,
    build_feature_matrix,
    generate_synthetic,
    split,
    train,
    SynthSpec,
)

manifest = generate_synthetic(SynthSpec(n_participants=4, seed=23))
matrix = build_feature_matrix(manifest, Modality.COORDINATES, JointSubset.c18(), 3)
indices = split(matrix, SplitPlan(seed=23))
train_matrix = matrix.take(indices.train)
held_x = matrix.rows[indices.validation]
held_y = matrix.labels[indices.validation]
print(f"train rows: {train_matrix.n_rows}, held-out rows: {len(held_y)}, "
      f"features: {matrix.n_features}")

specs = [
    ("fine tree", FineTreeSpec(seed=23)),
    ("bagged trees", BaggedTreesSpec(n_trees=15, seed=23)),
    ("fine k-NN", FineKnnSpec(k=1, seed=23)),
    ("cubic SVM", CubicSvmSpec(seed=23)),
    ("linear discriminant", LinearDiscriminantSpec(seed=23)),
    ("neural net (w=175)", MlpSpec(hidden_width=175, epochs=30,
                                   learning_rate=0.05, seed=23)),
]

print(f"\n{'classifier':22s} {'accuracy':>9s} {'train time':>11s}")
for name, spec in specs:
    started = time.time()
    model = train(spec, train_matrix)
    elapsed = time.time() - started
    accuracy = float(np.mean(model.predict(held_x) == held_y))
    print(f"{name:22s} {accuracy:9.3f} {elapsed:10.2f}s")

# decision scores support ranking analyses beyond hard labels
knn = train(FineKnnSpec(k=5, seed=23), train_matrix)
scores = knn.decision_scores(held_x[:3])
print("\n5-NN vote shares for the first three held-out rows "
      f"(classes {knn.class_set.tolist()}):")
for row, truth in zip(scores, held_y[:3]):
    shares = ", ".join(f"{v:.1f}" for v in row)
    print(f"  true={truth}: [{shares}]")
