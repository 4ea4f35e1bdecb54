#!/usr/bin/env python3
"""Reduce posture features with PCA selected by explained variance.

The model keeps the smallest leading set of principal components whose
eigenvalues cover the requested share (95% by default) of the total
variance. On posture features most variance concentrates in a few modes,
so the 81-dimensional space shrinks substantially.
"""

import numpy as np

from skelhar import (
    JointSubset,
    Modality,
    SynthSpec,
    build_feature_matrix,
    generate_synthetic,
    pca_fit,
    pca_transform,
)

manifest = generate_synthetic(SynthSpec(n_participants=6, seed=11))
matrix = build_feature_matrix(manifest, Modality.COORDINATES, JointSubset.c28(), 3)
print(f"feature matrix: {matrix.n_rows} x {matrix.n_features}")

model = pca_fit(matrix.rows, variance_threshold=0.95)
share = np.cumsum(model.eigenvalues) / model.eigenvalues.sum()
print(f"\nretained components at 95% explained variance: {model.retained_k}")
print("leading eigenvalue shares:")
for i in range(min(10, len(share))):
    marker = " <- threshold reached" if i + 1 == model.retained_k else ""
    print(f"  k={i + 1:2d}: cumulative {share[i]:.4f}{marker}")

scores = pca_transform(model, matrix.rows)
print(f"\ntransformed matrix: {scores.shape[0]} x {scores.shape[1]}")

recon = scores @ model.components[:model.retained_k] + model.mean
err = np.linalg.norm(matrix.rows - recon) / np.linalg.norm(matrix.rows - model.mean)
print(f"relative reconstruction residual at k={model.retained_k}: {err:.4f}")

for threshold in (0.80, 0.90, 0.99):
    print(f"threshold {threshold:.2f} -> k = {pca_fit(matrix.rows, threshold).retained_k}")
