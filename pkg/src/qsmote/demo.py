"""Deterministic synthetic imbalanced dataset for tests and demos.

The majority class is a dense Gaussian core in positive feature space;
the minority class is scattered thinly on a spherical shell around it.
A plain KNN under-predicts the sparse minority until its region is
densified, which is the regime this library is meant to improve.
"""

import csv

import numpy as np


def make_imbalanced_dataset(
    n_rows=2000,
    minority_fraction=0.10,
    n_features=8,
    seed=7,
    shell_radius=(3.2, 4.8),
):
    """Returns (X, y) with y == 1 on the minority rows."""
    rng = np.random.default_rng([seed, 0xDA7A])
    n_min = int(round(n_rows * minority_fraction))
    n_maj = n_rows - n_min

    base = np.full(n_features, 5.0)
    X_maj = rng.normal(base, 1.0, size=(n_maj, n_features))

    dirs = rng.normal(size=(n_min, n_features))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    radii = rng.uniform(shell_radius[0], shell_radius[1], size=(n_min, 1))
    X_min = base + dirs * radii

    X = np.clip(np.vstack([X_maj, X_min]), 0.05, None)
    y = np.r_[np.zeros(n_maj, dtype=int), np.ones(n_min, dtype=int)]

    order = rng.permutation(n_rows)
    return X[order], y[order]


def write_dataset_csv(X, y, path, target_name="label"):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow([f"f{i}" for i in range(X.shape[1])] + [target_name])
        for row, label in zip(X, y):
            w.writerow([repr(float(v)) for v in row] + [int(label)])
