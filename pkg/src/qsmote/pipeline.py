"""Oversampling orchestration.

Computes the data centroid, the synthetic-record budget needed to hit a
target minority percentage, and runs the per-loop generation with a one
degree angle increment per pass.
"""

from dataclasses import dataclass, field

import numpy as np

from . import qdist, synth
from .errors import ParameterError

DEGREE = 0.0174533  # one degree in radians, as the generation loop uses it


@dataclass
class SmoteConfig:
    target_minority_percent: float
    split_factor: float = 10.0
    shots: int = 0
    seed: int = 0
    rescale: bool = True
    estimator: str = "standard"
    num_bins: int = 5
    boost_angle_multiplier: float = 1.5
    centroid_scope: str = "all"  # all | minority


@dataclass
class AugmentationReport:
    original_total: int
    minority_count: int
    target_percent: float
    synthetic_generated: int
    achieved_percent: float
    full_loops: int
    remainder: int


@dataclass
class SmoteResult:
    synthetic: list                      # SyntheticRecord, generation order
    report: AugmentationReport
    centroid: np.ndarray
    minority_row_ids: np.ndarray
    angular_distances: np.ndarray        # one per minority row, same order
    config: SmoteConfig = field(repr=False, default=None)


def centroid(features, labels=None, scope="all", minority_label=1):
    """Column-wise mean over all rows or the minority rows only."""
    X = np.asarray(features, dtype=float)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ParameterError("centroid needs a nonempty 2-D table")
    if scope == "all":
        return X.mean(axis=0)
    if scope == "minority":
        if labels is None:
            raise ParameterError("minority-scope centroid needs labels")
        mask = np.asarray(labels) == minority_label
        if not mask.any():
            raise ParameterError("no minority rows for centroid")
        return X[mask].mean(axis=0)
    raise ParameterError(f"unknown centroid scope {scope!r}")


def target_counts(total, minority, target_percent):
    """Synthetic-record budget and loop split for a target minority share.

    S solves (minority + S) / (total + S) = target, rounded half-up.
    A target at or below the current share yields S = 0.
    """
    if not 0 < minority < total:
        raise ParameterError(f"need 0 < minority < total, got {minority}/{total}")
    if not 0 < target_percent < 100:
        raise ParameterError(f"target percent must be in (0, 100), got {target_percent}")
    t = target_percent / 100.0
    raw = (t * total - minority) / (1.0 - t)
    s = int(np.floor(raw + 0.5))  # round half-up
    if s < 0:
        raise ParameterError(
            f"target {target_percent}% is below the current minority share "
            f"({100.0 * minority / total:.2f}%)"
        )
    target_minority_count = minority + s
    return target_minority_count, s, s // minority, s % minority


def run_smote(features, labels, config, minority_label=1, row_ids=None):
    """Generate synthetic minority records up to the configured share.

    Angular distances are computed once per minority row and reused
    across loops; loop k applies an angle increment of k degrees, and a
    final partial loop samples the remainder without replacement.
    """
    X = np.asarray(features, dtype=float)
    y = np.asarray(labels)
    if X.shape[0] != y.shape[0]:
        raise ParameterError("features and labels disagree on row count")
    if row_ids is None:
        row_ids = np.arange(X.shape[0])
    row_ids = np.asarray(row_ids)

    minority_mask = y == minority_label
    m = int(minority_mask.sum())
    n_total = X.shape[0]
    center = centroid(X, y, scope=config.centroid_scope, minority_label=minority_label)

    _, s, full_loops, remainder = target_counts(n_total, m, config.target_minority_percent)

    minority_X = X[minority_mask]
    minority_ids = row_ids[minority_mask]
    distances = qdist.angular_distance_table(
        minority_X, center, shots=config.shots, seed=config.seed, estimator=config.estimator
    )

    synthetic = []
    loops = [(k, np.arange(m)) for k in range(1, full_loops + 1)]
    if remainder > 0:
        pick_rng = np.random.default_rng([config.seed, 0x5E1EC7])
        picked = np.sort(pick_rng.choice(m, size=remainder, replace=False))
        loops.append((full_loops + 1, picked))
    for k, rows in loops:
        increment = k * DEGREE
        for i in rows:
            rec_rng = np.random.default_rng([config.seed, int(minority_ids[i]), k])
            synthetic.append(
                synth.create_syn_data(
                    minority_X[i],
                    distances[i],
                    increment,
                    config.split_factor,
                    rec_rng,
                    source_row_id=int(minority_ids[i]),
                    rescale=config.rescale,
                )
            )

    achieved = 100.0 * (m + s) / (n_total + s)
    report = AugmentationReport(
        original_total=n_total,
        minority_count=m,
        target_percent=config.target_minority_percent,
        synthetic_generated=s,
        achieved_percent=achieved,
        full_loops=full_loops,
        remainder=remainder,
    )
    return SmoteResult(
        synthetic=synthetic,
        report=report,
        centroid=center,
        minority_row_ids=minority_ids,
        angular_distances=distances,
        config=config,
    )
