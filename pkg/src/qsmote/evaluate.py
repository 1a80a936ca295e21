"""KNN scoring, binary classification metrics, and the experiment grid.

Everything is self-contained: brute-force nearest neighbours, a
trapezoidal ROC-AUC (with a pairwise cross-check), and step-interpolated
average precision.
"""

from dataclasses import dataclass

import numpy as np

from . import aol, pipeline
from .errors import ParameterError


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self):
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class MetricsReport:
    confusion: ConfusionMatrix
    accuracy: float
    precision: float          # None when undefined
    recall: float
    f1: float
    roc_auc: float
    pr_auc: float
    roc_curve: np.ndarray     # (fpr, tpr) points
    pr_curve: np.ndarray      # (recall, precision) points


def knn_predict(train_X, train_y, test_X, k=5, train_ids=None):
    """Fraction of the k nearest training rows that are positive.

    Distance ties break toward the lower row id, so scores are
    deterministic under any input permutation.
    """
    train_X = np.asarray(train_X, dtype=float)
    train_y = np.asarray(train_y)
    test_X = np.atleast_2d(np.asarray(test_X, dtype=float))
    if train_X.shape[0] == 0:
        raise ParameterError("empty training set")
    if not 1 <= k <= train_X.shape[0]:
        raise ParameterError(f"need 1 <= k <= {train_X.shape[0]}, got {k}")
    if train_ids is None:
        train_ids = np.arange(train_X.shape[0])
    scores = np.empty(test_X.shape[0])
    for i, x in enumerate(test_X):
        dist = np.linalg.norm(train_X - x, axis=1)
        order = np.lexsort((train_ids, dist))[:k]
        scores[i] = float(np.mean(train_y[order] == 1))
    return scores


def _roc_points(scores, labels):
    order = np.argsort(-scores, kind="stable")
    s, y = scores[order], labels[order]
    pos = int((labels == 1).sum())
    neg = len(labels) - pos
    tps = np.cumsum(y == 1)
    fps = np.cumsum(y == 0)
    # collapse ties: keep the last point of each distinct score
    last = np.r_[np.nonzero(np.diff(s))[0], len(s) - 1]
    pts = [(0.0, 0.0)]
    for i in last:
        pts.append((fps[i] / neg if neg else 0.0, tps[i] / pos if pos else 0.0))
    return np.array(pts), pos, neg


def roc_auc_trapezoidal(scores, labels):
    pts, pos, neg = _roc_points(np.asarray(scores, float), np.asarray(labels))
    if pos == 0 or neg == 0:
        return None, pts
    trapezoid = getattr(np, "trapezoid", np.trapz)
    return float(trapezoid(pts[:, 1], pts[:, 0])), pts


def roc_auc_pairwise(scores, labels):
    """P(random positive outranks random negative), ties counted 1/2."""
    scores = np.asarray(scores, float)
    labels = np.asarray(labels)
    p = scores[labels == 1]
    n = scores[labels == 0]
    if p.size == 0 or n.size == 0:
        return None
    diff = p[:, None] - n[None, :]
    return float(((diff > 0).sum() + 0.5 * (diff == 0).sum()) / (p.size * n.size))


def average_precision(scores, labels):
    """Step-interpolated PR-AUC; None when there are no positives."""
    scores = np.asarray(scores, float)
    labels = np.asarray(labels)
    pos = int((labels == 1).sum())
    if pos == 0:
        return None, np.empty((0, 2))
    order = np.argsort(-scores, kind="stable")
    s, y = scores[order], labels[order]
    tps = np.cumsum(y == 1)
    ranks = np.arange(1, len(y) + 1)
    last = np.r_[np.nonzero(np.diff(s))[0], len(s) - 1]
    ap = 0.0
    prev_tp = 0
    curve = []
    for i in last:
        precision = tps[i] / ranks[i]
        recall = tps[i] / pos
        ap += (tps[i] - prev_tp) / pos * precision
        curve.append((recall, precision))
        prev_tp = tps[i]
    return float(ap), np.array(curve)


def compute_metrics(scores, labels, threshold=0.5):
    """Confusion matrix at the threshold plus ranking metrics.

    Undefined quantities (no positive labels, empty predicted-positive
    set) are reported as None rather than zero.
    """
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    if scores.shape != labels.shape:
        raise ParameterError("scores and labels must align")
    pred = scores >= threshold
    pos = labels == 1
    cm = ConfusionMatrix(
        tp=int((pred & pos).sum()),
        fp=int((pred & ~pos).sum()),
        fn=int((~pred & pos).sum()),
        tn=int((~pred & ~pos).sum()),
    )
    accuracy = (cm.tp + cm.tn) / cm.total if cm.total else None
    precision = cm.tp / (cm.tp + cm.fp) if (cm.tp + cm.fp) else None
    recall = cm.tp / (cm.tp + cm.fn) if (cm.tp + cm.fn) else None
    if precision is not None and recall is not None and (precision + recall) > 0:
        f1 = 2 * precision * recall / (precision + recall)
    elif precision is not None and recall is not None:
        f1 = 0.0
    else:
        f1 = None
    roc_auc, roc_pts = roc_auc_trapezoidal(scores, labels)
    pr_auc, pr_pts = average_precision(scores, labels)
    return MetricsReport(
        confusion=cm,
        accuracy=accuracy,
        precision=precision,
        recall=recall,
        f1=f1,
        roc_auc=roc_auc,
        pr_auc=pr_auc,
        roc_curve=roc_pts,
        pr_curve=pr_pts,
    )


def stratified_split(y, test_fraction, seed):
    """Deterministic per-class shuffle split; returns (train_idx, test_idx)."""
    if not 0 < test_fraction < 1:
        raise ParameterError(f"test fraction must be in (0, 1), got {test_fraction}")
    y = np.asarray(y)
    rng = np.random.default_rng([seed, 0x5B117])
    train, test = [], []
    for label in np.unique(y):
        idx = np.nonzero(y == label)[0]
        idx = rng.permutation(idx)
        n_test = max(1, int(round(len(idx) * test_fraction)))
        test.append(idx[:n_test])
        train.append(idx[n_test:])
    return np.sort(np.concatenate(train)), np.sort(np.concatenate(test))


@dataclass
class ExperimentRow:
    target_percent: float      # None for the baseline row
    aol: bool
    accuracy_train: float
    accuracy_test: float
    f1: float
    pr_auc: float
    roc_auc: float


def _augment_train(X, y, config, use_aol, minority_label, row_ids=None):
    result = pipeline.run_smote(X, y, config, minority_label=minority_label, row_ids=row_ids)
    records = list(result.synthetic)
    if use_aol:
        src_feats = list(X[y == minority_label]) + [r.features for r in records]
        src_dists = np.r_[result.angular_distances, [r.angular_distance for r in records]]
        src_ids = np.r_[result.minority_row_ids, [r.source_row_id for r in records]]
        _, low, high = aol.detect_outliers(src_dists, config.num_bins)
        for table in (low, high):
            records += aol.boost_outliers(table, src_feats, src_dists, src_ids, config)
    if not records:
        return X, y, result
    aug_X = np.vstack([X] + [r.features for r in records])
    aug_y = np.r_[y, np.full(len(records), minority_label, dtype=y.dtype)]
    return aug_X, aug_y, result


def run_experiment(
    X,
    y,
    grid,
    aol_flags=(False, True),
    test_fraction=0.2,
    seed=0,
    k=5,
    base_config=None,
    minority_label=1,
):
    """Augment the training split only and score each grid point.

    Emits one baseline row plus one row per (target percent, aol flag).
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    train_idx, test_idx = stratified_split(y, test_fraction, seed)
    X_tr, y_tr = X[train_idx], y[train_idx]
    X_te, y_te = X[test_idx], y[test_idx]

    def score_row(target, use_aol, train_X, train_y):
        test_scores = knn_predict(train_X, train_y, X_te, k=k)
        train_scores = knn_predict(train_X, train_y, train_X, k=k)
        m_test = compute_metrics(test_scores, (y_te == minority_label).astype(int))
        m_train = compute_metrics(train_scores, (train_y == minority_label).astype(int))
        return ExperimentRow(
            target_percent=target,
            aol=use_aol,
            accuracy_train=m_train.accuracy,
            accuracy_test=m_test.accuracy,
            f1=m_test.f1,
            pr_auc=m_test.pr_auc,
            roc_auc=m_test.roc_auc,
        )

    rows = [score_row(None, False, X_tr, y_tr)]
    for target in grid:
        for use_aol in aol_flags:
            cfg = pipeline.SmoteConfig(
                target_minority_percent=target,
                **(
                    {
                        f: getattr(base_config, f)
                        for f in (
                            "split_factor",
                            "shots",
                            "seed",
                            "rescale",
                            "estimator",
                            "num_bins",
                            "boost_angle_multiplier",
                            "centroid_scope",
                        )
                    }
                    if base_config
                    else {"seed": seed}
                ),
            )
            aug_X, aug_y, _ = _augment_train(
                X_tr, y_tr, cfg, use_aol, minority_label, row_ids=train_idx
            )
            rows.append(score_row(target, use_aol, aug_X, aug_y))
    return rows
