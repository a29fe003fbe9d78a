"""
metrics.py
----------
External clustering indices: best-permutation accuracy (ACC), normalized
mutual information (NMI, arithmetic-mean normalization) and purity.
"""

import logging
from typing import NamedTuple, Tuple

import numpy as np
from sklearn.metrics import normalized_mutual_info_score
from sklearn.metrics.cluster import contingency_matrix

from utils.errors import InvalidInputError
from utils.linalg import optimal_assignment

logger = logging.getLogger(__name__)


class ClusteringScores(NamedTuple):
    acc: float
    nmi: float
    purity: float

    @property
    def total(self) -> float:
        """Sum of the three indices, used to rank grid points."""
        return self.acc + self.nmi + self.purity


def _check_pair(pred, truth) -> Tuple[np.ndarray, np.ndarray]:
    pred = np.asarray(pred).ravel()
    truth = np.asarray(truth).ravel()
    if pred.size != truth.size:
        raise InvalidInputError(
            f"label vectors differ in length: {pred.size} predicted vs {truth.size} true"
        )
    if pred.size == 0:
        raise InvalidInputError("label vectors are empty")
    return pred, truth


def acc(pred, truth) -> float:
    """
    Fraction of samples matched under the best one-to-one relabelling of
    predicted clusters onto true classes.
    """
    pred, truth = _check_pair(pred, truth)
    table = contingency_matrix(truth, pred)
    size = max(table.shape)
    padded = np.zeros((size, size), dtype=table.dtype)
    padded[: table.shape[0], : table.shape[1]] = table
    perm = optimal_assignment(-padded)
    matched = padded[np.arange(size), perm].sum()
    return float(matched) / pred.size


def nmi(pred, truth) -> float:
    pred, truth = _check_pair(pred, truth)
    return float(normalized_mutual_info_score(truth, pred, average_method="arithmetic"))


def purity(pred, truth) -> float:
    pred, truth = _check_pair(pred, truth)
    table = contingency_matrix(truth, pred)
    return float(table.max(axis=0).sum()) / pred.size


def evaluate(pred, truth) -> ClusteringScores:
    return ClusteringScores(acc(pred, truth), nmi(pred, truth), purity(pred, truth))
