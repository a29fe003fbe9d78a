"""
graph.py
--------
Similarity-graph construction, graph Laplacians, connected components and
Ky Fan values.
"""

import logging
from typing import NamedTuple

import numpy as np
from scipy.sparse import csgraph, csr_matrix
from scipy.spatial.distance import cdist

from utils.errors import InvalidInputError
from utils.linalg import smallest_eigenpairs

logger = logging.getLogger(__name__)

DEFAULT_KNN = 20
DEFAULT_EDGE_EPS = 1e-8
ROW_SUM_TOL = 1e-8


class Components(NamedTuple):
    count: int
    labels: np.ndarray


def _square(S: np.ndarray, name: str = "matrix") -> np.ndarray:
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise InvalidInputError(f"{name} must be square, got shape {S.shape}")
    return S


def is_row_stochastic(S: np.ndarray, tol: float = ROW_SUM_TOL) -> bool:
    S = np.asarray(S, dtype=float)
    return bool(np.all(S >= 0) and np.allclose(S.sum(axis=1), 1.0, rtol=0.0, atol=tol))


def build_knn_similarity(X: np.ndarray, k: int = DEFAULT_KNN) -> np.ndarray:
    """
    Parameter-free k-nearest-neighbour similarity matrix.

    Row i puts weight (d_{i,k+1} - d_ij) / (k d_{i,k+1} - sum_{j' in kNN} d_ij')
    on each of its k nearest neighbours (squared Euclidean distance d) and
    zero elsewhere. When the denominator vanishes (duplicate points) or no
    (k+1)-th neighbour exists, the k neighbours get uniform weight 1/k.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise InvalidInputError(f"feature matrix must be 2-D, got shape {X.shape}")
    n = X.shape[0]
    if k < 1 or k >= n:
        raise InvalidInputError(f"need 1 <= k < N, got k={k} with N={n}")
    if not np.all(np.isfinite(X)):
        raise InvalidInputError("feature matrix has non-finite entries")

    dist = cdist(X, X, metric="sqeuclidean")
    np.fill_diagonal(dist, np.inf)
    n_sorted = min(k + 1, n - 1)
    order = np.argsort(dist, axis=1, kind="stable")[:, :n_sorted]
    sorted_dist = np.take_along_axis(dist, order, axis=1)

    S = np.zeros((n, n))
    rows = np.arange(n)[:, np.newaxis]
    neighbours = order[:, :k]
    uniform = np.full((n, k), 1.0 / k)
    if n_sorted <= k:
        S[rows, neighbours] = uniform
        return S

    d_next = sorted_dist[:, k : k + 1]
    d_knn = sorted_dist[:, :k]
    denom = k * d_next - d_knn.sum(axis=1, keepdims=True)
    degenerate = denom[:, 0] <= np.finfo(float).eps * d_next[:, 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        weights = (d_next - d_knn) / denom
    weights[degenerate] = uniform[degenerate]
    if np.any(degenerate):
        logger.debug("%d row(s) fell back to uniform kNN weights", int(degenerate.sum()))
    S[rows, neighbours] = weights
    return S


def laplacian(S: np.ndarray) -> np.ndarray:
    """L = D - (S^T + S)/2 with D_ii = sum_j (s_ij + s_ji)/2."""
    S = _square(S, "similarity matrix")
    if np.any(S < 0):
        raise InvalidInputError("similarity matrix has negative entries")
    W = (S + S.T) / 2.0
    return np.diag(W.sum(axis=1)) - W


def connected_components(S: np.ndarray, edge_eps: float = DEFAULT_EDGE_EPS) -> Components:
    """
    Components of the undirected graph with an edge (i, j) whenever
    (s_ij + s_ji)/2 > edge_eps. Labels are numbered by first appearance.
    """
    S = _square(S, "similarity matrix")
    adjacency = csr_matrix((S + S.T) / 2.0 > edge_eps)
    count, labels = csgraph.connected_components(adjacency, directed=False)
    return Components(int(count), labels.astype(int))


def kyfan_value(L: np.ndarray, C: int) -> float:
    """Sum of the C smallest eigenvalues of L, i.e. min Tr(F^T L F) over F^T F = I."""
    values = smallest_eigenpairs(L, C).values
    return max(float(values.sum()), 0.0)


def to_indicator(labels: np.ndarray, n_clusters: int) -> np.ndarray:
    """1-of-C indicator matrix G with G[i, labels[i]] = 1."""
    labels = np.asarray(labels, dtype=int)
    if labels.size and (labels.min() < 0 or labels.max() >= n_clusters):
        raise InvalidInputError(f"labels must lie in [0, {n_clusters})")
    G = np.zeros((labels.size, n_clusters))
    G[np.arange(labels.size), labels] = 1.0
    return G


def from_indicator(G: np.ndarray) -> np.ndarray:
    G = np.asarray(G)
    if G.ndim != 2 or not np.all(G.sum(axis=1) == 1) or not np.all((G == 0) | (G == 1)):
        raise InvalidInputError("indicator matrix must have exactly one 1 per row")
    return np.argmax(G, axis=1)
