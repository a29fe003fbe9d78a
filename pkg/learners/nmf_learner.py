"""
nmf_learner.py
--------------
k-means-embedded NMF learner, min ||X^T - G F^T||_F^2 with G a 1-of-C
indicator, as a pluggable learner for the alternating weight optimizer
(NMF-IW and its NR/ER/EF/equal counterparts).

Feature views are N x d_v arrays, i.e. X^(v)^T with one sample per row.
"""

import logging
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence

import numpy as np

from learners.base_learner import BaseLearner
from optimizer.alternating_optimizer import AlternatingConfig, AlternatingResult, run_alternating
from optimizer.weight_schemes import WeightScheme
from utils.errors import InvalidInputError
from utils.graph import to_indicator

logger = logging.getLogger(__name__)


@dataclass
class NmfConfig:
    n_clusters: int
    restarts: int = 10
    max_iter: int = 100
    tol: float = 1e-10
    seed: Optional[int] = None

    def __post_init__(self) -> None:
        if self.n_clusters < 2:
            raise InvalidInputError(f"NMF clustering needs C >= 2, got {self.n_clusters}")
        if self.restarts < 1:
            raise InvalidInputError(f"restarts must be positive, got {self.restarts}")


class NmfState(NamedTuple):
    labels: np.ndarray
    centroids: List[np.ndarray]

    @property
    def G(self) -> np.ndarray:
        return to_indicator(self.labels, self.centroids[0].shape[0])


class NmfResult(NamedTuple):
    G: np.ndarray
    labels: np.ndarray
    centroids: List[np.ndarray]
    alpha: np.ndarray
    trace: List[float]
    run: AlternatingResult


# ----------------------------------------------------------------------
def update_centroids(
    views: Sequence[np.ndarray], labels: np.ndarray, n_clusters: int
) -> List[np.ndarray]:
    """
    F-step: F^(v) = X^(v) G (G^T G)^-1, returned as C x d_v arrays whose
    rows are per-cluster means. Every cluster must be non-empty.
    """
    G = to_indicator(labels, n_clusters)
    sizes = G.sum(axis=0)
    if np.any(sizes == 0):
        raise InvalidInputError(f"empty cluster(s) {np.flatnonzero(sizes == 0).tolist()}")
    return [(G.T @ view) / sizes[:, np.newaxis] for view in views]


def assignment_costs(
    views: Sequence[np.ndarray], centroids: Sequence[np.ndarray], alpha: np.ndarray
) -> np.ndarray:
    """N x C matrix of sum_v alpha_v ||x_i^(v) - f_c^(v)||^2."""
    costs = np.zeros((views[0].shape[0], centroids[0].shape[0]))
    for weight, view, F in zip(alpha, views, centroids):
        sq = (
            np.sum(view**2, axis=1)[:, np.newaxis]
            - 2.0 * view @ F.T
            + np.sum(F**2, axis=1)[np.newaxis, :]
        )
        costs += weight * np.maximum(sq, 0.0)
    return costs


class NmfLearner(BaseLearner):
    """Alternates an exact F-step (cluster means) and an exhaustive row-wise G-step."""

    view_kind = "features"

    def __init__(self, config: NmfConfig, rng: Optional[np.random.Generator] = None) -> None:
        super().__init__(config.n_clusters)
        self.config = config
        self.rng = rng if rng is not None else np.random.default_rng(config.seed)

    # ------------------------------------------------------------------
    def solve_weighted(
        self,
        views: Sequence[np.ndarray],
        alpha: np.ndarray,
        warm_start: Optional[NmfState] = None,
    ) -> NmfState:
        arrays = self.check_views(views)
        w = self.normalized_alpha(alpha, len(arrays))
        C = self.n_clusters

        if warm_start is not None:
            labels = warm_start.labels.copy()
        else:
            labels = self.rng.integers(0, C, size=arrays[0].shape[0])

        previous = np.inf
        for iteration in range(self.config.max_iter):
            labels = self._repair_empty(arrays, labels, w)
            centroids = update_centroids(arrays, labels, C)
            costs = assignment_costs(arrays, centroids, w)
            # argmin takes the lowest index on ties
            new_labels = np.argmin(costs, axis=1)
            objective = float(costs[np.arange(costs.shape[0]), new_labels].sum())
            unchanged = np.array_equal(new_labels, labels)
            labels = new_labels
            stalled = np.isfinite(previous) and previous - objective <= self.config.tol * previous
            if unchanged or stalled:
                break
            previous = objective

        labels = self._repair_empty(arrays, labels, w)
        return NmfState(labels, update_centroids(arrays, labels, C))

    def per_view_losses(self, state: NmfState, views: Sequence[np.ndarray]) -> np.ndarray:
        G = state.G
        return np.array(
            [np.sum(np.square(np.asarray(view, dtype=float) - G @ F)) for view, F in zip(views, state.centroids)]
        )

    def labels(self, state: NmfState) -> np.ndarray:
        return state.labels

    # ------------------------------------------------------------------
    def _repair_empty(self, views, labels: np.ndarray, w: np.ndarray) -> np.ndarray:
        """
        Move the point farthest from the centroid of the largest cluster into
        each empty cluster, so that G^T G stays invertible.
        """
        C = self.n_clusters
        labels = labels.copy()
        sizes = np.bincount(labels, minlength=C)
        for empty in np.flatnonzero(sizes == 0):
            largest = int(np.argmax(sizes))
            members = np.flatnonzero(labels == largest)
            distance = np.zeros(members.size)
            for weight, view in zip(w, views):
                centre = view[members].mean(axis=0)
                distance += weight * np.sum(np.square(view[members] - centre), axis=1)
            moved = members[int(np.argmax(distance))]
            labels[moved] = empty
            sizes[largest] -= 1
            sizes[empty] += 1
            self.logger.warning(
                "Cluster %d was empty; moved sample %d out of cluster %d", empty, moved, largest
            )
        return labels


# ----------------------------------------------------------------------
def nmf_multiview(
    views: Sequence[np.ndarray],
    scheme: WeightScheme,
    config: NmfConfig,
    alternating: Optional[AlternatingConfig] = None,
) -> NmfResult:
    """
    Best of ``config.restarts`` random initialisations, ranked by the final
    scheme objective.
    """
    seeds = np.random.SeedSequence(config.seed).spawn(config.restarts)
    best: Optional[AlternatingResult] = None
    for restart, seed in enumerate(seeds):
        learner = NmfLearner(config, rng=np.random.default_rng(seed))
        run = run_alternating(learner, views, scheme, alternating)
        logger.debug("restart %d: final objective %.10g", restart, run.trace[-1])
        if best is None or run.trace[-1] < best.trace[-1]:
            best = run
    state: NmfState = best.state
    return NmfResult(
        G=state.G,
        labels=state.labels,
        centroids=state.centroids,
        alpha=best.normalized_weights,
        trace=best.trace,
        run=best,
    )


def nmf_iw(
    views: Sequence[np.ndarray],
    n_clusters: int,
    p: float = 1.0,
    restarts: int = 10,
    max_iter: int = 100,
    seed: Optional[int] = None,
    alternating: Optional[AlternatingConfig] = None,
) -> NmfResult:
    """NMF-IW: min sum_v ||X^(v)^T - G F^(v)^T||_F^p over indicators G and centroids F."""
    config = NmfConfig(n_clusters, restarts=restarts, max_iter=max_iter, seed=seed)
    return nmf_multiview(views, WeightScheme.iw(p), config, alternating)
