"""
spectral_learner.py
-------------------
Spectral clustering (ratio cut or normalized cut) as a learner for the
alternating weight optimizer, giving SC-IW and its NR/ER/EF/equal
counterparts. The alternation runs on the continuous relaxation; k-means
rounding of the embedding happens once after convergence.
"""

import logging
from typing import List, NamedTuple, Optional, Sequence

import numpy as np
from scipy import linalg as sla
from sklearn.cluster import KMeans

from learners.base_learner import BaseLearner
from optimizer.alternating_optimizer import AlternatingConfig, AlternatingResult, run_alternating
from optimizer.weight_schemes import WeightScheme
from utils.errors import InvalidInputError, SolverError
from utils.graph import connected_components, laplacian
from utils.linalg import smallest_eigenpairs

logger = logging.getLogger(__name__)

CUTS = ("ratio", "normalized")
DEGREE_RIDGE = 1e-12


class SpectralResult(NamedTuple):
    labels: np.ndarray
    alpha: np.ndarray
    embedding: np.ndarray
    trace: List[float]
    run: AlternatingResult


class SpectralLearner(BaseLearner):
    """
    Weighted spectral embedding: G holds the C smallest eigenvectors of
    sum_v alpha_v L_v (ratio cut, G^T G = I) or of the generalized problem
    L g = mu D g with D the degree matrix of sum_v alpha_v W_v
    (normalized cut, G^T D G = I). Phi_v(G) = Tr(G^T L_v G).
    """

    view_kind = "graphs"

    def __init__(
        self,
        n_clusters: int,
        cut: str = "ratio",
        kmeans_restarts: int = 10,
        seed: Optional[int] = None,
    ) -> None:
        super().__init__(n_clusters)
        if cut not in CUTS:
            raise InvalidInputError(f"cut must be one of {CUTS}, got '{cut}'")
        self.cut = cut
        self.kmeans_restarts = kmeans_restarts
        self.seed = seed

    # ------------------------------------------------------------------
    def solve_weighted(
        self,
        views: Sequence[np.ndarray],
        alpha: np.ndarray,
        warm_start: Optional[np.ndarray] = None,
    ) -> np.ndarray:
        arrays = self.check_views(views)
        laplacians = [laplacian(view) for view in arrays]
        w = self.normalized_alpha(alpha, len(arrays))
        L = np.tensordot(w, np.stack(laplacians), axes=1)

        if self.cut == "ratio":
            return smallest_eigenpairs(L, self.n_clusters).vectors

        W = np.tensordot(w, np.stack([(v + v.T) / 2.0 for v in arrays]), axes=1)
        degrees = W.sum(axis=1)
        if np.any(degrees <= 0):
            self.logger.warning("Isolated vertices in the weighted graph; adding a degree ridge")
        D = np.diag(np.maximum(degrees, DEGREE_RIDGE))
        try:
            _, G = sla.eigh(L, D, subset_by_index=[0, self.n_clusters - 1])
        except sla.LinAlgError as exc:
            raise SolverError(
                "generalized eigenproblem for the normalized cut failed",
                diagnostics={"n": L.shape[0], "clusters": self.n_clusters},
            ) from exc
        return G

    def per_view_losses(self, state: np.ndarray, views: Sequence[np.ndarray]) -> np.ndarray:
        laplacians = [laplacian(view) for view in self.check_views(views)]
        return np.array([max(float(np.trace(state.T @ L @ state)), 0.0) for L in laplacians])

    def labels(self, state: np.ndarray) -> np.ndarray:
        """k-means rounding of the embedding rows."""
        kmeans = KMeans(
            n_clusters=self.n_clusters, n_init=self.kmeans_restarts, random_state=self.seed
        )
        return kmeans.fit_predict(state)

    # ------------------------------------------------------------------
    def union_components(self, views: Sequence[np.ndarray], alpha: Sequence[float]) -> int:
        """Connected components of the weighted union graph."""
        arrays = self.check_views(views)
        w = self.normalized_alpha(alpha, len(arrays))
        return connected_components(np.tensordot(w, np.stack(arrays), axes=1)).count


def spectral_clustering(
    W: np.ndarray, n_clusters: int, cut: str = "ratio", seed: Optional[int] = None
) -> np.ndarray:
    """Plain single-view spectral clustering with k-means rounding."""
    learner = SpectralLearner(n_clusters, cut=cut, seed=seed)
    embedding = learner.solve_weighted([W], np.ones(1))
    return learner.labels(embedding)


def sc_multiview(
    views: Sequence[np.ndarray],
    n_clusters: int,
    scheme: WeightScheme,
    cut: str = "ratio",
    seed: Optional[int] = None,
    alternating: Optional[AlternatingConfig] = None,
) -> SpectralResult:
    learner = SpectralLearner(n_clusters, cut=cut, seed=seed)
    run = run_alternating(learner, views, scheme, alternating)
    components = learner.union_components(views, run.normalized_weights)
    if components > n_clusters:
        logger.warning(
            "Weighted union graph has %d components for %d clusters; labels may merge components",
            components,
            n_clusters,
        )
    return SpectralResult(
        labels=learner.labels(run.state),
        alpha=run.normalized_weights,
        embedding=run.state,
        trace=run.trace,
        run=run,
    )


def sc_iw(
    views: Sequence[np.ndarray],
    n_clusters: int,
    p: float = 1.0,
    cut: str = "ratio",
    seed: Optional[int] = None,
    alternating: Optional[AlternatingConfig] = None,
) -> SpectralResult:
    """SC-IW: min_G sum_v Tr(G^T L_v G)^(p/2) under the chosen cut constraint."""
    return sc_multiview(views, n_clusters, WeightScheme.iw(p), cut, seed, alternating)
