"""
base_learner.py
---------------
Common interface for single-view clustering learners that can be driven by
the alternating weight optimizer: solve a weighted multi-view subproblem,
report per-view losses and turn a learner state into cluster labels.
"""

import logging
from typing import Any, Optional, Sequence

import numpy as np

from utils.errors import InvalidInputError


class BaseLearner:
    """Base class holding shape checks and a per-learner logger."""

    #: "graphs" for N x N similarity views, "features" for N x d views.
    view_kind = "graphs"

    def __init__(self, n_clusters: int) -> None:
        if n_clusters < 1:
            raise InvalidInputError(f"number of clusters must be positive, got {n_clusters}")
        self.n_clusters = n_clusters
        self.logger = logging.getLogger(self.__class__.__name__)

    # ------------------------------------------------------------------
    def solve_weighted(
        self,
        views: Sequence[np.ndarray],
        alpha: np.ndarray,
        warm_start: Optional[Any] = None,
    ) -> Any:
        """Minimise sum_v alpha_v * Phi_v(x) and return the learner state x."""
        raise NotImplementedError

    def per_view_losses(self, state: Any, views: Sequence[np.ndarray]) -> np.ndarray:
        """Phi_v(x) for every view."""
        raise NotImplementedError

    def labels(self, state: Any) -> np.ndarray:
        raise NotImplementedError

    # ------------------------------------------------------------------
    def check_views(self, views: Sequence[np.ndarray]) -> list:
        """Convert views to float arrays and check they describe the same N samples."""
        arrays = [np.asarray(view, dtype=float) for view in views]
        if not arrays:
            raise InvalidInputError("at least one view is required")
        n = arrays[0].shape[0]
        for index, view in enumerate(arrays):
            if view.ndim != 2 or view.shape[0] != n:
                raise InvalidInputError(
                    f"view {index} has shape {view.shape}; expected {n} rows"
                )
            if self.view_kind == "graphs" and view.shape[1] != n:
                raise InvalidInputError(f"view {index} must be {n}x{n}, got {view.shape}")
            if view.shape[1] == 0:
                raise InvalidInputError(f"view {index} has no features")
            if not np.all(np.isfinite(view)):
                raise InvalidInputError(f"view {index} has non-finite entries")
        if n <= self.n_clusters:
            raise InvalidInputError(
                f"{n} samples cannot be split into {self.n_clusters} clusters"
            )
        return arrays

    @staticmethod
    def normalized_alpha(alpha: Sequence[float], n_views: int) -> np.ndarray:
        alpha = np.asarray(alpha, dtype=float).ravel()
        if alpha.size != n_views:
            raise InvalidInputError(f"got {alpha.size} weights for {n_views} views")
        if np.any(alpha < 0) or not np.isfinite(alpha).all() or alpha.sum() <= 0:
            raise InvalidInputError(f"weights must be non-negative and not all zero: {alpha}")
        return alpha / alpha.sum()
