"""
multiview.py
------------
Container for a multi-view dataset: M views over the same N samples, either
feature matrices (N x d_v) or similarity graphs (N x N).
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from utils.errors import DatasetError
from utils.graph import DEFAULT_KNN, build_knn_similarity

logger = logging.getLogger(__name__)

KINDS = ("features", "graphs")


@dataclass
class MultiViewDataset:
    views: List[np.ndarray]
    kind: str
    n_clusters: int
    truth: Optional[np.ndarray] = None
    name: str = "dataset"
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise DatasetError(f"kind must be one of {KINDS}, got '{self.kind}'")
        if not self.views:
            raise DatasetError("a dataset needs at least one view")
        self.views = [np.asarray(view, dtype=float) for view in self.views]
        n = self.views[0].shape[0]
        for index, view in enumerate(self.views):
            if view.ndim != 2 or view.shape[0] != n:
                raise DatasetError(
                    f"view {index} has {view.shape[0]} samples but view 0 has {n}"
                )
            if self.kind == "graphs" and view.shape[1] != n:
                raise DatasetError(f"graph view {index} must be square, got {view.shape}")
        if self.n_clusters < 1:
            raise DatasetError(f"number of clusters must be positive, got {self.n_clusters}")
        if self.truth is not None:
            self.truth = np.asarray(self.truth, dtype=int).ravel()
            if self.truth.size != n:
                raise DatasetError(
                    f"truth has {self.truth.size} labels for {n} samples"
                )

    @property
    def n_samples(self) -> int:
        return self.views[0].shape[0]

    @property
    def n_views(self) -> int:
        return len(self.views)

    def require_truth(self) -> np.ndarray:
        if self.truth is None:
            raise DatasetError(f"dataset '{self.name}' has no ground-truth labels")
        return self.truth

    def to_graphs(self, k: int = DEFAULT_KNN) -> List[np.ndarray]:
        """Graph views as-is, or kNN similarity graphs built from feature views."""
        if self.kind == "graphs":
            return list(self.views)
        k = min(k, self.n_samples - 1)
        logger.debug("Building %d-NN graphs for %d feature views", k, self.n_views)
        return [build_knn_similarity(view, k) for view in self.views]
