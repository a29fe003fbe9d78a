"""
clr_learner.py
--------------
Constrained Laplacian Rank (CLR) learner. Finds a row-stochastic similarity
matrix S close to a weighted combination of input graphs whose Laplacian has
exactly C zero eigenvalues, i.e. exactly C connected components.

The rank constraint is handled through the penalty 2*lambda*Tr(F^T L_S F),
alternating an eigenvector step for F with a row-wise simplex projection
for S, and adapting lambda until the component count is exactly C.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Sequence

import numpy as np
from scipy.spatial.distance import cdist

from learners.base_learner import BaseLearner
from optimizer.alternating_optimizer import AlternatingConfig, AlternatingResult, run_alternating
from optimizer.weight_schemes import WeightScheme
from utils.errors import InvalidInputError, SolverError
from utils.graph import DEFAULT_EDGE_EPS, connected_components, is_row_stochastic, laplacian
from utils.linalg import largest_eigenvalue, project_rows_to_simplex, project_to_simplex, smallest_eigenpairs

logger = logging.getLogger(__name__)


@dataclass
class ClrConfig:
    """
    Args:
        n_clusters: Number of connected components C to enforce.
        lambda0: Initial penalty weight; None uses mean_v ||A_v||_F^2 / N.
        t: Neighbours in the weighted input graph a row of S may use; None
            allows every other sample.
        max_inner: Cap on F/S alternations at the accepted lambda.
        inner_tol: Relative objective change that ends the inner loop.
        zero_eig_tol: Eigenvalues below zero_eig_tol * lambda_max count as zero.
        max_lambda_updates: Budget of lambda adaptations.
        edge_eps: Edge threshold for union-find component counting.
    """

    n_clusters: int
    lambda0: Optional[float] = None
    t: Optional[int] = 10
    max_inner: int = 100
    inner_tol: float = 1e-6
    zero_eig_tol: float = 1e-8
    max_lambda_updates: int = 30
    edge_eps: float = DEFAULT_EDGE_EPS

    def __post_init__(self) -> None:
        if self.n_clusters < 2:
            raise InvalidInputError(f"CLR needs C >= 2, got {self.n_clusters}")
        if self.t is not None and self.t < 1:
            raise InvalidInputError(f"row support size t must be >= 1, got {self.t}")
        if self.lambda0 is not None and self.lambda0 <= 0:
            raise InvalidInputError(f"lambda0 must be positive, got {self.lambda0}")


@dataclass
class ClrState:
    S: np.ndarray
    F: np.ndarray
    lam: float
    component_count: int
    eigenvalues: np.ndarray
    inner_trace: List[float] = field(default_factory=list)
    lambda_updates: int = 0


class RankCertificate(NamedTuple):
    zero_eigenvalues: int
    components: int
    threshold: float
    c_th_eigenvalue: float
    next_eigenvalue: float

    def holds(self, n_clusters: int) -> bool:
        return self.zero_eigenvalues == n_clusters and self.components == n_clusters


class ClrSolution(NamedTuple):
    S: np.ndarray
    labels: np.ndarray
    state: ClrState


class ClrResult(NamedTuple):
    S: np.ndarray
    alpha: np.ndarray
    labels: np.ndarray
    trace: List[float]
    run: AlternatingResult


# ----------------------------------------------------------------------
def update_row(
    a_rows: np.ndarray,
    alpha: Sequence[float],
    v_row: np.ndarray,
    lam: float,
    support: Sequence[int],
) -> np.ndarray:
    """
    Row update of the S-step: minimise
    sum_v w_v ||s - a^(v)||^2 + lam * <v, s> over simplex rows supported on
    ``support``, with w = alpha / sum(alpha). The minimiser is the simplex
    projection of sum_v w_v a^(v) - lam/2 v restricted to the support, so
    rescaling alpha leaves the row unchanged.
    """
    a_rows = np.atleast_2d(np.asarray(a_rows, dtype=float))
    alpha = np.asarray(alpha, dtype=float).ravel()
    v_row = np.asarray(v_row, dtype=float).ravel()
    support = np.asarray(support, dtype=int).ravel()
    if a_rows.shape[0] != alpha.size or a_rows.shape[1] != v_row.size:
        raise InvalidInputError(
            f"shape mismatch: rows {a_rows.shape}, weights {alpha.size}, v {v_row.size}"
        )
    if support.size == 0:
        raise InvalidInputError("row support must be non-empty")
    if alpha.sum() <= 0:
        raise InvalidInputError("weights must have a positive sum")
    target = (alpha / alpha.sum()) @ a_rows - 0.5 * lam * v_row
    row = np.zeros(v_row.size)
    row[support] = project_to_simplex(target[support])
    return row


def initial_lambda(views: Sequence[np.ndarray]) -> float:
    """mean_v ||A_v||_F^2 / N."""
    n = views[0].shape[0]
    value = float(np.mean([np.sum(np.square(view)) for view in views])) / n
    return value if value > 0 else 1.0


class ClrLearner(BaseLearner):
    """CLR as a pluggable learner for the alternating weight optimizer."""

    view_kind = "graphs"

    def __init__(self, config: ClrConfig) -> None:
        super().__init__(config.n_clusters)
        self.config = config

    # ------------------------------------------------------------------
    def solve_weighted(
        self,
        views: Sequence[np.ndarray],
        alpha: np.ndarray,
        warm_start: Optional[ClrState] = None,
    ) -> ClrState:
        """
        Solve min_S sum_v alpha_v ||S - A_v||_F^2 subject to S row-stochastic
        with exactly C connected components.

        Each row of S lives on the t nearest neighbours of that sample in the
        weighted input graph A = sum_v w_v A_v (w = normalized alpha). A cold
        start takes F from the Laplacian of A restricted to those supports;
        ``warm_start`` supplies F and lambda from a previous solve instead.
        """
        A = np.stack(self._check_graphs(views))
        w = self.normalized_alpha(alpha, A.shape[0])
        A_bar = np.tensordot(w, A, axes=1)
        support = self.row_support(A_bar)

        if warm_start is not None:
            F = warm_start.F
            lam = warm_start.lam
        else:
            S0 = self._s_step(A_bar, np.zeros_like(A_bar), 0.0, support)
            F = smallest_eigenpairs(laplacian(S0), self.n_clusters).vectors
            lam = self.config.lambda0 or initial_lambda(A)

        state = self._adapt_lambda(A, w, A_bar, support, F, lam)

        if warm_start is not None and warm_start.component_count == self.n_clusters:
            old_loss = float(w @ self.per_view_losses(warm_start, A))
            new_loss = float(w @ self.per_view_losses(state, A))
            if old_loss < new_loss:
                self.logger.debug(
                    "Keeping warm start: weighted loss %.10g beats new %.10g",
                    old_loss,
                    new_loss,
                )
                return warm_start
        return state

    def row_support(self, A_bar: np.ndarray) -> np.ndarray:
        """Indices of the t largest off-diagonal entries of each row (all j != i when t is None)."""
        n = A_bar.shape[0]
        t = n - 1 if self.config.t is None else min(self.config.t, n - 1)
        ranking = -np.asarray(A_bar, dtype=float)
        np.fill_diagonal(ranking, np.inf)
        if t < n - 1:
            return np.argpartition(ranking, t - 1, axis=1)[:, :t]
        return np.argsort(ranking, axis=1, kind="stable")[:, : n - 1]

    def per_view_losses(self, state: ClrState, views: Sequence[np.ndarray]) -> np.ndarray:
        return np.array([np.sum(np.square(state.S - view)) for view in views])

    def labels(self, state: ClrState) -> np.ndarray:
        return connected_components(state.S, self.config.edge_eps).labels

    def rank_certificate(self, state: ClrState) -> RankCertificate:
        """Eigenvalue count and union-find count of the components of S."""
        L = laplacian(state.S)
        n = L.shape[0]
        k = min(self.n_clusters + 1, n)
        values = smallest_eigenpairs(L, k).values
        threshold = self.config.zero_eig_tol * max(largest_eigenvalue(L), 1e-300)
        next_value = float(values[self.n_clusters]) if k > self.n_clusters else math.inf
        return RankCertificate(
            zero_eigenvalues=int(np.sum(values < threshold)),
            components=connected_components(state.S, self.config.edge_eps).count,
            threshold=threshold,
            c_th_eigenvalue=float(values[self.n_clusters - 1]),
            next_eigenvalue=next_value,
        )

    # ------------------------------------------------------------------
    def _check_graphs(self, views: Sequence[np.ndarray]) -> list:
        arrays = self.check_views(views)
        for index, view in enumerate(arrays):
            if np.any(view < 0):
                raise InvalidInputError(f"view {index} has negative similarities")
            if not is_row_stochastic(view, tol=1e-6):
                self.logger.debug("View %d is not row-stochastic", index)
        return arrays

    def _adapt_lambda(self, A, w, A_bar, support, F, lam) -> ClrState:
        """
        One S-step and one F-step per iteration. Too few components raise
        lambda and keep the new F; too many lower it and restore the previous
        F. Lambda doubles or halves until both sides are seen, then moves by
        geometric bisection. Once exactly C components hold, iterate at that lambda until the
        objective settles or ``max_inner`` steps, keeping the last state whose
        certificate held.
        """
        cfg = self.config
        C = self.n_clusters
        too_small: Optional[float] = None
        too_large: Optional[float] = None
        updates = 0
        trace: List[float] = []
        accepted: Optional[ClrState] = None

        while True:
            V = cdist(F, F, metric="sqeuclidean")
            S = self._s_step(A_bar, V, lam, support)
            objective = self._objective(A, w, S, V, lam)
            state = self._make_state(S, lam, trace + [objective], updates)
            cert = self.rank_certificate(state)

            if cert.holds(C):
                settled = bool(trace) and abs(trace[-1] - objective) <= cfg.inner_tol * max(
                    abs(trace[-1]), 1e-300
                )
                trace.append(objective)
                accepted = state
                if settled or len(trace) >= cfg.max_inner:
                    self.logger.debug(
                        "lambda=%.6g accepted after %d update(s), %d step(s) at this lambda",
                        lam,
                        updates,
                        len(trace),
                    )
                    return accepted
                F = state.F
                continue

            if accepted is not None:
                return accepted

            self.logger.debug(
                "lambda=%.6g: zero eigenvalues=%d, components=%d",
                lam,
                cert.zero_eigenvalues,
                cert.components,
            )
            if updates == cfg.max_lambda_updates:
                break
            updates += 1
            trace = []
            if min(cert.zero_eigenvalues, cert.components) < C:
                too_small = lam
                lam = lam * 2.0 if too_large is None else math.sqrt(too_small * too_large)
                F = state.F
            else:
                too_large = lam
                lam = lam / 2.0 if too_small is None else math.sqrt(too_small * too_large)

        raise SolverError(
            f"CLR did not reach exactly {C} connected components",
            diagnostics={
                "components": cert.components,
                "zero_eigenvalues": cert.zero_eigenvalues,
                "lambda": lam,
                "lambda_updates": updates,
            },
        )

    @staticmethod
    def _s_step(A_bar: np.ndarray, V: np.ndarray, lam: float, support: np.ndarray) -> np.ndarray:
        """Vectorised update_row over all rows on their fixed supports."""
        target = A_bar - 0.5 * lam * V
        values = project_rows_to_simplex(np.take_along_axis(target, support, axis=1))
        S = np.zeros_like(A_bar)
        np.put_along_axis(S, support, values, axis=1)
        return S

    @staticmethod
    def _objective(A, w, S, V, lam) -> float:
        """sum_v w_v ||S - A_v||^2 + 2 lam Tr(F^T L_S F), the latter as lam * <V, S>."""
        fit = float(np.sum(w * np.sum(np.square(S[np.newaxis] - A), axis=(1, 2))))
        return fit + lam * float(np.sum(V * S))

    def _make_state(self, S, lam, inner_trace, updates) -> ClrState:
        n = S.shape[0]
        k = min(self.n_clusters + 1, n)
        eig = smallest_eigenpairs(laplacian(S), k)
        return ClrState(
            S=S,
            F=eig.vectors[:, : self.n_clusters],
            lam=lam,
            component_count=connected_components(S, self.config.edge_eps).count,
            eigenvalues=eig.values,
            inner_trace=inner_trace,
            lambda_updates=updates,
        )


# ----------------------------------------------------------------------
def clr_single(A: np.ndarray, config: ClrConfig) -> ClrSolution:
    """Single-view CLR: nearest row-stochastic S to A with exactly C components."""
    learner = ClrLearner(config)
    state = learner.solve_weighted([A], np.ones(1))
    return ClrSolution(state.S, learner.labels(state), state)


def clr_weighted_subproblem(
    views: Sequence[np.ndarray],
    alpha: Sequence[float],
    config: ClrConfig,
    warm_start: Optional[ClrState] = None,
) -> ClrState:
    return ClrLearner(config).solve_weighted(views, np.asarray(alpha, dtype=float), warm_start)


def clr_multiview(
    views: Sequence[np.ndarray],
    scheme: WeightScheme,
    config: ClrConfig,
    alternating: Optional[AlternatingConfig] = None,
) -> ClrResult:
    """Multi-view CLR with any weight scheme (CLR-IW, CLR-NR, CLR-ER, CLR-EF, equal)."""
    learner = ClrLearner(config)
    run = run_alternating(learner, views, scheme, alternating)
    return ClrResult(
        S=run.state.S,
        alpha=run.normalized_weights,
        labels=learner.labels(run.state),
        trace=run.trace,
        run=run,
    )
