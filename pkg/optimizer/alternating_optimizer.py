"""
alternating_optimizer.py
------------------------
Generic alternating driver: solve the weighted multi-view subproblem with a
pluggable learner, recompute per-view losses, update the view weights with
the chosen scheme and repeat until the scheme's objective stalls.
"""

import logging
from dataclasses import dataclass
from typing import Any, List, NamedTuple, Optional, Sequence

import numpy as np

from learners.base_learner import BaseLearner
from optimizer.weight_schemes import SchemeKind, WeightScheme, WeightVector
from utils.errors import InvalidInputError, SolverError

logger = logging.getLogger(__name__)

DESCENT_SLACK = 10 * np.finfo(float).eps


@dataclass
class AlternatingConfig:
    max_outer: int = 50
    tol: float = 1e-6
    init_weights: Optional[Sequence[float]] = None

    def __post_init__(self) -> None:
        if self.max_outer < 1:
            raise InvalidInputError(f"max_outer must be positive, got {self.max_outer}")
        if self.tol < 0:
            raise InvalidInputError(f"tol must be non-negative, got {self.tol}")


class AlternatingResult(NamedTuple):
    state: Any
    weights: WeightVector
    trace: List[float]
    phi_trace: List[np.ndarray]
    weight_history: List[np.ndarray]
    iterations: int
    converged: bool

    @property
    def normalized_weights(self) -> np.ndarray:
        return self.weights.as_simplex()


class AlternatingOptimizer:
    """
    High-level interface:
      * start from uniform (or given) weights
      * alternate learner.solve_weighted and scheme.update
      * record the scheme objective after every outer iteration
    """

    def __init__(
        self,
        learner: BaseLearner,
        scheme: WeightScheme,
        config: Optional[AlternatingConfig] = None,
    ) -> None:
        self.learner = learner
        self.scheme = scheme
        self.config = config or AlternatingConfig()

    # ------------------------------------------------------------------
    def run(self, views: Sequence[np.ndarray]) -> AlternatingResult:
        n_views = len(views)
        if n_views == 0:
            raise InvalidInputError("at least one view is required")
        alpha = self._initial_weights(n_views)

        if n_views == 1:
            # a single view has nothing to weigh: one solve is the answer
            state = self._solve(views, alpha, None, 1)
            phi = np.asarray(self.learner.per_view_losses(state, views), dtype=float)
            weights = WeightVector(np.ones(1), normalized=True)
            trace = [self.scheme.objective(phi, weights.values)]
            return AlternatingResult(state, weights, trace, [phi], [weights.values], 1, True)

        state = None
        trace: List[float] = []
        phi_trace: List[np.ndarray] = []
        history: List[np.ndarray] = [alpha / alpha.sum()]
        weights = WeightVector(alpha, normalized=False)
        converged = False
        iteration = 0

        for iteration in range(1, self.config.max_outer + 1):
            state = self._solve(views, weights.values, state, iteration)
            phi = np.asarray(self.learner.per_view_losses(state, views), dtype=float)
            weights = self.scheme.update(phi)
            objective = self.scheme.objective(phi, weights.values)

            phi_trace.append(phi)
            history.append(weights.as_simplex())
            logger.debug(
                "%s iter %d: objective=%.10g phi=%s weights=%s",
                self.scheme.label,
                iteration,
                objective,
                np.array2string(phi, precision=6),
                np.array2string(weights.as_simplex(), precision=4),
            )

            if trace:
                previous = trace[-1]
                if objective > previous + DESCENT_SLACK * max(abs(previous), 1.0):
                    level = logging.WARNING if self.scheme.kind is SchemeKind.IW else logging.DEBUG
                    logger.log(
                        level,
                        "%s objective increased at iteration %d: %.12g -> %.12g",
                        self.scheme.label,
                        iteration,
                        previous,
                        objective,
                    )
                trace.append(objective)
                if abs(previous - objective) <= self.config.tol * max(abs(previous), 1e-300):
                    converged = True
                    break
            else:
                trace.append(objective)

        if not converged:
            logger.info(
                "%s stopped after %d outer iterations without meeting tol=%g",
                self.scheme.label,
                iteration,
                self.config.tol,
            )
        return AlternatingResult(
            state, weights, trace, phi_trace, history, iteration, converged
        )

    # ------------------------------------------------------------------
    def _initial_weights(self, n_views: int) -> np.ndarray:
        init = self.config.init_weights
        if init is None:
            return np.full(n_views, 1.0 / n_views)
        init = np.asarray(init, dtype=float)
        if init.size != n_views or np.any(init < 0) or init.sum() <= 0:
            raise InvalidInputError(f"invalid initial weights {init} for {n_views} views")
        return init

    def _solve(self, views, alpha, warm_start, iteration: int):
        try:
            return self.learner.solve_weighted(views, alpha, warm_start=warm_start)
        except SolverError as exc:
            if exc.iteration is None:
                exc.iteration = iteration
            raise


def run_alternating(
    solver: BaseLearner,
    views: Sequence[np.ndarray],
    scheme: WeightScheme,
    config: Optional[AlternatingConfig] = None,
) -> AlternatingResult:
    return AlternatingOptimizer(solver, scheme, config).run(views)
