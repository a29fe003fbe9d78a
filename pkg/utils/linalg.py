"""
linalg.py
---------
Numerical kernels shared by every learner: Euclidean projection onto the
probability simplex, smallest eigenpairs of symmetric matrices and optimal
label assignment.
"""

import logging
from typing import NamedTuple

import numpy as np
from scipy import linalg as sla
from scipy.optimize import linear_sum_assignment
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from utils.errors import InvalidInputError, SolverError

logger = logging.getLogger(__name__)

SIMPLEX_TOL = 1e-9
SYMMETRY_TOL = 1e-8
# Above this size the matrix-free Lanczos path is used.
DENSE_EIGEN_LIMIT = 2000


class Eigenpairs(NamedTuple):
    values: np.ndarray
    vectors: np.ndarray


def project_to_simplex(v: np.ndarray) -> np.ndarray:
    """
    Euclidean projection of ``v`` onto {x : x >= 0, sum(x) = 1}.

    Sort-based threshold rule: x_i = max(v_i - theta, 0), theta chosen so the
    result sums to one.
    """
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise InvalidInputError(
            f"project_to_simplex expects a non-empty vector, got shape {v.shape}"
        )
    if not np.all(np.isfinite(v)):
        raise InvalidInputError("project_to_simplex received non-finite entries")
    return project_rows_to_simplex(v[np.newaxis, :])[0]


def project_rows_to_simplex(V: np.ndarray) -> np.ndarray:
    """Project every row of ``V`` onto the simplex in one vectorised pass."""
    V = np.asarray(V, dtype=float)
    if V.ndim != 2 or V.shape[1] == 0:
        raise InvalidInputError(f"expected a 2-D array with columns, got {V.shape}")
    n_rows, d = V.shape
    u = -np.sort(-V, axis=1)
    css = np.cumsum(u, axis=1) - 1.0
    ind = np.arange(1, d + 1)
    cond = u - css / ind > 0
    # cond[:, 0] is always true, so rho >= 1
    rho = d - np.argmax(cond[:, ::-1], axis=1)
    theta = css[np.arange(n_rows), rho - 1] / rho
    return np.maximum(V - theta[:, np.newaxis], 0.0)


def smallest_eigenpairs(A: np.ndarray, C: int) -> Eigenpairs:
    """
    The ``C`` algebraically smallest eigenvalues (ascending) of a symmetric
    matrix and matching orthonormal eigenvectors as columns.

    Raises:
        InvalidInputError: on non-square input or C outside [1, N].
        SolverError: when the eigensolver fails to converge.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {A.shape}")
    n = A.shape[0]
    if not 1 <= C <= n:
        raise InvalidInputError(f"requested {C} eigenpairs of a {n}x{n} matrix")
    if not np.all(np.isfinite(A)):
        raise InvalidInputError("matrix has non-finite entries")

    A = symmetrize(A)

    if n > DENSE_EIGEN_LIMIT and C < n - 1:
        try:
            values, vectors = eigsh(A, k=C, which="SA")
        except ArpackNoConvergence as exc:
            raise SolverError(
                "Lanczos eigensolver did not converge",
                diagnostics={"n": n, "requested": C, "converged": len(exc.eigenvalues)},
            ) from exc
        order = np.argsort(values)
        return Eigenpairs(values[order], vectors[:, order])

    try:
        values, vectors = sla.eigh(A, subset_by_index=[0, C - 1])
    except sla.LinAlgError as exc:
        raise SolverError(
            "dense symmetric eigensolver failed", diagnostics={"n": n, "requested": C}
        ) from exc
    return Eigenpairs(values, vectors)


def largest_eigenvalue(A: np.ndarray) -> float:
    """Largest eigenvalue of a symmetric matrix."""
    A = symmetrize(np.asarray(A, dtype=float))
    n = A.shape[0]
    if n > DENSE_EIGEN_LIMIT:
        return float(eigsh(A, k=1, which="LA", return_eigenvectors=False)[0])
    return float(sla.eigh(A, eigvals_only=True, subset_by_index=[n - 1, n - 1])[0])


def symmetrize(A: np.ndarray) -> np.ndarray:
    """(A + A^T) / 2, skipping the copy when A is already symmetric."""
    A = np.asarray(A, dtype=float)
    if np.allclose(A, A.T, rtol=0.0, atol=SYMMETRY_TOL):
        return A
    return (A + A.T) / 2.0


def optimal_assignment(cost: np.ndarray) -> np.ndarray:
    """
    Permutation ``perm`` minimising sum_i cost[i, perm[i]] (Hungarian method).
    """
    cost = np.asarray(cost, dtype=float)
    if cost.ndim != 2 or cost.shape[0] != cost.shape[1]:
        raise InvalidInputError(f"cost matrix must be square, got shape {cost.shape}")
    if not np.all(np.isfinite(cost)):
        raise InvalidInputError("cost matrix has non-finite entries")
    rows, cols = linear_sum_assignment(cost)
    perm = np.empty(cost.shape[0], dtype=int)
    perm[rows] = cols
    return perm
