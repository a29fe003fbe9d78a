"""
errors.py
---------
Exception types shared by the solvers, the dataset loader and the CLI.
"""

from typing import Any, Dict, Optional


class InvalidInputError(ValueError):
    """Raised when an argument violates a documented precondition."""


class SolverError(RuntimeError):
    """
    Raised when an iterative solver cannot reach its termination condition.

    Attributes:
        iteration: Outer iteration index at which the failure surfaced, if known.
        diagnostics: Free-form solver state (component counts, lambda, ...).
    """

    def __init__(
        self,
        message: str,
        iteration: Optional[int] = None,
        diagnostics: Optional[Dict[str, Any]] = None,
    ) -> None:
        super().__init__(message)
        self.iteration = iteration
        self.diagnostics = dict(diagnostics or {})

    def __str__(self) -> str:
        text = super().__str__()
        if self.iteration is not None:
            text = f"{text} (outer iteration {self.iteration})"
        if self.diagnostics:
            details = ", ".join(f"{k}={v}" for k, v in self.diagnostics.items())
            text = f"{text} [{details}]"
        return text


class DatasetError(InvalidInputError):
    """Raised when a dataset manifest or one of its files cannot be loaded."""

    def __init__(
        self, message: str, path: Optional[str] = None, row: Optional[int] = None
    ) -> None:
        location = ""
        if path is not None:
            location = f"{path}"
            if row is not None:
                location = f"{location}, row {row}"
            location = f"{location}: "
        super().__init__(f"{location}{message}")
        self.path = path
        self.row = row
