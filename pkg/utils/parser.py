"""
parser.py
---------
Text parsing utilities: numeric lists given on the command line, matrix and
label files, and key=value manifests and reports.
"""

import logging
import re
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from utils.errors import DatasetError, InvalidInputError

logger = logging.getLogger(__name__)


def clean_line(line: str) -> str:
    """Trim whitespace and collapse runs of spaces."""
    return re.sub(r"\s+", " ", line).strip()


def parse_float_list(text: str) -> List[float]:
    """
    Convert '4,1.5' or '4 1.5' to [4.0, 1.5].
    Raises InvalidInputError when an entry is not a number.
    """
    parts = [part for part in re.split(r"[,\s]+", text.strip()) if part]
    if not parts:
        raise InvalidInputError("expected at least one number")
    try:
        return [float(part) for part in parts]
    except ValueError as exc:
        raise InvalidInputError(f"cannot parse numbers from '{text}'") from exc


def parse_int_list(text: str) -> List[int]:
    values = parse_float_list(text)
    if any(value != int(value) for value in values):
        raise InvalidInputError(f"expected integers, got '{text}'")
    return [int(value) for value in values]


def parse_matrix_lines(lines: Sequence[str], path: str = "<matrix>") -> np.ndarray:
    """
    Parse one matrix row per line, values separated by spaces. Blank lines
    are skipped; every row must have the same length.
    """
    rows: List[List[float]] = []
    width: Optional[int] = None
    for number, raw in enumerate(lines, start=1):
        line = clean_line(raw)
        if not line:
            continue
        try:
            row = [float(token) for token in line.split(" ")]
        except ValueError as exc:
            raise DatasetError(f"malformed number in '{line[:40]}'", path, number) from exc
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise DatasetError(f"expected {width} values, found {len(row)}", path, number)
        if not all(np.isfinite(row)):
            raise DatasetError("non-finite value", path, number)
        rows.append(row)
    if not rows:
        raise DatasetError("matrix file is empty", path)
    return np.array(rows, dtype=float)


def parse_label_lines(lines: Sequence[str], path: str = "<labels>") -> np.ndarray:
    labels: List[int] = []
    for number, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            labels.append(int(line))
        except ValueError as exc:
            raise DatasetError(f"expected an integer label, got '{line}'", path, number) from exc
    if not labels:
        raise DatasetError("label file is empty", path)
    return np.array(labels, dtype=int)


def parse_key_values(lines: Sequence[str], path: str = "<manifest>") -> List[Tuple[str, str]]:
    """
    Parse 'key=value' lines in order (keys may repeat). Lines starting with
    '#' and blank lines are ignored.
    """
    pairs: List[Tuple[str, str]] = []
    for number, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise DatasetError(f"expected key=value, got '{line}'", path, number)
        key, value = line.split("=", 1)
        pairs.append((key.strip(), value.strip()))
    return pairs


def key_value_dict(pairs: Sequence[Tuple[str, str]]) -> Dict[str, str]:
    """Last value wins for repeated keys."""
    return {key: value for key, value in pairs}
