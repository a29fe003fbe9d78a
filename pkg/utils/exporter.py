# mviw/utils/exporter.py

import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
import yaml

from utils.errors import InvalidInputError

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"

PathLike = Union[str, Path]


def _timestamp() -> str:
    return datetime.now().strftime("%Y%m%d_%H%M")


def _default_path(path: Optional[PathLike], stem: str, suffix: str) -> Path:
    if not path:
        path = f"output/{stem}_{_timestamp()}.{suffix}"
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def format_value(value: Any) -> str:
    """Render a report value: floats at full precision, sequences comma-joined."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return FLOAT_FORMAT % float(value)
    if isinstance(value, (list, tuple, np.ndarray)):
        return ",".join(format_value(item) for item in value)
    return str(value)


def _records(summary: pd.DataFrame) -> List[dict]:
    records = []
    for row in summary.to_dict(orient="records"):
        records.append(
            {key: value.item() if isinstance(value, np.generic) else value for key, value in row.items()}
        )
    return records


def export_yaml(summary: pd.DataFrame, path: Optional[PathLike] = None) -> Path:
    """Save a grid summary to YAML. Returns the file path used."""
    path = _default_path(path, "grid_summary", "yaml")
    with open(path, "w", encoding="utf-8") as f:
        yaml.safe_dump(_records(summary), f, allow_unicode=True, default_flow_style=False, sort_keys=False)
    logger.info("Saved YAML to %s", path)
    return path


def export_txt(summary: pd.DataFrame, path: Optional[PathLike] = None) -> Path:
    """Save a grid summary as an aligned plain-text table."""
    path = _default_path(path, "grid_summary", "txt")
    with open(path, "w", encoding="utf-8") as f:
        f.write(summary.to_string(index=False))
        f.write("\n")
    logger.info("Saved TXT to %s", path)
    return path


def export_csv(summary: pd.DataFrame, path: Optional[PathLike] = None) -> Path:
    """Save a grid summary to CSV."""
    path = _default_path(path, "grid_summary", "csv")
    summary.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.info("Saved CSV to %s", path)
    return path


def write_report(pairs: Iterable[Tuple[str, Any]], path: PathLike) -> Path:
    """One ``key=value`` line per pair, in the given order."""
    path = _default_path(path, "report", "txt")
    with open(path, "w", encoding="utf-8") as f:
        for key, value in pairs:
            f.write(f"{key}={format_value(value)}\n")
    logger.debug("Saved report to %s", path)
    return path


def write_series(x: Sequence[float], y: Sequence[float], path: PathLike) -> Path:
    """Two tab-separated columns, one point per line."""
    if len(x) != len(y):
        raise InvalidInputError(f"series length mismatch: {len(x)} x values, {len(y)} y values")
    path = _default_path(path, "series", "tsv")
    with open(path, "w", encoding="utf-8") as f:
        for xi, yi in zip(x, y):
            f.write(f"{format_value(float(xi))}\t{format_value(float(yi))}\n")
    logger.debug("Saved series to %s", path)
    return path


def write_labels(labels: Sequence[int], path: PathLike) -> Path:
    path = _default_path(path, "labels", "txt")
    np.savetxt(path, np.asarray(labels, dtype=int), fmt="%d", encoding="utf-8")
    logger.debug("Saved labels to %s", path)
    return path
