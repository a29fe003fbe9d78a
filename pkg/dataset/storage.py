"""
storage.py
----------
Save and load multi-view datasets as plain text: a key=value manifest
(kind=, clusters=, view=<path> repeated in order, optional truth=<path>),
one space-separated matrix file per view and a one-label-per-line truth file.
"""

import logging
from pathlib import Path
from typing import List, Optional, Union

import numpy as np

from dataset.multiview import KINDS, MultiViewDataset
from utils.errors import DatasetError
from utils.parser import key_value_dict, parse_key_values, parse_label_lines, parse_matrix_lines

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.txt"
MATRIX_FORMAT = "%.17g"
KNOWN_KEYS = {"kind", "clusters", "view", "truth"}

PathLike = Union[str, Path]


def save_dataset(ds: MultiViewDataset, out_dir: PathLike) -> Path:
    """Write views, truth and manifest under ``out_dir``. Returns the manifest path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    lines = [f"kind={ds.kind}", f"clusters={ds.n_clusters}"]
    for index, view in enumerate(ds.views, start=1):
        name = f"view_{index}.txt"
        np.savetxt(out / name, view, fmt=MATRIX_FORMAT, delimiter=" ", encoding="utf-8")
        lines.append(f"view={name}")
    if ds.truth is not None:
        np.savetxt(out / "truth.txt", ds.truth, fmt="%d", encoding="utf-8")
        lines.append("truth=truth.txt")
    manifest = out / MANIFEST_NAME
    manifest.write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.info("Saved dataset '%s' (%d views) to %s", ds.name, ds.n_views, manifest)
    return manifest


def _read_lines(path: Path) -> List[str]:
    if not path.is_file():
        raise DatasetError("file not found", str(path))
    with open(path, "r", encoding="utf-8") as f:
        return f.readlines()


def load_matrix(path: PathLike) -> np.ndarray:
    path = Path(path)
    return parse_matrix_lines(_read_lines(path), str(path))


def load_labels(path: PathLike) -> np.ndarray:
    path = Path(path)
    return parse_label_lines(_read_lines(path), str(path))


def load_dataset(manifest_path: PathLike) -> MultiViewDataset:
    manifest = Path(manifest_path)
    if manifest.is_dir():
        manifest = manifest / MANIFEST_NAME
    pairs = parse_key_values(_read_lines(manifest), str(manifest))
    base = manifest.parent

    unknown = sorted({key for key, _ in pairs} - KNOWN_KEYS)
    if unknown:
        raise DatasetError(f"unknown manifest key(s): {', '.join(unknown)}", str(manifest))
    values = key_value_dict([(key, value) for key, value in pairs if key != "view"])
    view_paths = [base / value for key, value in pairs if key == "view"]

    kind = values.get("kind")
    if kind not in KINDS:
        raise DatasetError(f"kind must be one of {KINDS}, got '{kind}'", str(manifest))
    try:
        n_clusters = int(values.get("clusters", ""))
    except ValueError as exc:
        raise DatasetError("clusters must be an integer", str(manifest)) from exc
    if not view_paths:
        raise DatasetError("manifest lists no view files", str(manifest))

    views = [load_matrix(path) for path in view_paths]
    first = views[0].shape[0]
    for path, view in zip(view_paths, views):
        if view.shape[0] != first:
            raise DatasetError(
                f"inconsistent sample count: {view_paths[0].name} has N={first}, "
                f"{path.name} has N={view.shape[0]}",
                str(manifest),
            )

    truth: Optional[np.ndarray] = None
    if "truth" in values:
        truth_path = base / values["truth"]
        truth = load_labels(truth_path)
        if truth.size != first:
            raise DatasetError(
                f"truth has {truth.size} labels but views have N={first}", str(truth_path)
            )

    ds = MultiViewDataset(
        views=views, kind=kind, n_clusters=n_clusters, truth=truth, name=base.name or "dataset"
    )
    logger.info("Loaded dataset '%s': %d views, N=%d", ds.name, ds.n_views, ds.n_samples)
    return ds
