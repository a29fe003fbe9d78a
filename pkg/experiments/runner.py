"""
runner.py
---------
Experiment harness: run one method/scheme pair on a dataset, sweep a
hyperparameter grid over several seeds and summarize the results.

Methods:
  * clr    - CLR on graph views (feature views become kNN graphs)
  * sc-rc  - spectral clustering, ratio cut
  * sc-nc  - spectral clustering, normalized cut
  * nmf    - k-means-embedded NMF on feature views
"""

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from tqdm.auto import tqdm

from dataset.multiview import MultiViewDataset
from learners.clr_learner import ClrConfig, clr_multiview
from learners.nmf_learner import NmfConfig, nmf_multiview
from learners.spectral_learner import sc_multiview
from optimizer.alternating_optimizer import AlternatingConfig
from optimizer.weight_schemes import SchemeKind, WeightScheme, preset_grid, weight_std
from utils.errors import InvalidInputError
from utils.exporter import export_csv, export_txt, export_yaml, write_labels, write_report, write_series
from utils.graph import DEFAULT_KNN
from utils.metrics import ClusteringScores, evaluate

logger = logging.getLogger(__name__)

METHODS = ("clr", "sc-rc", "sc-nc", "nmf")
METRICS = ("acc", "nmi", "purity")
SUMMARY_FORMATS = ("csv", "yaml", "txt")

PathLike = Union[str, Path]


@dataclass(frozen=True)
class RunConfig:
    method: str = "clr"
    scheme: str = "iw"
    hyper: float = 1.0
    n_clusters: Optional[int] = None
    seed: int = 0
    knn: int = DEFAULT_KNN
    t: int = 10
    max_outer: int = 50
    restarts: int = 10

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise InvalidInputError(f"method must be one of {METHODS}, got '{self.method}'")
        try:
            SchemeKind(self.scheme)
        except ValueError as exc:
            raise InvalidInputError(f"unknown weight scheme '{self.scheme}'") from exc
        if self.knn < 1 or self.t < 1:
            raise InvalidInputError("knn and t must be positive")

    def weight_scheme(self) -> WeightScheme:
        if SchemeKind(self.scheme) is SchemeKind.EQUAL:
            return WeightScheme.equal()
        return WeightScheme(SchemeKind(self.scheme), float(self.hyper))


@dataclass
class RunReport:
    method: str
    scheme: str
    hyper: float
    seed: int
    n_clusters: int
    knn: int
    t: int
    iterations: int
    converged: bool
    trace: List[float]
    weights: np.ndarray
    labels: np.ndarray
    scores: Optional[ClusteringScores] = None
    wall_ms: float = 0.0
    dataset: str = "dataset"

    @property
    def weight_std(self) -> float:
        return weight_std(self.weights)

    def pairs(self) -> List[Tuple[str, Any]]:
        """Report fields in file order."""
        scores = self.scores
        return [
            ("method", self.method),
            ("scheme", self.scheme),
            ("hyper", float(self.hyper)),
            ("seed", self.seed),
            ("dataset", self.dataset),
            ("clusters", self.n_clusters),
            ("knn", self.knn),
            ("t", self.t),
            ("iters", self.iterations),
            ("converged", self.converged),
            ("objective_trace", [float(value) for value in self.trace]),
            ("weights", [float(value) for value in self.weights]),
            ("acc", scores.acc if scores else None),
            ("nmi", scores.nmi if scores else None),
            ("purity", scores.purity if scores else None),
            ("wall_ms", round(self.wall_ms, 3)),
        ]


class GridResult(NamedTuple):
    reports: List[RunReport]
    summary: pd.DataFrame
    best: Optional[Dict[str, Any]]


# ----------------------------------------------------------------------
def run_method(ds: MultiViewDataset, config: RunConfig) -> RunReport:
    """Run one method/scheme pair on ``ds`` and score it against the truth if present."""
    scheme = config.weight_scheme()
    C = config.n_clusters or ds.n_clusters
    alternating = AlternatingConfig(max_outer=config.max_outer)
    logger.info("Running %s + %s on '%s' (seed %d)", config.method, scheme.label, ds.name, config.seed)

    start = time.perf_counter()
    if config.method == "nmf":
        if ds.kind != "features":
            raise InvalidInputError("nmf needs feature views; graph datasets only support clr and sc-*")
        result = nmf_multiview(
            ds.views, scheme, NmfConfig(C, restarts=config.restarts, seed=config.seed), alternating
        )
    elif config.method == "clr":
        result = clr_multiview(ds.to_graphs(config.knn), scheme, ClrConfig(C, t=config.t), alternating)
    else:
        cut = "ratio" if config.method == "sc-rc" else "normalized"
        result = sc_multiview(ds.to_graphs(config.knn), C, scheme, cut, config.seed, alternating)
    wall_ms = (time.perf_counter() - start) * 1000.0

    scores = evaluate(result.labels, ds.truth) if ds.truth is not None else None
    if scores is not None:
        logger.info(
            "%s + %s: acc=%.4f nmi=%.4f purity=%.4f weights=%s",
            config.method,
            scheme.label,
            scores.acc,
            scores.nmi,
            scores.purity,
            np.array2string(result.alpha, precision=4),
        )
    return RunReport(
        method=config.method,
        scheme=SchemeKind(config.scheme).value,
        hyper=0.0 if scheme.kind is SchemeKind.EQUAL else float(config.hyper),
        seed=config.seed,
        n_clusters=C,
        knn=config.knn,
        t=config.t,
        iterations=result.run.iterations,
        converged=result.run.converged,
        trace=list(result.trace),
        weights=np.asarray(result.alpha, dtype=float),
        labels=np.asarray(result.labels, dtype=int),
        scores=scores,
        wall_ms=wall_ms,
        dataset=ds.name,
    )


def resolve_grid(scheme: str, grid: Union[str, Sequence[float]]) -> List[float]:
    """``"preset"`` (alias ``"paper"``) gives the scheme's preset grid."""
    if isinstance(grid, str):
        if grid not in ("preset", "paper"):
            raise InvalidInputError(f"unknown grid preset '{grid}'")
        return preset_grid(scheme)
    values = [float(value) for value in grid]
    if not values:
        raise InvalidInputError("the hyperparameter grid is empty")
    return values


def run_grid(
    ds: MultiViewDataset,
    base: RunConfig,
    grid: Union[str, Sequence[float]],
    seeds: Sequence[int] = (0,),
    jobs: int = 1,
) -> GridResult:
    """
    Run every (grid point, seed) pair, concurrently when ``jobs > 1``.
    Reports come back in grid-major, seed-minor order regardless of
    completion order.
    """
    points = resolve_grid(base.scheme, grid)
    if not seeds:
        raise InvalidInputError("at least one seed is required")
    configs = [replace(base, hyper=point, seed=int(seed)) for point in points for seed in seeds]
    reports: List[Optional[RunReport]] = [None] * len(configs)

    if jobs > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = {pool.submit(run_method, ds, cfg): index for index, cfg in enumerate(configs)}
            for future in tqdm(as_completed(futures), total=len(futures), desc="Grid", unit="run"):
                reports[futures[future]] = future.result()
    else:
        for index, cfg in enumerate(tqdm(configs, desc="Grid", unit="run")):
            reports[index] = run_method(ds, cfg)

    summary = summarize(reports)
    return GridResult(reports, summary, best_point(summary))


def summarize(reports: Sequence[RunReport]) -> pd.DataFrame:
    """One row per grid point, metrics averaged over seeds."""
    rows = []
    for report in reports:
        scores = report.scores
        rows.append(
            {
                "hyper": report.hyper,
                "seed": report.seed,
                "acc": scores.acc if scores else math.nan,
                "nmi": scores.nmi if scores else math.nan,
                "purity": scores.purity if scores else math.nan,
                "weight_std": report.weight_std,
                "iters": report.iterations,
                "wall_ms": report.wall_ms,
            }
        )
    frame = pd.DataFrame(rows)
    summary = (
        frame.groupby("hyper", sort=False)
        .agg(
            runs=("seed", "size"),
            acc=("acc", "mean"),
            nmi=("nmi", "mean"),
            purity=("purity", "mean"),
            weight_std=("weight_std", "mean"),
            iters=("iters", "mean"),
        )
        .reset_index()
    )
    summary["total"] = summary[list(METRICS)].sum(axis=1, min_count=len(METRICS))
    return summary


def best_point(summary: pd.DataFrame) -> Optional[Dict[str, Any]]:
    """Grid point with the largest ACC + NMI + Purity; the first one wins ties."""
    if summary.empty or summary["total"].isna().all():
        return None
    row = summary.loc[summary["total"].idxmax()]
    return {key: (value.item() if isinstance(value, np.generic) else value) for key, value in row.items()}


# ----------------------------------------------------------------------
def report_name(report: RunReport) -> str:
    return f"report_{report.method}_{report.scheme}_{report.hyper:g}_seed{report.seed}.txt"


def save_run(report: RunReport, out_dir: PathLike) -> Path:
    """Write the key=value report and the predicted labels of one run."""
    out = Path(out_dir)
    path = write_report(report.pairs(), out / report_name(report))
    write_labels(report.labels, out / path.name.replace("report_", "labels_"))
    return path


def save_grid(
    result: GridResult, out_dir: PathLike, formats: Sequence[str] = ("csv", "yaml")
) -> List[Path]:
    """Per-run reports, summary.<fmt> for each selected format and one series file per metric."""
    unknown = sorted(set(formats) - set(SUMMARY_FORMATS))
    if unknown:
        raise InvalidInputError(f"unknown summary format(s): {', '.join(unknown)}")
    out = Path(out_dir)
    written = [save_run(report, out) for report in result.reports]
    for fmt in formats:
        if fmt == "csv":
            written.append(export_csv(result.summary, out / "summary.csv"))
        elif fmt == "yaml":
            written.append(export_yaml(result.summary, out / "summary.yaml"))
        elif fmt == "txt":
            written.append(export_txt(result.summary, out / "summary.txt"))
    hyper = result.summary["hyper"].tolist()
    for column in METRICS + ("weight_std",):
        written.append(write_series(hyper, result.summary[column].tolist(), out / f"series_{column}.tsv"))
    return written
