#!/usr/bin/env python3
"""
main.py
-------
Entry point for the multi-view clustering harness.
Examples:
    python main.py generate block-toy --seed 7 --out data/toy
    python main.py cluster --manifest data/toy/manifest.txt --method clr --scheme iw --hyper 1.0
    python main.py grid --manifest data/toy/manifest.txt --scheme iw --grid preset --seeds 0,1,2
    python main.py eval output/labels.txt data/toy/truth.txt
"""

import argparse
import logging
import sys
from typing import List, Optional

import pandas as pd

from dataset.storage import load_dataset, load_labels, save_dataset
from dataset.synthetic import MILD_OVERRIDES, STRONG_OVERRIDES, gen_block_toy, gen_two_view_gaussian
from experiments.runner import METHODS, SUMMARY_FORMATS, RunConfig, run_grid, run_method, save_grid, save_run
from optimizer.weight_schemes import SchemeKind, preset_grid
from utils.config import Settings
from utils.errors import InvalidInputError, SolverError
from utils.metrics import evaluate
from utils.parser import parse_float_list, parse_int_list

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"

EXIT_OK = 0
EXIT_SOLVER = 1
EXIT_USAGE = 2


def _positive_int(value: str) -> int:
    ivalue = int(value)
    if ivalue <= 0:
        raise argparse.ArgumentTypeError(f"Invalid value '{value}'. Must be a positive integer.")
    return ivalue


def _float_list(value: str) -> List[float]:
    try:
        return parse_float_list(value)
    except InvalidInputError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _int_list(value: str) -> List[int]:
    try:
        return parse_int_list(value)
    except InvalidInputError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _add_run_args(parser: argparse.ArgumentParser, settings: Settings) -> None:
    parser.add_argument("-m", "--manifest", required=True, help="Path to a dataset manifest.")
    parser.add_argument("--method", choices=METHODS, default="clr", help="Clustering method (default: clr).")
    parser.add_argument(
        "--scheme",
        choices=[kind.value for kind in SchemeKind],
        default="iw",
        help="View weighting scheme (default: iw).",
    )
    parser.add_argument(
        "--clusters", type=_positive_int, default=None, help="Number of clusters (default: from manifest)."
    )
    parser.add_argument(
        "--knn",
        type=_positive_int,
        default=settings.knn,
        help=f"Neighbours for feature-to-graph conversion (default: {settings.knn}).",
    )
    parser.add_argument(
        "--t", type=_positive_int, default=settings.t, help=f"CLR row support size (default: {settings.t})."
    )
    parser.add_argument(
        "-o", "--out", default=settings.output_dir, help=f"Output directory (default: {settings.output_dir})."
    )


def parse_args(argv: Optional[List[str]] = None, settings: Optional[Settings] = None) -> argparse.Namespace:
    settings = settings or Settings()
    parser = argparse.ArgumentParser(description="Multi-view clustering with learned view weights.")
    parser.add_argument("-v", "--verbose", action="store_true", help="Enable debug logging.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="Write a synthetic dataset to disk.")
    gen.add_argument("kind", choices=["block-toy", "gaussian"], help="Generator to use.")
    gen.add_argument("--seed", type=int, default=0, help="Random seed (default: 0).")
    gen.add_argument("-o", "--out", required=True, help="Directory for manifest, views and truth.")
    gen.add_argument(
        "--mild-noise",
        action="store_true",
        help="block-toy: use the milder 0.6/0.8 cross-block noise of view 1.",
    )
    gen.add_argument("--block-sizes", type=_int_list, default=[30, 30, 30], help="block-toy: block sizes.")
    gen.add_argument("--base-noise", type=_float_list, default=[0.6, 0.7], help="block-toy: noise per view.")
    gen.add_argument("--sep", type=_float_list, default=[4.0, 1.5], help="gaussian: separation per view.")
    gen.add_argument("--noise", type=_float_list, default=None, help="gaussian: noise scale per view.")
    gen.add_argument("--n-per-cluster", type=_positive_int, default=50, help="gaussian: samples per cluster.")
    gen.add_argument("--clusters", type=_positive_int, default=2, help="gaussian: number of clusters.")
    gen.add_argument("--share-noise", action="store_true", help="gaussian: reuse one noise draw in every view.")

    cluster = sub.add_parser("cluster", help="Run one method/scheme pair.")
    _add_run_args(cluster, settings)
    cluster.add_argument(
        "--hyper", type=float, default=None, help="Scheme hyperparameter (default: middle of the preset grid)."
    )
    cluster.add_argument("--seed", type=int, default=0, help="Random seed (default: 0).")

    grid = sub.add_parser("grid", help="Sweep a hyperparameter grid over several seeds.")
    _add_run_args(grid, settings)
    grid.add_argument(
        "--grid", default="preset", help="'preset' (alias 'paper') for the scheme's preset grid, or a comma list."
    )
    grid.add_argument("--seeds", type=_int_list, default=[0], help="Comma list of seeds (default: 0).")
    grid.add_argument(
        "-f",
        "--formats",
        nargs="+",
        choices=list(SUMMARY_FORMATS),
        default=["csv", "yaml"],
        help="Summary formats to save (one or more of: csv yaml txt). Default: csv yaml",
    )
    grid.add_argument(
        "--jobs", type=_positive_int, default=settings.jobs, help=f"Parallel runs (default: {settings.jobs})."
    )

    ev = sub.add_parser("eval", help="Score predicted labels against the truth.")
    ev.add_argument("pred", help="File with one predicted label per line.")
    ev.add_argument("truth", help="File with one true label per line.")

    return parser.parse_args(argv)


def default_hyper(scheme: str) -> float:
    """Middle of the scheme's preset grid (p = 1.0 for IW)."""
    grid = preset_grid(scheme)
    return grid[len(grid) // 2]


# ----------------------------------------------------------------------
def cmd_generate(args: argparse.Namespace) -> int:
    if args.kind == "block-toy":
        if len(args.base_noise) == 2:
            overrides = MILD_OVERRIDES if args.mild_noise else STRONG_OVERRIDES
        else:
            overrides = None
        ds = gen_block_toy(args.block_sizes, args.base_noise, overrides, seed=args.seed)
    else:
        noise = args.noise or [1.0] * len(args.sep)
        ds = gen_two_view_gaussian(
            args.n_per_cluster, args.clusters, args.sep, noise, seed=args.seed, share_noise=args.share_noise
        )
    print(save_dataset(ds, args.out))
    return EXIT_OK


def cmd_cluster(args: argparse.Namespace) -> int:
    ds = load_dataset(args.manifest)
    hyper = args.hyper if args.hyper is not None else default_hyper(args.scheme)
    config = RunConfig(args.method, args.scheme, hyper, args.clusters, args.seed, args.knn, args.t)
    report = run_method(ds, config)
    path = save_run(report, args.out)
    row = dict(report.pairs())
    row.pop("objective_trace")
    row["weights"] = ",".join(f"{w:.4f}" for w in report.weights)
    table = pd.DataFrame([row])
    print(table.to_string(index=False))
    logger.info("Report written to %s", path)
    return EXIT_OK


def cmd_grid(args: argparse.Namespace) -> int:
    ds = load_dataset(args.manifest)
    grid = args.grid if args.grid in ("preset", "paper") else parse_float_list(args.grid)
    base = RunConfig(args.method, args.scheme, default_hyper(args.scheme), args.clusters, 0, args.knn, args.t)
    result = run_grid(ds, base, grid, seeds=args.seeds, jobs=args.jobs)
    save_grid(result, args.out, args.formats)
    print(result.summary.to_string(index=False))
    if result.best is not None:
        print(f"best: hyper={result.best['hyper']:g} total={result.best['total']:.4f}")
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    scores = evaluate(load_labels(args.pred), load_labels(args.truth))
    print(f"{scores.acc:.6f} {scores.nmi:.6f} {scores.purity:.6f}")
    return EXIT_OK


COMMANDS = {"generate": cmd_generate, "cluster": cmd_cluster, "grid": cmd_grid, "eval": cmd_eval}


def main(argv: Optional[List[str]] = None) -> int:
    try:
        settings = Settings.from_env()
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    args = parse_args(argv, settings)

    # Configure the logging system
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, format=LOG_FORMAT)

    try:
        return COMMANDS[args.command](args)
    except SolverError as exc:
        logger.error("Solver failure: %s", exc)
        return EXIT_SOLVER
    except InvalidInputError as exc:
        logger.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
