"""
synthetic.py
------------
Seeded synthetic multi-view generators: the two-view noisy block graph toy
and two-view Gaussian blobs with a strong and a weak view.
"""

import logging
import math
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from dataset.multiview import MultiViewDataset
from utils.errors import InvalidInputError

logger = logging.getLogger(__name__)

BlockPair = Tuple[int, int]

# extra noise between blocks 1-2 and 2-3 of view 1
STRONG_OVERRIDES: Tuple[Dict[BlockPair, float], ...] = ({(0, 1): 0.8, (1, 2): 1.0}, {})
# milder variant of the same pattern
MILD_OVERRIDES: Tuple[Dict[BlockPair, float], ...] = ({(0, 1): 0.6, (1, 2): 0.8}, {})


def _noise_levels(
    block_sizes: Sequence[int], base: float, overrides: Dict[BlockPair, float]
) -> np.ndarray:
    bounds = np.concatenate([[0], np.cumsum(block_sizes)])
    n_blocks = len(block_sizes)
    levels = np.full((n_blocks, n_blocks), float(base))
    np.fill_diagonal(levels, 1.0)
    for (a, b), e in overrides.items():
        if not (0 <= a < n_blocks and 0 <= b < n_blocks) or a == b:
            raise InvalidInputError(f"invalid block pair ({a}, {b}) for {n_blocks} blocks")
        if not math.isfinite(e) or e < 0:
            raise InvalidInputError(f"noise level must be finite and >= 0, got {e}")
        levels[a, b] = levels[b, a] = e
    block_of = np.repeat(np.arange(n_blocks), block_sizes)
    assert bounds[-1] == block_of.size
    return levels[block_of[:, np.newaxis], block_of[np.newaxis, :]]


def gen_block_toy(
    block_sizes: Sequence[int] = (30, 30, 30),
    base_noise: Sequence[float] = (0.6, 0.7),
    cross_block_noise: Optional[Sequence[Dict[BlockPair, float]]] = None,
    seed: Optional[int] = None,
) -> MultiViewDataset:
    """
    Block-diagonal similarity graphs, one per entry of ``base_noise``.

    Entries inside a block are uniform on [0, 1), entries between blocks
    uniform on [0, e) where e is the view's base noise unless the block pair
    has an override (applied to both off-diagonal rectangles). Self-loops
    are removed and rows normalized to sum to one.
    """
    block_sizes = [int(size) for size in block_sizes]
    if not block_sizes or any(size <= 0 for size in block_sizes):
        raise InvalidInputError(f"block sizes must be positive, got {block_sizes}")
    if any(not math.isfinite(e) or e < 0 for e in base_noise):
        raise InvalidInputError(f"noise levels must be finite and >= 0, got {base_noise}")
    if cross_block_noise is None:
        cross_block_noise = STRONG_OVERRIDES if len(base_noise) == 2 else [{}] * len(base_noise)
    if len(cross_block_noise) != len(base_noise):
        raise InvalidInputError("need one override mapping per view")

    rng = np.random.default_rng(seed)
    n = sum(block_sizes)
    views = []
    for base, overrides in zip(base_noise, cross_block_noise):
        A = rng.uniform(0.0, 1.0, size=(n, n)) * _noise_levels(block_sizes, base, overrides)
        np.fill_diagonal(A, 0.0)
        views.append(A / A.sum(axis=1, keepdims=True))

    truth = np.repeat(np.arange(len(block_sizes)), block_sizes)
    return MultiViewDataset(
        views=views,
        kind="graphs",
        n_clusters=len(block_sizes),
        truth=truth,
        name="block-toy",
        meta={"seed": seed, "base_noise": list(base_noise)},
    )


def gen_two_view_gaussian(
    n_per_cluster: int = 50,
    n_clusters: int = 2,
    separation: Sequence[float] = (4.0, 1.5),
    noise_scale: Sequence[float] = (1.0, 1.0),
    dim: int = 2,
    seed: Optional[int] = None,
    share_noise: bool = False,
) -> MultiViewDataset:
    """
    Gaussian blobs seen through several views. In view v the cluster centres
    sit on a circle with neighbouring centres ``separation[v] * noise_scale[v]``
    apart and samples scatter with standard deviation ``noise_scale[v]``.
    With ``share_noise`` every view reuses the same standard-normal draws.
    """
    if len(separation) != len(noise_scale):
        raise InvalidInputError("separation and noise_scale need one entry per view")
    if n_per_cluster < 1 or n_clusters < 2 or dim < 2:
        raise InvalidInputError("need n_per_cluster >= 1, n_clusters >= 2 and dim >= 2")
    if any(s < 0 for s in separation) or any(s <= 0 for s in noise_scale):
        raise InvalidInputError("separations must be >= 0 and noise scales > 0")

    n = n_per_cluster * n_clusters
    truth = np.repeat(np.arange(n_clusters), n_per_cluster)
    angles = 2.0 * np.pi * np.arange(n_clusters) / n_clusters
    unit = np.zeros((n_clusters, dim))
    unit[:, 0] = np.cos(angles)
    unit[:, 1] = np.sin(angles)
    chord = 2.0 * math.sin(math.pi / n_clusters)

    streams = np.random.SeedSequence(seed).spawn(len(separation))
    shared = np.random.default_rng(streams[0]).standard_normal((n, dim)) if share_noise else None

    views = []
    for index, (sep, sigma) in enumerate(zip(separation, noise_scale)):
        noise = shared if share_noise else np.random.default_rng(streams[index]).standard_normal((n, dim))
        centres = unit * (sep * sigma / chord)
        views.append(centres[truth] + sigma * noise)

    return MultiViewDataset(
        views=views,
        kind="features",
        n_clusters=n_clusters,
        truth=truth,
        name="gaussian",
        meta={"seed": seed, "separation": list(separation), "noise_scale": list(noise_scale)},
    )
