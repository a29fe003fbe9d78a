import numpy as np
import pytest

from dataset.synthetic import gen_block_toy, gen_two_view_gaussian


def _block_graph(sizes, noise=0.0, seed=0):
    ds = gen_block_toy(sizes, base_noise=(noise,), cross_block_noise=[{}], seed=seed)
    return ds.views[0], ds.truth


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def make_blocks():
    """Factory for row-stochastic block graphs; noise=0 gives one component per block."""
    return _block_graph


@pytest.fixture
def clean_blocks():
    return _block_graph((6, 6, 6))


@pytest.fixture
def block_toy():
    return gen_block_toy(seed=7)


@pytest.fixture
def blobs():
    return gen_two_view_gaussian(n_per_cluster=30, separation=(8.0, 8.0), seed=3)
