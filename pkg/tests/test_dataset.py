import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from dataset.multiview import MultiViewDataset
from dataset.storage import load_dataset, save_dataset
from dataset.synthetic import MILD_OVERRIDES, gen_block_toy, gen_two_view_gaussian
from learners.clr_learner import ClrConfig, clr_single
from utils.errors import DatasetError, InvalidInputError
from utils.graph import is_row_stochastic
from utils.metrics import acc


class TestBlockToy:
    def test_default_configuration(self, block_toy):
        assert block_toy.kind == "graphs"
        assert block_toy.n_views == 2
        assert block_toy.n_samples == 90
        assert block_toy.n_clusters == 3
        assert_array_equal(np.bincount(block_toy.truth), [30, 30, 30])
        for view in block_toy.views:
            assert view.shape == (90, 90)
            assert is_row_stochastic(view)
            assert_allclose(np.diag(view), 0.0)

    def test_zero_noise_is_block_diagonal(self):
        ds = gen_block_toy((4, 5, 6), base_noise=(0.0, 0.0), cross_block_noise=[{}, {}], seed=1)
        for view in ds.views:
            off_block = ds.truth[:, np.newaxis] != ds.truth[np.newaxis, :]
            assert np.all(view[off_block] == 0.0)
            assert is_row_stochastic(view)

    def test_overrides_are_symmetric_and_bounded(self):
        ds = gen_block_toy((20, 20, 20), base_noise=(0.0, 0.0), cross_block_noise=[{(0, 1): 0.5}, {}], seed=2)
        view = ds.views[0]
        assert np.any(view[:20, 20:40] > 0)
        assert np.any(view[20:40, :20] > 0)
        assert np.all(view[:20, 40:] == 0.0)
        assert np.all(view[40:, :40] == 0.0)
        assert np.all(ds.views[1][:20, 20:40] == 0.0)

    def test_seed_determinism(self):
        first, second = gen_block_toy(seed=5), gen_block_toy(seed=5)
        for a, b in zip(first.views, second.views):
            assert_array_equal(a, b)
        assert not np.array_equal(first.views[0], gen_block_toy(seed=6).views[0])

    def test_mild_variant(self):
        ds = gen_block_toy(cross_block_noise=MILD_OVERRIDES, seed=0)
        assert ds.n_views == 2

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"block_sizes": (0, 3)},
            {"base_noise": (-0.1, 0.2)},
            {"base_noise": (0.5, 0.5), "cross_block_noise": [{(0, 0): 0.5}, {}]},
            {"base_noise": (0.5, 0.5), "cross_block_noise": [{}]},
        ],
    )
    def test_invalid_arguments(self, kwargs):
        with pytest.raises(InvalidInputError):
            gen_block_toy(**kwargs)


class TestGaussian:
    def test_shapes_and_truth(self, blobs):
        assert blobs.kind == "features"
        assert blobs.n_samples == 60
        assert all(view.shape == (60, 2) for view in blobs.views)
        assert_array_equal(np.bincount(blobs.truth), [30, 30])

    def test_shared_noise_gives_identical_views(self):
        ds = gen_two_view_gaussian(20, separation=(3.0, 3.0), noise_scale=(1.0, 1.0), seed=4, share_noise=True)
        assert_array_equal(ds.views[0], ds.views[1])

    def test_centre_separation(self):
        ds = gen_two_view_gaussian(2000, separation=(6.0, 2.0), noise_scale=(0.5, 1.0), seed=0)
        for view, expected in zip(ds.views, (3.0, 2.0)):
            means = [view[ds.truth == c].mean(axis=0) for c in range(2)]
            assert np.linalg.norm(means[0] - means[1]) == pytest.approx(expected, abs=0.15)

    def test_large_separation_is_trivial_for_clr(self):
        ds = gen_two_view_gaussian(25, separation=(30.0, 30.0), seed=1)
        for graph in ds.to_graphs(10):
            assert acc(clr_single(graph, ClrConfig(2)).labels, ds.truth) == 1.0

    def test_invalid_arguments(self):
        with pytest.raises(InvalidInputError):
            gen_two_view_gaussian(10, separation=(1.0,), noise_scale=(1.0, 1.0))
        with pytest.raises(InvalidInputError):
            gen_two_view_gaussian(10, n_clusters=1)


class TestMultiViewDataset:
    def test_inconsistent_views(self):
        with pytest.raises(DatasetError, match="samples"):
            MultiViewDataset(views=[np.zeros((3, 2)), np.zeros((4, 2))], kind="features", n_clusters=2)

    def test_graph_views_must_be_square(self):
        with pytest.raises(DatasetError):
            MultiViewDataset(views=[np.zeros((3, 2))], kind="graphs", n_clusters=2)

    def test_missing_truth(self):
        ds = MultiViewDataset(views=[np.eye(3)], kind="graphs", n_clusters=2)
        with pytest.raises(DatasetError, match="ground-truth"):
            ds.require_truth()

    def test_feature_views_become_knn_graphs(self, blobs):
        graphs = blobs.to_graphs(5)
        assert all(graph.shape == (60, 60) and is_row_stochastic(graph) for graph in graphs)
        assert all(np.all(np.count_nonzero(graph, axis=1) <= 5) for graph in graphs)


class TestStorage:
    def test_round_trip(self, tmp_path, block_toy):
        manifest = save_dataset(block_toy, tmp_path / "toy")
        loaded = load_dataset(manifest)
        assert loaded.kind == "graphs"
        assert loaded.n_clusters == 3
        for a, b in zip(block_toy.views, loaded.views):
            assert_array_equal(a, b)
        assert_array_equal(loaded.truth, block_toy.truth)

    def test_manifest_keys(self, tmp_path, blobs):
        manifest = save_dataset(blobs, tmp_path)
        lines = manifest.read_text(encoding="utf-8").splitlines()
        assert lines == ["kind=features", "clusters=2", "view=view_1.txt", "view=view_2.txt", "truth=truth.txt"]

    def test_directory_is_accepted(self, tmp_path, blobs):
        save_dataset(blobs, tmp_path)
        assert load_dataset(tmp_path).n_views == 2

    def test_without_truth(self, tmp_path):
        ds = MultiViewDataset(views=[np.eye(4)], kind="graphs", n_clusters=2)
        loaded = load_dataset(save_dataset(ds, tmp_path))
        assert loaded.truth is None
        with pytest.raises(DatasetError):
            loaded.require_truth()

    def test_inconsistent_sizes_name_both(self, tmp_path):
        np.savetxt(tmp_path / "a.txt", np.eye(3))
        np.savetxt(tmp_path / "b.txt", np.eye(4))
        (tmp_path / "manifest.txt").write_text("kind=graphs\nclusters=2\nview=a.txt\nview=b.txt\n")
        with pytest.raises(DatasetError) as info:
            load_dataset(tmp_path / "manifest.txt")
        assert "N=3" in str(info.value) and "N=4" in str(info.value)

    def test_repeated_key_keeps_last_value(self, tmp_path):
        np.savetxt(tmp_path / "v.txt", np.eye(4))
        (tmp_path / "manifest.txt").write_text("kind=graphs\nclusters=2\nclusters=3\nview=v.txt\n")
        assert load_dataset(tmp_path / "manifest.txt").n_clusters == 3

    def test_missing_file(self, tmp_path):
        (tmp_path / "manifest.txt").write_text("kind=graphs\nclusters=2\nview=missing.txt\n")
        with pytest.raises(DatasetError, match="missing.txt"):
            load_dataset(tmp_path / "manifest.txt")

    def test_malformed_row_is_located(self, tmp_path):
        (tmp_path / "v.txt").write_text("0 1\n1 x\n")
        (tmp_path / "manifest.txt").write_text("kind=graphs\nclusters=2\nview=v.txt\n")
        with pytest.raises(DatasetError) as info:
            load_dataset(tmp_path / "manifest.txt")
        assert info.value.row == 2
        assert "v.txt" in str(info.value)

    @pytest.mark.parametrize(
        "text",
        ["kind=images\nclusters=2\nview=v.txt\n", "kind=graphs\nclusters=two\nview=v.txt\n", "kind=graphs\nclusters=2\n"],
    )
    def test_invalid_manifest(self, tmp_path, text):
        np.savetxt(tmp_path / "v.txt", np.eye(3))
        (tmp_path / "manifest.txt").write_text(text)
        with pytest.raises(DatasetError):
            load_dataset(tmp_path / "manifest.txt")
