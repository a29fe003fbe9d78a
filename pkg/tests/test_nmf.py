import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from dataset.synthetic import gen_two_view_gaussian
from learners.nmf_learner import (
    NmfConfig,
    NmfLearner,
    NmfState,
    assignment_costs,
    nmf_iw,
    nmf_multiview,
    update_centroids,
)
from optimizer.weight_schemes import WeightScheme, preset_grid
from utils.errors import InvalidInputError
from utils.metrics import acc, evaluate


class TestSteps:
    def test_centroids_are_cluster_means(self, rng):
        X = rng.normal(size=(12, 3))
        labels = np.repeat([0, 1, 2], 4)
        (F,) = update_centroids([X], labels, 3)
        assert_allclose(F, [X[labels == c].mean(axis=0) for c in range(3)])

    def test_empty_cluster_is_rejected(self, rng):
        with pytest.raises(InvalidInputError):
            update_centroids([rng.normal(size=(4, 2))], np.array([0, 0, 1, 1]), 3)

    def test_assignment_costs(self, rng):
        views = [rng.normal(size=(6, 2)), rng.normal(size=(6, 4))]
        centroids = [rng.normal(size=(3, 2)), rng.normal(size=(3, 4))]
        alpha = np.array([0.3, 0.7])
        expected = np.array(
            [
                [sum(a * np.sum((X[i] - F[c]) ** 2) for a, X, F in zip(alpha, views, centroids)) for c in range(3)]
                for i in range(6)
            ]
        )
        assert_allclose(assignment_costs(views, centroids, alpha), expected, atol=1e-12)

    def test_weighted_loss_never_exceeds_warm_start(self, rng):
        views = [rng.normal(size=(40, 2)), rng.normal(size=(40, 3))]
        alpha = np.array([0.6, 0.4])
        learner = NmfLearner(NmfConfig(3, seed=0))
        labels = rng.integers(0, 3, size=40)
        labels[:3] = [0, 1, 2]
        start = NmfState(labels, update_centroids(views, labels, 3))
        state = learner.solve_weighted(views, alpha, warm_start=start)
        assert alpha @ learner.per_view_losses(state, views) <= alpha @ learner.per_view_losses(start, views) + 1e-12

    def test_empty_clusters_are_repaired(self):
        X = np.array([[0.0], [0.1], [0.2], [10.0], [10.1], [10.2]])
        learner = NmfLearner(NmfConfig(3, seed=0))
        start = NmfState(np.zeros(6, dtype=int), [np.zeros((3, 1))])
        state = learner.solve_weighted([X], np.ones(1), warm_start=start)
        assert np.all(np.bincount(state.labels, minlength=3) > 0)

    def test_config_validation(self):
        with pytest.raises(InvalidInputError):
            NmfConfig(1)
        with pytest.raises(InvalidInputError):
            NmfConfig(2, restarts=0)


class TestNmfIw:
    def test_separated_blobs(self):
        ds = gen_two_view_gaussian(50, separation=(12.0, 12.0), seed=0)
        result = nmf_iw(ds.views[:1], 2, p=2.0, seed=0)
        assert acc(result.labels, ds.truth) == 1.0
        assert_allclose(result.G.sum(axis=1), 1.0)

    def test_restarts_are_reproducible(self, blobs):
        first = nmf_iw(blobs.views, 2, p=1.0, seed=11)
        second = nmf_iw(blobs.views, 2, p=1.0, seed=11)
        assert_array_equal(first.labels, second.labels)
        assert_allclose(first.alpha, second.alpha)

    def test_identical_views_keep_uniform_weights(self, blobs):
        view = blobs.views[0]
        result = nmf_multiview([view, view.copy()], WeightScheme.iw(0.5), NmfConfig(2, restarts=3, seed=0))
        for weights in result.run.weight_history:
            assert_allclose(weights, [0.5, 0.5])

    @pytest.mark.slow
    def test_noisy_view_is_down_weighted(self):
        multi, single = [], []
        for seed in range(5):
            ds = gen_two_view_gaussian(100, separation=(4.0, 0.8), noise_scale=(1.0, 5.0), seed=seed)
            result = nmf_iw(ds.views, 2, p=0.5, seed=seed)
            assert result.alpha[0] > result.alpha[1]
            multi.append(acc(result.labels, ds.truth))
            single.append(
                max(acc(nmf_iw([view], 2, p=2.0, seed=seed).labels, ds.truth) for view in ds.views)
            )
        assert np.mean(multi) >= np.mean(single) - 0.02

    @pytest.mark.slow
    def test_best_preset_p_matches_or_beats_equal_weights(self):
        wins = 0
        for seed in range(10):
            ds = gen_two_view_gaussian(50, separation=(4.0, 0.8), noise_scale=(1.0, 5.0), seed=seed)
            equal = nmf_multiview(ds.views, WeightScheme.equal(), NmfConfig(2, seed=seed))
            baseline = evaluate(equal.labels, ds.truth).total
            best = max(
                evaluate(nmf_iw(ds.views, 2, p=p, seed=seed).labels, ds.truth).total
                for p in preset_grid("iw")
            )
            wins += int(best >= baseline)
        assert wins >= 7
