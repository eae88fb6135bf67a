"""Dataset z-scoring and centralised sparsity tests."""

import numpy as np
import pytest
from sklearn.base import clone

from diffsparsity import (
    CentralizedSparsity,
    DegenerateDatasetError,
    InsufficientSamplesError,
    centralized_column,
    centralized_sparsity,
    fit_stats,
)
from diffsparsity.exceptions import BadShapeError


class TestFitStats:
    def test_hand_example(self):
        data = fit_stats(np.array([[0.0, 2.0], [1.0, 3.0]]))
        assert data.means.tolist() == [1.0, 2.0]
        assert data.stds == pytest.approx([np.sqrt(2), np.sqrt(2)])

    def test_constant_rows(self):
        with pytest.warns(UserWarning, match="constant"):
            data = fit_stats(np.full((2, 2), 5.0))
        assert data.means.tolist() == [5.0, 5.0]
        assert data.stds.tolist() == [0.0, 0.0]
        assert data.n_degenerate_rows == 2

    def test_mixed_rows(self):
        with pytest.warns(UserWarning):
            data = fit_stats(np.array([[1.0, 1.0, 1.0], [0.0, 1.0, 2.0]]))
        assert data.means.tolist() == [1.0, 1.0]
        assert data.stds.tolist() == [0.0, 1.0]

    def test_single_column_rejected(self):
        with pytest.raises(InsufficientSamplesError):
            fit_stats(np.array([[1.0], [2.0]]))

    def test_non_matrix_rejected(self):
        with pytest.raises(BadShapeError):
            fit_stats(np.arange(4.0))


class TestCentralizedSparsity:
    def test_equal_magnitudes_give_zero(self):
        data = fit_stats(np.array([[0.0, 2.0], [1.0, 3.0]]))
        assert centralized_sparsity(data, 0, 1).value == pytest.approx(0.0, abs=1e-15)
        assert centralized_sparsity(data, 1, 1).value == pytest.approx(0.0, abs=1e-15)

    def test_constant_row_dropped(self):
        X = np.array([[1.0, 1.0, 1.0], [0.0, 1.0, 2.0], [5.0, 1.0, 3.0]])
        with pytest.warns(UserWarning):
            data = fit_stats(X)
        out = centralized_sparsity(data, 0, 1)
        assert out.n == 2  # the sigma = 0 row is gone
        assert data.n_degenerate_rows == 1

    def test_all_rows_constant(self):
        with pytest.warns(UserWarning):
            data = fit_stats(np.ones((3, 4)))
        with pytest.raises(DegenerateDatasetError):
            centralized_sparsity(data, 0, 1)

    def test_column_out_of_range(self):
        data = fit_stats(np.array([[0.0, 2.0], [1.0, 3.0]]))
        with pytest.raises(BadShapeError):
            centralized_sparsity(data, 2, 1)

    def test_fitted_columns_have_unit_stats(self):
        rng = np.random.default_rng(0)
        X = rng.normal(3.0, 2.5, size=(12, 40)) * rng.uniform(0.5, 2.0, size=(12, 1))
        data = fit_stats(X)
        centred = np.stack([centralized_column(data, j) for j in range(40)], axis=1)
        assert np.allclose(centred.mean(axis=1), 0.0, atol=1e-12)
        assert np.allclose(centred.std(axis=1, ddof=1), 1.0, atol=1e-12)

    def test_affine_rescaling_of_a_row_is_invisible(self):
        rng = np.random.default_rng(1)
        X = rng.exponential(1.0, size=(8, 25))
        Y = X.copy()
        Y[3] = 4.0 * Y[3] + 11.0
        a = fit_stats(X)
        b = fit_stats(Y)
        for j in (0, 7, 24):
            assert centralized_column(a, j) == pytest.approx(centralized_column(b, j), abs=1e-10)
            assert centralized_sparsity(a, j, 2).value == pytest.approx(
                centralized_sparsity(b, j, 2).value, abs=1e-12
            )


class TestCentralizedSparsityEstimator:
    def test_fit_transform_shapes(self):
        rng = np.random.default_rng(2)
        X = rng.normal(size=(30, 6))  # samples x features
        est = CentralizedSparsity(order=2)
        Z = est.fit_transform(X)
        assert Z.shape == (30, 6)
        assert np.allclose(Z.mean(axis=0), 0.0, atol=1e-12)
        assert np.allclose(Z.std(axis=0, ddof=1), 1.0, atol=1e-12)

    def test_constant_feature_dropped_in_transform(self):
        rng = np.random.default_rng(3)
        X = rng.normal(size=(20, 4))
        X[:, 2] = 9.0
        est = CentralizedSparsity()
        with pytest.warns(UserWarning):
            est.fit(X)
        assert est.transform(X).shape == (20, 3)

    def test_score_samples_matches_function_path(self):
        rng = np.random.default_rng(4)
        X = rng.exponential(1.0, size=(10, 7))
        est = CentralizedSparsity(order=3).fit(X)
        scores = est.score_samples(X)
        data = fit_stats(X.T)
        expected = [centralized_sparsity(data, j, 3).value for j in range(10)]
        assert scores == pytest.approx(expected, abs=1e-14)

    def test_sklearn_params_roundtrip(self):
        est = CentralizedSparsity(order=5, method="naive")
        assert est.get_params() == {"order": 5, "method": "naive"}
        cloned = clone(est)
        assert cloned.get_params() == est.get_params()

    def test_unfitted_raises(self):
        with pytest.raises(RuntimeError):
            CentralizedSparsity().transform(np.ones((2, 2)))
