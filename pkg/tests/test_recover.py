"""Projection, feasible-set parametrization, and SPSA recovery tests."""

import numpy as np
import pytest
from sklearn.base import clone

from diffsparsity import (
    BadShapeError,
    SpsaConfig,
    SpsaReconstructor,
    gaussian_projection,
    mse,
    parametrize_feasible,
    spsa_recover,
)
from diffsparsity.exceptions import DegenerateProjectionError
from diffsparsity.recover import ProjectionSetup


class TestGaussianProjection:
    def test_shape_and_rank(self):
        setup = gaussian_projection(10, 100, seed=7)
        assert setup.A.shape == (10, 100)
        assert np.linalg.matrix_rank(setup.A) == 10

    def test_square_case_invertible(self):
        setup = gaussian_projection(5, 5, seed=1)
        assert setup.A.shape == (5, 5)
        assert np.linalg.matrix_rank(setup.A) == 5

    def test_seeded_determinism(self):
        a = gaussian_projection(4, 9, seed=3)
        b = gaussian_projection(4, 9, seed=3)
        assert np.array_equal(a.A, b.A)

    def test_wide_only(self):
        with pytest.raises(BadShapeError):
            gaussian_projection(6, 5, seed=0)
        with pytest.raises(BadShapeError):
            gaussian_projection(0, 5, seed=0)

    def test_project_validates_length(self):
        setup = gaussian_projection(3, 8, seed=0)
        with pytest.raises(BadShapeError):
            setup.project(np.ones(7))


class TestParametrizeFeasible:
    def test_ones_row(self):
        setup = ProjectionSetup(A=np.array([[1.0, 1.0]]), m=1, n=2, seed=0)
        chart = parametrize_feasible(setup, np.array([2.0]))
        assert chart.x_min == pytest.approx([1.0, 1.0])
        direction = chart.V[:, 0] * np.sqrt(2)
        assert sorted(direction.tolist()) == pytest.approx([-1.0, 1.0])

    def test_square_system_has_empty_null_space(self):
        setup = gaussian_projection(6, 6, seed=2)
        x = np.arange(1.0, 7.0)
        chart = parametrize_feasible(setup, setup.A @ x)
        assert chart.dim == 0
        assert chart.x_min == pytest.approx(x, abs=1e-9)

    def test_residual_and_orthonormality(self):
        setup = gaussian_projection(3, 6, seed=5)
        y = np.random.default_rng(0).normal(size=3)
        chart = parametrize_feasible(setup, y)
        assert np.linalg.norm(setup.A @ chart.x_min - y) <= 1e-9 * (1 + np.linalg.norm(y))
        assert np.abs(setup.A @ chart.V).max() <= 1e-9
        assert chart.V.T @ chart.V == pytest.approx(np.eye(3), abs=1e-9)

    def test_least_norm_property(self):
        # any feasible point decomposes as x_min plus a null component
        setup = gaussian_projection(4, 10, seed=8)
        rng = np.random.default_rng(1)
        x_any = rng.normal(size=10)
        chart = parametrize_feasible(setup, setup.A @ x_any)
        assert np.linalg.norm(chart.x_min) <= np.linalg.norm(x_any) + 1e-12
        z = chart.V.T @ (x_any - chart.x_min)
        assert chart.point(z) == pytest.approx(x_any, abs=1e-8)

    def test_rank_deficient_rejected(self):
        A = np.array([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0]])
        setup = ProjectionSetup(A=A, m=2, n=3, seed=0)
        with pytest.raises(DegenerateProjectionError):
            parametrize_feasible(setup, np.array([1.0, 2.0]))

    def test_measurement_length_checked(self):
        setup = gaussian_projection(3, 6, seed=5)
        with pytest.raises(BadShapeError):
            parametrize_feasible(setup, np.ones(4))


class TestSpsaConfig:
    def test_defaults_valid(self):
        cfg = SpsaConfig()
        assert cfg.iterations == 2000 and cfg.restarts == 3

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"iterations": 0},
            {"restarts": 0},
            {"alpha": 0.5},
            {"alpha": 1.2},
            {"gamma": 0.0},
            {"gamma": 0.5},
            {"c": 0.0},
            {"a": -1.0},
            {"step_scale": 0.0},
        ],
    )
    def test_invalid_configs(self, kwargs):
        with pytest.raises(ValueError):
            SpsaConfig(**kwargs)


def _instance(n, k, m, seed):
    rng = np.random.default_rng(seed)
    x0 = np.zeros(n)
    x0[rng.choice(n, k, replace=False)] = rng.exponential(1.0, k)
    setup = gaussian_projection(m, n, seed=seed + 1)
    return setup, setup.project(x0), x0


class TestSpsaRecover:
    def test_square_system_is_exact(self):
        setup = gaussian_projection(20, 20, seed=4)
        x0 = np.random.default_rng(2).normal(size=20)
        result = spsa_recover(setup, setup.A @ x0, order=3, x_true=x0)
        assert result.iterations_used == 0
        assert result.mse < 1e-18

    def test_feasibility_is_structural(self):
        setup, y, x0 = _instance(40, 4, 24, seed=10)
        cfg = SpsaConfig(iterations=150, restarts=2, seed=0)
        result = spsa_recover(setup, y, order=4, config=cfg)
        residual = np.linalg.norm(setup.A @ result.x_hat - y)
        assert residual <= 1e-6 * (1 + np.linalg.norm(y))

    def test_objective_never_below_least_norm_start(self):
        setup, y, x0 = _instance(30, 3, 18, seed=11)
        chart = parametrize_feasible(setup, y)
        from diffsparsity.fast import gds
        from diffsparsity.core import make_signal

        start = gds(make_signal(chart.x_min), 4).value
        cfg = SpsaConfig(iterations=50, restarts=1, seed=0)
        result = spsa_recover(setup, y, order=4, config=cfg)
        assert result.objective.value >= start

    def test_deterministic_given_seed(self):
        setup, y, _ = _instance(25, 3, 15, seed=12)
        cfg = SpsaConfig(iterations=120, restarts=2, seed=9)
        a = spsa_recover(setup, y, order=3, config=cfg)
        b = spsa_recover(setup, y, order=3, config=cfg)
        assert np.array_equal(a.x_hat, b.x_hat)
        assert a.objective.value == b.objective.value
        assert a.iterations_used == b.iterations_used == 240

    def test_recovers_easy_instance(self):
        setup, y, x0 = _instance(30, 2, 26, seed=13)
        cfg = SpsaConfig(iterations=1200, restarts=2, seed=3)
        result = spsa_recover(setup, y, order=4, config=cfg, x_true=x0)
        assert result.mse < 1e-3 * np.mean(x0**2)

    def test_mse_none_without_truth(self):
        setup, y, _ = _instance(20, 2, 12, seed=14)
        cfg = SpsaConfig(iterations=30, restarts=1, seed=0)
        assert spsa_recover(setup, y, order=2, config=cfg).mse is None

    def test_zero_measurements_handled(self):
        setup = gaussian_projection(5, 12, seed=15)
        cfg = SpsaConfig(iterations=40, restarts=1, seed=0)
        result = spsa_recover(setup, np.zeros(5), order=2, config=cfg)
        assert np.linalg.norm(setup.A @ result.x_hat) <= 1e-6


class TestMse:
    def test_identity(self):
        assert mse([1.0, 2.0], [1.0, 2.0]) == 0.0

    def test_swap(self):
        assert mse([1.0, 0.0], [0.0, 1.0]) == 1.0

    def test_offset(self):
        assert mse([2.0, 2.0, 2.0], [0.0, 0.0, 0.0]) == 4.0

    def test_length_mismatch(self):
        with pytest.raises(BadShapeError):
            mse([1.0], [1.0, 2.0])


class TestSpsaReconstructor:
    def test_fit_predict_roundtrip(self):
        setup, y, x0 = _instance(24, 2, 20, seed=16)
        est = SpsaReconstructor(order=4, iterations=600, restarts=2, seed=5)
        est.fit(setup.A, y)
        assert est.coef_.shape == (24,)
        assert est.predict(setup.A) == pytest.approx(y, abs=1e-6)
        assert est.n_iter_ == 1200

    def test_sklearn_clone(self):
        est = SpsaReconstructor(order=3, iterations=77)
        params = clone(est).get_params()
        assert params["order"] == 3 and params["iterations"] == 77

    def test_predict_before_fit(self):
        with pytest.raises(RuntimeError):
            SpsaReconstructor().predict(np.ones((2, 3)))

    def test_shape_validation(self):
        with pytest.raises(BadShapeError):
            SpsaReconstructor().fit(np.ones((3, 4)), np.ones(2))
