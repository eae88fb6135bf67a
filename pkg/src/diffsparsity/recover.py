"""Sparse signal recovery from random projections by sparsity maximisation.

A length-N signal observed through M < N Gaussian measurements ``y = A x``
is recovered by searching the feasible set {x : A x = y} for the point whose
magnitudes are sparsest:

    maximise  S_p(|x|)   subject to   A x = y.

The feasible set is the affine space ``x(z) = x_min + V z`` where ``x_min``
is the least-norm solution and the columns of ``V`` are an orthonormal basis
of the null space of ``A``; searching in ``z`` keeps every iterate feasible
by construction, so the hard constraint never needs a penalty.

The search itself is simultaneous perturbation stochastic approximation
(SPSA): each iteration perturbs all coordinates at once along a random
+-1 direction and estimates the gradient from just two objective values,

    g_hat = [f(z + c_k d) - f(z - c_k d)] / (2 c_k) * d,

then ascends ``z <- z + a_k g_hat`` with decaying gains
``a_k = a / (k + 1 + A)^alpha`` and ``c_k = c / (k + 1)^gamma``.  The
objective is noisy near its maximum, so the best evaluated point (not the
last) is returned, across restarts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin

from .core import SparsityOrder, SparsityValue, _pairwise_power_sum, as_order
from .exceptions import BadShapeError, DegenerateProjectionError
from .fast import AUTO_FAST_MAX_ORDER, _even_value, _odd_value

__all__ = [
    "ProjectionSetup",
    "FeasibleParametrization",
    "SpsaConfig",
    "RecoveryResult",
    "gaussian_projection",
    "parametrize_feasible",
    "spsa_recover",
    "mse",
    "SpsaReconstructor",
]


@dataclass(frozen=True)
class ProjectionSetup:
    """An M x N compression matrix of i.i.d. standard normal entries."""

    A: np.ndarray
    m: int
    n: int
    seed: int

    def project(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.n,):
            raise BadShapeError(f"signal must have length {self.n}, got shape {x.shape}")
        return self.A @ x


@dataclass(frozen=True)
class FeasibleParametrization:
    """Affine chart of {x : A x = y}: x(z) = x_min + V z.

    ``x_min`` is the minimum-norm solution; the columns of ``V`` are an
    orthonormal null-space basis (empty when M = N).
    """

    x_min: np.ndarray
    V: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.V.shape[1])

    def point(self, z) -> np.ndarray:
        if self.dim == 0:
            return self.x_min
        return self.x_min + self.V @ np.asarray(z, dtype=np.float64)


@dataclass(frozen=True)
class SpsaConfig:
    """Gain schedules and budget for the stochastic sparsity maximiser.

    ``a=None`` auto-tunes the step gain so the first step moves about
    ``step_scale * ||x_min||``; ``A_stab=None`` uses 10% of the iteration
    budget.  ``track_iterates`` spends one extra objective evaluation per
    iteration to keep the best visited iterate (the gradient estimate itself
    always costs exactly two evaluations).
    """

    iterations: int = 2000
    a: float | None = None
    A_stab: float | None = None
    alpha: float = 0.602
    c: float = 0.05
    gamma: float = 0.101
    restarts: int = 3
    seed: int = 0
    step_scale: float = 0.1
    track_iterates: bool = True

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")
        if self.restarts < 1:
            raise ValueError(f"restarts must be >= 1, got {self.restarts}")
        if not 0.5 < self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0.5, 1], got {self.alpha}")
        if not 0.0 < self.gamma < 0.5:
            raise ValueError(f"gamma must lie in (0, 0.5), got {self.gamma}")
        if self.c <= 0.0:
            raise ValueError(f"perturbation size c must be > 0, got {self.c}")
        if self.a is not None and self.a <= 0.0:
            raise ValueError(f"gain a must be > 0 when given, got {self.a}")
        if self.step_scale <= 0.0:
            raise ValueError(f"step_scale must be > 0, got {self.step_scale}")


@dataclass(frozen=True)
class RecoveryResult:
    """Recovered signal, the sparsity it achieved, and bookkeeping."""

    x_hat: np.ndarray
    objective: SparsityValue
    mse: float | None
    iterations_used: int


def gaussian_projection(m: int, n: int, seed: int = 0) -> ProjectionSetup:
    """Draw a full-rank M x N standard normal projection matrix.

    Deterministic given ``seed``.  A rank-deficient draw has probability
    zero; if floating point ever produces one it is redrawn from the same
    stream.

    Raises:
        BadShapeError: unless ``1 <= m <= n``.
    """
    if not 1 <= m <= n:
        raise BadShapeError(f"need 1 <= M <= N, got M={m}, N={n}")
    rng = np.random.default_rng(seed)
    for _ in range(8):
        A = rng.standard_normal((m, n))
        if np.linalg.matrix_rank(A) == m:
            return ProjectionSetup(A=A, m=m, n=n, seed=seed)
    raise DegenerateProjectionError(f"could not draw a rank-{m} projection")


def parametrize_feasible(setup: ProjectionSetup, y) -> FeasibleParametrization:
    """Least-norm solution and orthonormal null-space basis of A x = y.

    Both come from one SVD of ``A``: with A = U diag(s) Wt, the least-norm
    solution is W[:, :r] (Ut y / s) and the null space is W[:, r:].

    Raises:
        DegenerateProjectionError: if A is rank deficient.
    """
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (setup.m,):
        raise BadShapeError(f"measurements must have length {setup.m}, got shape {y.shape}")
    U, s, Wt = np.linalg.svd(setup.A, full_matrices=True)
    cutoff = s[0] * max(setup.m, setup.n) * np.finfo(np.float64).eps if s.size else 0.0
    rank = int(np.count_nonzero(s > cutoff))
    if rank < setup.m:
        raise DegenerateProjectionError(
            f"projection has rank {rank} < M = {setup.m}; feasible set is not an affine chart"
        )
    x_min = Wt[:rank].T @ ((U.T @ y)[:rank] / s[:rank])
    V = Wt[rank:].T
    return FeasibleParametrization(x_min=x_min, V=V)


def _objective(order: SparsityOrder):
    """Sparsity of |x| as a plain float function, specialised per order.

    Integer orders up to the closed-form stability cap use the O(k^2 N)
    kernels; everything else falls back to the pairwise sum.  The all-zero
    vector (only reachable when y = 0) scores 0.
    """
    if order.is_integer and order.p <= AUTO_FAST_MAX_ORDER:
        k = order.parity_k
        if order.is_even:

            def value(x: np.ndarray) -> float:
                c = np.abs(x)
                peak = c.max()
                if peak == 0.0:
                    return 0.0
                return _even_value(c / peak, k)

        else:

            def value(x: np.ndarray) -> float:
                c = np.sort(np.abs(x))
                peak = c[-1]
                if peak == 0.0:
                    return 0.0
                return _odd_value(c / peak, k)

    else:
        p = order.p

        def value(x: np.ndarray) -> float:
            c = np.sort(np.abs(x))
            peak = c[-1]
            if peak == 0.0:
                return 0.0
            c = c / peak
            return _pairwise_power_sum(c, p) / (c.size * float(np.sum(c**p)))

    return value


def spsa_recover(setup: ProjectionSetup, y, order=4, config: SpsaConfig | None = None,
                 x_true=None) -> RecoveryResult:
    """Recover a sparse signal from ``y = A x`` by SPSA over the feasible set.

    The first restart starts at the least-norm solution (z = 0); later
    restarts jitter around it.  The best objective value ever evaluated --
    perturbation probes, tracked iterates, and restart endpoints -- selects
    the returned point, so the result is never worse than the least-norm
    start.  Fully deterministic given the config seed.

    Args:
        setup: projection matrix wrapper.
        y: length-M measurement vector.
        order: sparsity order to maximise.
        config: gain schedules and budget; defaults to :class:`SpsaConfig`.
        x_true: optional ground truth; when given, the result carries the
            mean squared reconstruction error.

    Returns:
        :class:`RecoveryResult`; ``iterations_used = 0`` when M = N (the
        feasible point is unique).
    """
    cfg = config if config is not None else SpsaConfig()
    order = as_order(order)
    chart = parametrize_feasible(setup, y)
    objective = _objective(order)
    dim = chart.dim

    def finish(z_best, f_best, iters):
        x_hat = chart.point(z_best)
        result_mse = mse(x_true, x_hat) if x_true is not None else None
        return RecoveryResult(
            x_hat=x_hat,
            objective=SparsityValue(f_best, order, setup.n),
            mse=result_mse,
            iterations_used=iters,
        )

    z0 = np.zeros(dim)
    best_z = z0
    best_f = objective(chart.point(z0))
    if dim == 0:
        return finish(best_z, best_f, 0)

    rng = np.random.default_rng(cfg.seed)
    x_scale = float(np.linalg.norm(chart.x_min)) or 1.0
    stability = cfg.A_stab if cfg.A_stab is not None else 0.1 * cfg.iterations
    x_min, V = chart.x_min, chart.V
    f = lambda z: objective(x_min + V @ z)

    total_iterations = 0
    for restart in range(cfg.restarts):
        if restart == 0:
            z = z0.copy()
        else:
            z = rng.normal(0.0, cfg.step_scale * x_scale / np.sqrt(dim), dim)
        if cfg.a is not None:
            gain_a = cfg.a
        else:
            # aim the first step at ~step_scale * ||x_min|| using probe gradients
            probe_norms = []
            for _ in range(5):
                delta = rng.choice((-1.0, 1.0), dim)
                ghat = (f(z + cfg.c * delta) - f(z - cfg.c * delta)) / (2 * cfg.c) * delta
                probe_norms.append(np.linalg.norm(ghat))
            mean_norm = float(np.mean(probe_norms))
            gain_a = cfg.step_scale * x_scale * (stability + 1.0) ** cfg.alpha / (mean_norm or 1.0)

        for k in range(cfg.iterations):
            a_k = gain_a / (k + 1.0 + stability) ** cfg.alpha
            c_k = cfg.c / (k + 1.0) ** cfg.gamma
            delta = rng.choice((-1.0, 1.0), dim)
            z_plus = z + c_k * delta
            z_minus = z - c_k * delta
            f_plus = f(z_plus)
            f_minus = f(z_minus)
            if f_plus > best_f:
                best_f, best_z = f_plus, z_plus
            if f_minus > best_f:
                best_f, best_z = f_minus, z_minus
            z = z + a_k * (f_plus - f_minus) / (2 * c_k) * delta
            if cfg.track_iterates:
                f_z = f(z)
                if f_z > best_f:
                    best_f, best_z = f_z, z.copy()
        total_iterations += cfg.iterations
        if not cfg.track_iterates:
            f_z = f(z)
            if f_z > best_f:
                best_f, best_z = f_z, z.copy()

    return finish(best_z, best_f, total_iterations)


def mse(x_true, x_hat) -> float:
    """Mean squared error between two equal-length vectors."""
    x_true = np.asarray(x_true, dtype=np.float64)
    x_hat = np.asarray(x_hat, dtype=np.float64)
    if x_true.shape != x_hat.shape:
        raise BadShapeError(f"length mismatch: {x_true.shape} vs {x_hat.shape}")
    return float(np.mean((x_true - x_hat) ** 2))


class SpsaReconstructor(RegressorMixin, BaseEstimator):
    """Estimator-style wrapper around :func:`spsa_recover`.

    ``fit(A, y)`` treats the design matrix as the compression operator and
    the targets as measurements, mirroring other sparse coders: the
    recovered signal lands in ``coef_`` and ``predict(A)`` returns ``A @
    coef_``.

    Parameters mirror :class:`SpsaConfig` plus the sparsity ``order``.
    """

    def __init__(self, order=4, iterations=2000, a=None, A_stab=None, alpha=0.602,
                 c=0.05, gamma=0.101, restarts=3, seed=0, step_scale=0.1,
                 track_iterates=True):
        self.order = order
        self.iterations = iterations
        self.a = a
        self.A_stab = A_stab
        self.alpha = alpha
        self.c = c
        self.gamma = gamma
        self.restarts = restarts
        self.seed = seed
        self.step_scale = step_scale
        self.track_iterates = track_iterates

    def _config(self) -> SpsaConfig:
        return SpsaConfig(
            iterations=self.iterations,
            a=self.a,
            A_stab=self.A_stab,
            alpha=self.alpha,
            c=self.c,
            gamma=self.gamma,
            restarts=self.restarts,
            seed=self.seed,
            step_scale=self.step_scale,
            track_iterates=self.track_iterates,
        )

    def fit(self, X, y):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if X.ndim != 2 or y.shape != (X.shape[0],):
            raise BadShapeError(
                f"expected X of shape (M, N) and y of shape (M,), got {X.shape} and {y.shape}"
            )
        setup = ProjectionSetup(A=X, m=X.shape[0], n=X.shape[1], seed=self.seed)
        result = spsa_recover(setup, y, order=self.order, config=self._config())
        self.coef_ = result.x_hat
        self.objective_ = result.objective
        self.n_iter_ = result.iterations_used
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        if not hasattr(self, "coef_"):
            raise RuntimeError("SpsaReconstructor instance is not fitted yet")
        X = np.asarray(X, dtype=np.float64)
        return X @ self.coef_
