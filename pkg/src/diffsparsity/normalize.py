"""Sparsity of z-scored datasets.

Differential sparsity compares coefficients against each other, which only
makes sense when they are commensurate.  When they are not (different units,
different scales per coefficient), each coefficient row is centralised to
zero mean and unit standard deviation across a dataset of sample columns
before the metric is applied:

    x_hat[i, j] = (x[i, j] - mu_i) / sigma_i,

with ``mu_i`` the row mean and ``sigma_i`` the row sample standard deviation
(n - 1 divisor).  The centralised sparsity of column ``j`` is the sparsity of
the magnitudes of ``x_hat[:, j]``.

Rows with ``sigma_i = 0`` carry no distributional information and cannot be
z-scored; they are dropped from the centralised vector (a UserWarning with
the count is emitted at fit time).

Centralised entries can be negative; absolute values are taken before the
metric, consistent with the magnitude convention used everywhere else.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .core import SparsityValue, as_order, make_signal
from .exceptions import (
    BadShapeError,
    DegenerateDatasetError,
    InsufficientSamplesError,
)
from .fast import gds

__all__ = [
    "DatasetMatrix",
    "fit_stats",
    "centralized_column",
    "centralized_sparsity",
    "CentralizedSparsity",
]


@dataclass(frozen=True)
class DatasetMatrix:
    """An N x n dataset (rows = coefficients, columns = samples) with row stats."""

    entries: np.ndarray
    means: np.ndarray
    stds: np.ndarray

    @property
    def n_coefficients(self) -> int:
        return self.entries.shape[0]

    @property
    def n_samples(self) -> int:
        return self.entries.shape[1]

    @property
    def live_rows(self) -> np.ndarray:
        """Boolean mask of rows with non-zero spread."""
        return self.stds > 0.0

    @property
    def n_degenerate_rows(self) -> int:
        return int(np.count_nonzero(~self.live_rows))


def fit_stats(X) -> DatasetMatrix:
    """Per-row mean and sample standard deviation of a coefficient dataset.

    Args:
        X: N x n array, rows = coefficients, columns = samples; needs n >= 2.

    Raises:
        InsufficientSamplesError: with fewer than two sample columns.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise BadShapeError(f"dataset must be a 2-D matrix, got shape {X.shape}")
    if X.shape[1] < 2:
        raise InsufficientSamplesError(
            f"sample standard deviation needs n >= 2 columns, got {X.shape[1]}"
        )
    means = X.mean(axis=1)
    stds = X.std(axis=1, ddof=1)
    if np.count_nonzero(stds > 0.0) < X.shape[0]:
        warnings.warn(
            f"{int(np.sum(stds == 0.0))} constant coefficient row(s) cannot be "
            "z-scored and will be dropped from centralised vectors",
            UserWarning,
            stacklevel=2,
        )
    return DatasetMatrix(entries=X, means=means, stds=stds)


def centralized_column(dataset: DatasetMatrix, j: int) -> np.ndarray:
    """Z-scored values of column ``j`` over the rows with non-zero spread."""
    if not 0 <= j < dataset.n_samples:
        raise BadShapeError(
            f"column index {j} out of range for {dataset.n_samples} samples"
        )
    live = dataset.live_rows
    if not live.any():
        raise DegenerateDatasetError("every coefficient row is constant")
    column = dataset.entries[live, j]
    return (column - dataset.means[live]) / dataset.stds[live]


def centralized_sparsity(dataset: DatasetMatrix, j: int, order=1, method="auto") -> SparsityValue:
    """Sparsity of the z-scored magnitudes of dataset column ``j``.

    The result's ``n`` is the number of retained (non-constant) rows.
    """
    values = centralized_column(dataset, j)
    return gds(make_signal(values), as_order(order), method=method)


class CentralizedSparsity(TransformerMixin, BaseEstimator):
    """Z-scoring transformer that scores sample sparsity after centralisation.

    Follows the scikit-learn convention that ``X`` is (n_samples,
    n_features), i.e. the transpose of :func:`fit_stats`'s coefficient
    matrix: features are coefficients, each sample row is one signal.

    Parameters
    ----------
    order : float, default=1
        Sparsity order applied by :meth:`score_samples`.
    method : str, default="auto"
        Evaluation path passed through to :func:`diffsparsity.fast.gds`.
    """

    def __init__(self, order=1, method="auto"):
        self.order = order
        self.method = method

    def fit(self, X, y=None):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2:
            raise BadShapeError(f"X must be 2-D (n_samples, n_features), got {X.shape}")
        self.dataset_ = fit_stats(X.T)
        self.n_features_in_ = X.shape[1]
        return self

    def _check_fitted(self):
        if not hasattr(self, "dataset_"):
            raise RuntimeError("CentralizedSparsity instance is not fitted yet")

    def transform(self, X):
        """Z-score samples, dropping constant features learned at fit time."""
        self._check_fitted()
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features_in_:
            raise BadShapeError(
                f"X must have {self.n_features_in_} features, got shape {X.shape}"
            )
        live = self.dataset_.live_rows
        if not live.any():
            raise DegenerateDatasetError("every feature is constant")
        return (X[:, live] - self.dataset_.means[live]) / self.dataset_.stds[live]

    def score_samples(self, X) -> np.ndarray:
        """Centralised sparsity of each sample row of ``X``."""
        transformed = self.transform(X)
        order = as_order(self.order)
        return np.array(
            [
                gds(make_signal(row), order, method=self.method).value
                for row in transformed
            ]
        )
