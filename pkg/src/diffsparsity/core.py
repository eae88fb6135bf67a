"""Differential sparsity of a signal, exact pairwise form.

A vector is sparse when its energy sits in few coefficients, which shows up
as large differences between sorted coefficient magnitudes.  The order-``p``
differential sparsity of a non-zero vector ``c`` with magnitudes sorted
ascending (``c_1 <= ... <= c_N``) is

    S_p(c) = ( sum_{i<j} (c_j - c_i)^p ) / ( N * sum_i c_i^p ),   p >= 1.

``S_p`` lives in ``[0, 1 - 1/N]``: 0 for constant vectors, ``1 - 1/N`` for a
single non-zero coefficient.  Order 1 coincides with the Gini index.  This
module holds the quadratic-cost reference implementation; see
:mod:`diffsparsity.fast` for the O(k^2 N) closed forms at integer orders.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import (
    BadOrderError,
    EmptyVectorError,
    NotSortedError,
    SparsityError,
    ZeroVectorError,
)

__all__ = [
    "SignalVector",
    "SparsityOrder",
    "SparsityValue",
    "make_signal",
    "gds_naive",
    "gini_index",
    "sparsity_bounds",
]


@dataclass(frozen=True)
class SparsityOrder:
    """Order ``p >= 1`` of the differential sparsity metric.

    For integer ``p`` the parity decomposition ``p = 2k`` or ``p = 2k + 1``
    is precomputed (``parity_k = p // 2``); it drives the closed-form
    evaluation paths.  Non-integer orders carry ``parity_k = None`` and only
    admit the pairwise reference path.
    """

    p: float
    parity_k: int | None = field(init=False, default=None)

    def __post_init__(self):
        p = float(self.p)
        if not np.isfinite(p) or p < 1.0:
            raise BadOrderError(f"sparsity order must be a real number >= 1, got {self.p!r}")
        object.__setattr__(self, "p", p)
        if p.is_integer():
            object.__setattr__(self, "parity_k", int(p) // 2)

    @property
    def is_integer(self) -> bool:
        return self.parity_k is not None

    @property
    def is_even(self) -> bool:
        return self.is_integer and int(self.p) % 2 == 0

    @property
    def is_odd(self) -> bool:
        return self.is_integer and int(self.p) % 2 == 1


def as_order(order) -> SparsityOrder:
    """Coerce an int/float/:class:`SparsityOrder` into a :class:`SparsityOrder`."""
    if isinstance(order, SparsityOrder):
        return order
    return SparsityOrder(order)


@dataclass(frozen=True)
class SignalVector:
    """Non-negative coefficient magnitudes, normally sorted ascending.

    Instances are immutable: the coefficient array is made read-only at
    construction, so values can be shared freely across threads.  Metric
    operations require ``sorted=True`` and never re-sort; use
    :func:`make_signal` to build a sorted vector from raw signed data.
    """

    coeffs: np.ndarray
    sorted: bool = True

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.float64)
        if c.ndim != 1:
            c = c.reshape(-1)
        if c.size == 0:
            raise EmptyVectorError("signal vector must contain at least one coefficient")
        if not np.all(np.isfinite(c)):
            raise SparsityError("signal coefficients must be finite")
        if np.any(c < 0):
            raise SparsityError(
                "SignalVector holds magnitudes; negative entries are not allowed "
                "(use make_signal to take absolute values)"
            )
        if self.sorted and c.size > 1 and np.any(np.diff(c) < 0):
            raise NotSortedError("coefficients are not in ascending order")
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def n(self) -> int:
        return int(self.coeffs.size)

    @property
    def peak(self) -> float:
        """Largest magnitude (the last entry when sorted)."""
        return float(self.coeffs[-1] if self.sorted else self.coeffs.max())

    @property
    def is_zero(self) -> bool:
        return self.peak == 0.0

    def require_sorted(self) -> np.ndarray:
        if not self.sorted:
            raise NotSortedError("operation requires an ascending-sorted SignalVector")
        return self.coeffs

    def __len__(self) -> int:
        return self.n


@dataclass(frozen=True)
class SparsityValue:
    """A sparsity measurement: the value, the order used, and the length."""

    value: float
    order: SparsityOrder
    n: int

    def __float__(self) -> float:
        return self.value


def make_signal(raw) -> SignalVector:
    """Build a :class:`SignalVector` from raw signed coefficients.

    Signs carry no sparsity information, so absolute values are taken and
    sorted ascending once here; downstream operations never re-sort.

    Raises:
        EmptyVectorError: if ``raw`` has no entries.
    """
    c = np.asarray(raw, dtype=np.float64).reshape(-1)
    if c.size == 0:
        raise EmptyVectorError("signal vector must contain at least one coefficient")
    return SignalVector(np.sort(np.abs(c)), sorted=True)


def as_signal(c) -> SignalVector:
    """Coerce an array-like (or pass through a SignalVector) to a sorted signal."""
    if isinstance(c, SignalVector):
        return c
    return make_signal(c)


def _normalized_sorted(c: SignalVector) -> np.ndarray:
    """Sorted magnitudes divided by the peak, so every base lies in [0, 1].

    Scale invariance of the metric makes this safe, and it keeps powers of
    order in the hundreds inside floating-point range.
    """
    values = c.require_sorted()
    peak = values[-1]
    if peak == 0.0:
        raise ZeroVectorError("sparsity of the all-zero vector is undefined")
    return values / peak


def _pairwise_power_sum(c: np.ndarray, p: float, block: int = 1024) -> float:
    """sum over i<j of (c[j] - c[i])**p for ascending-sorted c in [0, 1].

    Row-blocked so peak memory stays at ``block * n`` floats.  Entries with
    j <= i produce non-positive differences and are clamped to zero, which
    contributes nothing for p >= 1.
    """
    n = c.size
    total = 0.0
    for start in range(0, n - 1, block):
        stop = min(start + block, n - 1)
        tail = c[start:]
        diffs = np.maximum(tail[None, :] - c[start:stop, None], 0.0)
        total += float(np.sum(diffs**p))
    return total


def gds_naive(c, order=1) -> SparsityValue:
    """Differential sparsity straight from the pairwise definition.

    This is the reference path: O(N^2) differences, any real order
    ``p >= 1``.  The closed forms in :mod:`diffsparsity.fast` are checked
    against it.

    Args:
        c: a :class:`SignalVector` or array-like of raw coefficients.
        order: sparsity order (int, float, or :class:`SparsityOrder`).

    Returns:
        :class:`SparsityValue` with ``0 <= value <= 1 - 1/N``.

    Raises:
        ZeroVectorError: if all coefficients are zero.
    """
    signal = as_signal(c)
    order = as_order(order)
    values = _normalized_sorted(signal)
    n = values.size
    if n == 1:
        return SparsityValue(0.0, order, 1)
    p = int(order.p) if order.is_integer else order.p
    numerator = _pairwise_power_sum(values, p)
    denominator = n * float(np.sum(values**p))
    return SparsityValue(numerator / denominator, order, n)


def gini_index(c) -> SparsityValue:
    """Gini index of the coefficient magnitudes.

    Computed from the ascending-sorted magnitudes with 1-based ranks i:

        GI(c) = 1 - 2 * sum_i (c_i / ||c||_1) * ((N - i + 1/2) / N)

    Equals the order-1 differential sparsity; the two implementations are
    kept independent so they can cross-check each other.
    """
    signal = as_signal(c)
    values = _normalized_sorted(signal)  # peak scaling also guards sub/overflow
    n = values.size
    total = float(values.sum())
    ranks = np.arange(1, n + 1, dtype=np.float64)
    weights = (n - ranks + 0.5) / n
    value = 1.0 - 2.0 * float(np.sum(values * weights)) / total
    return SparsityValue(value, SparsityOrder(1), n)


def sparsity_bounds(n: int) -> tuple[float, float]:
    """Attainable sparsity range for vectors of length ``n``: ``(0, 1 - 1/n)``."""
    if n < 1:
        raise EmptyVectorError(f"vector length must be >= 1, got {n}")
    return 0.0, 1.0 - 1.0 / n
