"""Reference-path metric tests: pairwise sparsity, Gini index, bounds."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diffsparsity import (
    EmptyVectorError,
    NotSortedError,
    SignalVector,
    SparsityOrder,
    ZeroVectorError,
    gds_naive,
    gini_index,
    make_signal,
    sparsity_bounds,
)
from diffsparsity.exceptions import BadOrderError, SparsityError


class TestMakeSignal:
    def test_abs_and_sort(self):
        assert make_signal([3, -1, 2]).coeffs.tolist() == [1.0, 2.0, 3.0]

    def test_zeros_identity(self):
        assert make_signal([0, 0, 0]).coeffs.tolist() == [0.0, 0.0, 0.0]

    def test_single_negative(self):
        assert make_signal([-5]).coeffs.tolist() == [5.0]

    def test_empty_raises(self):
        with pytest.raises(EmptyVectorError):
            make_signal([])

    def test_coeffs_are_read_only(self):
        sig = make_signal([1, 2])
        with pytest.raises(ValueError):
            sig.coeffs[0] = 7.0

    def test_non_finite_rejected(self):
        with pytest.raises(SparsityError):
            make_signal([1.0, np.nan])

    def test_unsorted_flag_checked(self):
        with pytest.raises(NotSortedError):
            SignalVector(np.array([2.0, 1.0]), sorted=True)
        unsorted = SignalVector(np.array([2.0, 1.0]), sorted=False)
        with pytest.raises(NotSortedError):
            unsorted.require_sorted()

    def test_negative_magnitudes_rejected(self):
        with pytest.raises(SparsityError):
            SignalVector(np.array([-1.0, 2.0]), sorted=False)


class TestSparsityOrder:
    def test_parity_even(self):
        order = SparsityOrder(4)
        assert order.is_even and order.parity_k == 2

    def test_parity_odd(self):
        order = SparsityOrder(7)
        assert order.is_odd and order.parity_k == 3

    def test_float_integral_counts_as_integer(self):
        assert SparsityOrder(2.0).parity_k == 1

    def test_non_integer_has_no_parity(self):
        assert SparsityOrder(2.5).parity_k is None

    @pytest.mark.parametrize("bad", [0, 0.5, -1, float("nan"), float("inf")])
    def test_below_one_rejected(self, bad):
        with pytest.raises(BadOrderError):
            SparsityOrder(bad)


class TestGdsNaive:
    def test_p1_example(self):
        assert gds_naive([1, 2, 3], 1).value == pytest.approx(2 / 9, abs=1e-15)

    def test_p2_example(self):
        assert gds_naive([1, 2, 3], 2).value == pytest.approx(1 / 7, abs=1e-15)

    def test_constant_vectors_are_zero(self):
        for q in (0.3, 1.0, 7.5):
            for p in (1, 2, 3.5, 7):
                assert gds_naive([q] * 4, p).value == 0.0

    def test_saturated_vector(self):
        for p in (1, 2, 3, 5.5):
            assert gds_naive([0, 0, 0, 1], p).value == pytest.approx(0.75, abs=1e-15)

    def test_all_zero_raises(self):
        with pytest.raises(ZeroVectorError):
            gds_naive([0.0, 0.0], 2)

    def test_single_positive_coefficient_is_zero(self):
        value = gds_naive([4.2], 3)
        assert value.value == 0.0 and value.n == 1

    def test_value_metadata(self):
        out = gds_naive([1, 2, 3], 3)
        assert out.n == 3 and out.order.p == 3.0

    def test_permutation_invariance_is_exact(self):
        rng = np.random.default_rng(3)
        c = rng.exponential(1.0, 31)
        for _ in range(5):
            assert gds_naive(rng.permutation(c), 2).value == gds_naive(c, 2).value

    def test_huge_order_does_not_overflow(self):
        # peak normalization keeps every base in [0, 1]
        value = gds_naive([1e300, 2e300, 3e300], 250).value
        assert np.isfinite(value) and 0.0 <= value <= 2 / 3


class TestGiniIndex:
    def test_example(self):
        assert gini_index([1, 2, 3]).value == pytest.approx(2 / 9, abs=1e-15)

    def test_lower_bound_vector(self):
        assert gini_index([1, 1, 1, 1]).value == pytest.approx(0.0, abs=1e-15)

    def test_upper_bound_vector(self):
        assert gini_index([0, 0, 0, 1]).value == pytest.approx(0.75, abs=1e-15)

    def test_all_zero_raises(self):
        with pytest.raises(ZeroVectorError):
            gini_index([0, 0])


class TestSparsityBounds:
    def test_examples(self):
        assert sparsity_bounds(2) == (0.0, 0.5)
        assert sparsity_bounds(100) == (0.0, 0.99)
        assert sparsity_bounds(1) == (0.0, 0.0)

    def test_zero_length_raises(self):
        with pytest.raises(EmptyVectorError):
            sparsity_bounds(0)


@st.composite
def signal_arrays(draw, max_size=40):
    values = draw(
        st.lists(
            st.floats(min_value=0.0, max_value=1e6, allow_nan=False),
            min_size=1,
            max_size=max_size,
        )
    )
    return np.array(values)


@given(signal_arrays(), st.sampled_from([1, 1.5, 2, 3, 4.25, 7]))
@settings(max_examples=200, deadline=None)
def test_range_bounds_property(values, p):
    if values.max() == 0.0:
        values[0] = 1.0
    out = gds_naive(values, p)
    lo, hi = sparsity_bounds(out.n)
    assert lo - 1e-12 <= out.value <= hi + 1e-12


@given(signal_arrays())
@settings(max_examples=200, deadline=None)
def test_gini_matches_order_one_property(values):
    if values.max() == 0.0:
        values[0] = 1.0
    sig = make_signal(values)
    assert gds_naive(sig, 1).value == pytest.approx(gini_index(sig).value, abs=1e-12)


@given(signal_arrays(max_size=20), st.floats(min_value=1e-3, max_value=1e3))
@settings(max_examples=150, deadline=None)
def test_scaling_invariance_property(values, factor):
    if values.max() == 0.0:
        values[0] = 1.0
    base = gds_naive(values, 3).value
    scaled = gds_naive(values * factor, 3).value
    assert scaled == pytest.approx(base, abs=1e-12)
