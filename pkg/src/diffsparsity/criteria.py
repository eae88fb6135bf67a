"""Axioms a credible sparsity metric must satisfy, as an executable harness.

Eleven classic criteria, here named P1..P11:

    P1  Continuity           small perturbations move the value little
    P2  Permutation          coefficient order is irrelevant
    P3  Robin Hood           rich-to-poor transfer strictly decreases sparsity
    P4  Scaling              positive rescaling leaves sparsity unchanged
    P5  Rising Tide          adding a positive constant strictly decreases
                             sparsity (constant vectors stay at zero)
    P6  Cloning              concatenating exact copies leaves it unchanged
    P7  Bill Gates           growing the largest coefficient strictly
                             increases sparsity
    P8  Babies               appending a zero strictly increases sparsity
    P9  Saturation           the relative gain of one more zero vanishes
    P10 Lower Bound          the constant vector is the least sparse
    P11 Upper Bound          one lone non-zero is the most sparse

Each criterion has a constructive transformation and a randomized case
generator; :func:`verify_criteria` runs any metric callable against them and
reports violation counts.  Strict relations are asserted with a margin of
1e-12 on max-normalized vectors, and the generators keep cases away from the
degenerate boundaries where the strict inequalities legitimately collapse to
equalities (see the individual generator notes).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import SignalVector, make_signal
from .exceptions import (
    BadCountError,
    BadScaleError,
    BadShiftError,
    BadTransferError,
    SparsityError,
)

__all__ = [
    "CRITERIA",
    "CriterionCase",
    "CriterionReport",
    "robin_hood",
    "rising_tide",
    "scale",
    "clone_concat",
    "bill_gates",
    "babies",
    "verify_criteria",
]

CRITERIA = tuple(f"P{i}" for i in range(1, 12))

#: relations a case can assert between metric(before) and metric(after)
_RELATIONS = frozenset(
    {"equal", "strictly_less", "strictly_greater", "limit_ratio_one", "at_least", "at_most"}
)

_STRICT_MARGIN = 1e-12


@dataclass(frozen=True)
class CriterionCase:
    """One randomized test case: a before/after vector pair and a relation.

    ``expected`` states how ``metric(after)`` must relate to
    ``metric(before)``; ``tol`` is the margin (strict relations must beat it,
    tolerance relations must stay within it).
    """

    name: str
    before: SignalVector
    after: SignalVector
    expected: str
    tol: float = _STRICT_MARGIN

    def __post_init__(self):
        if self.expected not in _RELATIONS:
            raise SparsityError(f"unknown relation {self.expected!r}")


@dataclass(frozen=True)
class CriterionReport:
    """Violation tally for one criterion.

    ``worst_margin`` is the smallest signed margin observed across trials;
    a negative margin is a violation.  For strict relations the margin is
    the achieved difference minus the strictness threshold, for tolerance
    relations it is the allowance left.
    """

    name: str
    trials: int
    violations: int
    worst_margin: float


# ---------------------------------------------------------------------------
# constructive transformations


def robin_hood(c: SignalVector, i: int, j: int, a: float) -> SignalVector:
    """Transfer amount ``a`` from coefficient ``j`` down to coefficient ``i``.

    Requires ``c_j > c_i`` and ``0 < a < (c_j - c_i)/2`` so the receiving
    coefficient stays below the giving one.  Any sparsity metric worth its
    salt strictly decreases under this operation.

    Args:
        c: sorted signal vector.
        i, j: 0-based indices into the sorted coefficients.
        a: transfer amount.

    Raises:
        BadTransferError: if the preconditions fail.
    """
    values = c.require_sorted()
    n = values.size
    if not (0 <= i < n and 0 <= j < n):
        raise BadTransferError(f"indices ({i}, {j}) out of range for length {n}")
    ci, cj = values[i], values[j]
    if not cj > ci:
        raise BadTransferError(f"need c_j > c_i, got c_i={ci}, c_j={cj}")
    if not 0.0 < a < (cj - ci) / 2.0:
        raise BadTransferError(
            f"transfer must satisfy 0 < a < (c_j - c_i)/2 = {(cj - ci) / 2}, got a={a}"
        )
    out = values.copy()
    out[i] += a
    out[j] -= a
    return make_signal(out)


def rising_tide(c: SignalVector, a: float) -> SignalVector:
    """Add the same positive amount to every coefficient.

    Raises:
        BadShiftError: if ``a <= 0``.
    """
    if not a > 0.0:
        raise BadShiftError(f"shift must be > 0, got {a}")
    return SignalVector(c.require_sorted() + a, sorted=True)


def scale(c: SignalVector, a: float) -> SignalVector:
    """Multiply every coefficient by a positive factor (sparsity-preserving).

    Raises:
        BadScaleError: if ``a <= 0``.
    """
    if not a > 0.0:
        raise BadScaleError(f"scale factor must be > 0, got {a}")
    return SignalVector(c.require_sorted() * a, sorted=True)


def clone_concat(c: SignalVector, copies: int) -> SignalVector:
    """Concatenate ``copies`` exact copies of the vector, re-sorted.

    Raises:
        BadCountError: if ``copies < 2``.
    """
    if copies < 2:
        raise BadCountError(f"need at least 2 copies, got {copies}")
    return make_signal(np.tile(c.coeffs, copies))


def bill_gates(c: SignalVector, i: int, a: float) -> SignalVector:
    """Increase coefficient ``i`` by ``a > 0``.

    A sparsity metric must strictly increase when the *largest* coefficient
    grows (the already-rich getting richer).  Growing a small coefficient can
    legitimately decrease differential sparsity (it levels the field), and a
    vector with a single positive coefficient is scale-equivalent to its
    bumped version, so the randomized generator targets the maximum of
    vectors with at least two positive entries.

    Raises:
        BadShiftError: if ``a <= 0``.
    """
    if not a > 0.0:
        raise BadShiftError(f"increment must be > 0, got {a}")
    values = c.require_sorted()
    if not 0 <= i < values.size:
        raise BadShiftError(f"index {i} out of range for length {values.size}")
    out = values.copy()
    out[i] += a
    return make_signal(out)


def babies(c: SignalVector) -> SignalVector:
    """Append one zero coefficient (strictly increases sparsity)."""
    values = c.require_sorted()
    return SignalVector(np.concatenate(([0.0], values)), sorted=True)


# ---------------------------------------------------------------------------
# randomized case generation

_N_RANGE = (2, 64)


def _base_vector(rng: np.random.Generator, n_min=2, n_max=64) -> np.ndarray:
    """Random magnitude vector, max-normalized to peak 1, at least one non-zero.

    Coefficient families mirror the synthetic-signal corpus: constant ones,
    uniform, half-normal, exponential, and uniform with a ~50% zero mass.
    """
    n = int(rng.integers(n_min, n_max + 1))
    kind = int(rng.integers(0, 5))
    if kind == 0:
        c = np.ones(n)
    elif kind == 1:
        c = rng.uniform(0.0, 1.0, n)
    elif kind == 2:
        c = np.abs(rng.standard_normal(n))
    elif kind == 3:
        c = rng.exponential(1.0, n)
    else:
        c = rng.uniform(0.0, 1.0, n)
        c[rng.random(n) < 0.5] = 0.0
    peak = c.max()
    if peak == 0.0:
        c[int(rng.integers(0, n))] = 1.0
        peak = 1.0
    return c / peak


def _sorted_with_spread(rng, min_gap: float) -> np.ndarray:
    """Sorted max-1 vector whose smallest entry sits at least min_gap below 1."""
    c = np.sort(_base_vector(rng))
    if c[0] > 1.0 - min_gap:
        c[0] *= rng.uniform(0.1, 0.5)
    return c


def _gen_p1(rng, trial) -> CriterionCase:
    # Lipschitz-style continuity at scale: relative perturbation eps <= 1e-8
    # on vectors with min >= 0.01 * max must move the value by <= 1e3 * eps.
    c = np.maximum(_base_vector(rng), 0.01)
    eps = rng.uniform(1e-9, 1e-8)
    wiggle = rng.uniform(-1.0, 1.0, c.size)
    perturbed = c * (1.0 + wiggle * eps)
    return CriterionCase("P1", make_signal(c), make_signal(perturbed), "equal", tol=1e3 * eps)


def _gen_p2(rng, trial) -> CriterionCase:
    c = _base_vector(rng)
    return CriterionCase(
        "P2",
        make_signal(c),
        SignalVector(rng.permutation(c), sorted=False),
        "equal",
    )


def _gen_p3(rng, trial) -> CriterionCase:
    # Gap >= 0.25 and a transfer well inside (0, gap/2) keep the strict
    # decrease far above the 1e-12 margin for orders up to ~7.
    c = _sorted_with_spread(rng, min_gap=0.25)
    before = SignalVector(c, sorted=True)
    j = int(np.argmax(c))
    low = np.flatnonzero(c <= c[j] - 0.25)
    i = int(rng.choice(low))
    a = rng.uniform(0.25, 0.75) * (c[j] - c[i]) / 2.0
    return CriterionCase("P3", before, robin_hood(before, i, j, a), "strictly_less")


def _gen_p4(rng, trial) -> CriterionCase:
    before = make_signal(_base_vector(rng))
    factor = math.exp(rng.uniform(-7.0, 7.0))
    return CriterionCase("P4", before, scale(before, factor), "equal")


def _gen_p5(rng, trial) -> CriterionCase:
    a = rng.uniform(0.1, 2.0)
    if rng.random() < 0.1:
        # constant vectors are the documented exception: 0 maps to 0
        n = int(rng.integers(*_N_RANGE))
        before = SignalVector(np.full(n, rng.uniform(0.1, 1.0)), sorted=True)
        return CriterionCase("P5", before, rising_tide(before, a), "equal")
    before = SignalVector(_sorted_with_spread(rng, min_gap=0.2), sorted=True)
    return CriterionCase("P5", before, rising_tide(before, a), "strictly_less")


def _gen_p6(rng, trial) -> CriterionCase:
    before = make_signal(_base_vector(rng))
    return CriterionCase("P6", before, clone_concat(before, int(rng.integers(2, 5))), "equal")


def _gen_p7(rng, trial) -> CriterionCase:
    c = _base_vector(rng)
    if np.count_nonzero(c) < 2:
        # a lone positive coefficient is scale-invariant under the bump
        zero = int(np.flatnonzero(c == 0.0)[0])
        c[zero] = rng.uniform(0.2, 0.9)
    before = make_signal(c)
    a = rng.uniform(0.2, 1.0)
    return CriterionCase(
        "P7", before, bill_gates(before, before.n - 1, a), "strictly_greater"
    )


def _gen_p8(rng, trial) -> CriterionCase:
    before = make_signal(_base_vector(rng))
    return CriterionCase("P8", before, babies(before), "strictly_greater")


def _saturated(n: int) -> SignalVector:
    c = np.zeros(n)
    c[-1] = 1.0
    return SignalVector(c, sorted=True)


def _gen_p9(rng, trial) -> CriterionCase:
    # ratio S(0_N || 1) / S(0_{N-1} || 1) -> 1; first trial pins N = 10^4
    if trial == 0:
        n = 10_000
    else:
        n = int(math.exp(rng.uniform(math.log(500), math.log(10_000))))
    return CriterionCase("P9", _saturated(n), _saturated(n + 1), "limit_ratio_one", tol=1e-3)


def _gen_p10(rng, trial) -> CriterionCase:
    before = make_signal(_base_vector(rng))
    ones = SignalVector(np.ones(before.n), sorted=True)
    return CriterionCase("P10", before, ones, "at_least")


def _gen_p11(rng, trial) -> CriterionCase:
    before = make_signal(_base_vector(rng))
    return CriterionCase("P11", before, _saturated(before.n), "at_most")


_GENERATORS = {
    "P1": _gen_p1,
    "P2": _gen_p2,
    "P3": _gen_p3,
    "P4": _gen_p4,
    "P5": _gen_p5,
    "P6": _gen_p6,
    "P7": _gen_p7,
    "P8": _gen_p8,
    "P9": _gen_p9,
    "P10": _gen_p10,
    "P11": _gen_p11,
}


def case_margin(metric, case: CriterionCase) -> float:
    """Signed pass margin of a metric on one case (negative = violation)."""
    before = float(metric(case.before.coeffs))
    after = float(metric(case.after.coeffs))
    relation = case.expected
    if relation == "strictly_less":
        return before - after - case.tol
    if relation == "strictly_greater":
        return after - before - case.tol
    if relation == "equal":
        return case.tol - abs(after - before)
    if relation == "at_least":
        return before - after + case.tol
    if relation == "at_most":
        return after - before + case.tol
    # limit_ratio_one
    if before == 0.0:
        return -math.inf
    return case.tol - abs(after / before - 1.0)


def verify_criteria(metric, trials: int = 1000, seed: int = 0, criteria=None):
    """Run randomized criterion cases against a sparsity metric.

    Args:
        metric: callable mapping a 1-D numpy array of raw coefficients to a
            float.  It must handle unsorted input (P2 feeds permutations).
        trials: randomized cases per criterion (>= 1).
        seed: base seed; each criterion gets an independent stream, so
            results do not depend on which criteria run or in what order.
        criteria: optional subset of :data:`CRITERIA` names.

    Returns:
        list of :class:`CriterionReport`, one per criterion in order.
    """
    if trials < 1:
        raise SparsityError(f"trials must be >= 1, got {trials}")
    names = list(CRITERIA) if criteria is None else list(criteria)
    for name in names:
        if name not in _GENERATORS:
            raise SparsityError(f"unknown criterion {name!r}")
    reports = []
    for name in names:
        generate = _GENERATORS[name]
        rng = np.random.default_rng(np.random.SeedSequence((seed, CRITERIA.index(name))))
        violations = 0
        worst = math.inf
        for trial in range(trials):
            margin = case_margin(metric, generate(rng, trial))
            if margin < 0.0:
                violations += 1
            if margin < worst:
                worst = margin
        reports.append(CriterionReport(name, trials, violations, worst))
    return reports
