"""Differential sparsity metrics, their axiom harness, and sparse recovery.

The order-p differential sparsity of a vector measures how unevenly its
energy is spread, via p-th powers of pairwise differences of the sorted
magnitudes; order 1 is the Gini index.  The package provides the exact
pairwise form, O(k^2 N) closed forms for integer orders, a property harness
for the eleven classic sparsity axioms, z-scored sparsity for
incommensurate coefficients, and SPSA-based recovery of randomly projected
sparse signals.
"""

from .core import (
    SignalVector,
    SparsityOrder,
    SparsityValue,
    gds_naive,
    gini_index,
    make_signal,
    sparsity_bounds,
)
from .criteria import (
    CRITERIA,
    CriterionCase,
    CriterionReport,
    babies,
    bill_gates,
    clone_concat,
    rising_tide,
    robin_hood,
    scale,
    verify_criteria,
)
from .exceptions import (
    BadCountError,
    BadOrderError,
    BadScaleError,
    BadShapeError,
    BadShiftError,
    BadTransferError,
    DegenerateDatasetError,
    DegenerateProjectionError,
    DegenerateSignalError,
    EmptyVectorError,
    InsufficientSamplesError,
    NoDataError,
    NotSortedError,
    SparsityError,
    ZeroVectorError,
)
from .experiment import (
    DISTRIBUTIONS,
    CellResult,
    ExperimentGrid,
    ResultTable,
    SignalSpec,
    emit,
    generate_signal,
    optimal_order,
    prototype_sparsity_check,
    run_grid,
)
from .fast import (
    AUTO_FAST_MAX_ORDER,
    OpCountReport,
    PowerSums,
    PrefixPowerSums,
    gds,
    gds_even,
    gds_odd,
    op_count,
    power_sums,
    prefix_power_sums,
)
from .normalize import (
    CentralizedSparsity,
    DatasetMatrix,
    centralized_column,
    centralized_sparsity,
    fit_stats,
)
from .recover import (
    FeasibleParametrization,
    ProjectionSetup,
    RecoveryResult,
    SpsaConfig,
    SpsaReconstructor,
    gaussian_projection,
    mse,
    parametrize_feasible,
    spsa_recover,
)

__version__ = "0.1.0"

__all__ = [
    "AUTO_FAST_MAX_ORDER",
    "CRITERIA",
    "DISTRIBUTIONS",
    "BadCountError",
    "BadOrderError",
    "BadScaleError",
    "BadShapeError",
    "BadShiftError",
    "BadTransferError",
    "CellResult",
    "CentralizedSparsity",
    "CriterionCase",
    "CriterionReport",
    "DatasetMatrix",
    "DegenerateDatasetError",
    "DegenerateProjectionError",
    "DegenerateSignalError",
    "EmptyVectorError",
    "ExperimentGrid",
    "FeasibleParametrization",
    "InsufficientSamplesError",
    "NoDataError",
    "NotSortedError",
    "OpCountReport",
    "PowerSums",
    "PrefixPowerSums",
    "ProjectionSetup",
    "RecoveryResult",
    "ResultTable",
    "SignalSpec",
    "SignalVector",
    "SparsityError",
    "SparsityOrder",
    "SparsityValue",
    "SpsaConfig",
    "SpsaReconstructor",
    "ZeroVectorError",
    "babies",
    "bill_gates",
    "centralized_column",
    "centralized_sparsity",
    "clone_concat",
    "emit",
    "fit_stats",
    "gaussian_projection",
    "gds",
    "gds_even",
    "gds_naive",
    "gds_odd",
    "generate_signal",
    "gini_index",
    "make_signal",
    "mse",
    "op_count",
    "optimal_order",
    "parametrize_feasible",
    "power_sums",
    "prefix_power_sums",
    "prototype_sparsity_check",
    "rising_tide",
    "robin_hood",
    "run_grid",
    "scale",
    "sparsity_bounds",
    "spsa_recover",
    "verify_criteria",
]
