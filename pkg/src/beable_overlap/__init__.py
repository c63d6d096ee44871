"""Monte Carlo and quadrature tools for wave function overlap on beable configurations.

The overlap of a pair of states, taken over a configuration space of
pilot-wave beables, is the probability mass the first state assigns to
configurations where the second state's amplitude strictly dominates.
This package estimates that quantity for random states on real and
complex spheres, for uniform points in a cube, and for explicit product
states on one-dimensional grids, and evaluates the closed-form bounds
and special cases that go with those studies.
"""

from .errors import (
    AmbiguousCrossingError,
    AmbiguousMaximumError,
    BeableOverlapError,
    DegenerateWeightsError,
    GridParseError,
    IncompatibleGridsError,
    IncompatibleStatesError,
    InsufficientDataError,
    InsufficientSignalError,
    InvalidDimensionError,
    InvalidParameterError,
    InvalidPointError,
    NoCrossingError,
    NotNormalizedError,
)
from .experiments import (
    CUBE_OVERLAP_LIMIT,
    EXACT_CROSSED_MODE_OVERLAP,
    EXACT_TWO_DIM_COMPLEX_OVERLAP,
    EXACT_TWO_DIM_REAL_OVERLAP,
    BoundReport,
    ExperimentResult,
    ExperimentRow,
    crossed_mode_overlap,
    displaced_gaussian_pair,
    estimate_complex_overlap,
    estimate_cube_overlap,
    estimate_real_overlap,
    estimate_reweighted_overlap,
    localized_fraction,
    optimal_bound,
    overlap_bound,
    product_decay,
    run_bound,
    run_counterexample,
    run_cube_check,
    run_ec_curve,
    run_figure1,
    run_integral_f,
    run_localized,
    run_pair_overlap,
    run_product_decay,
)
from .grids import (
    BinaryState,
    GridFunction,
    ProductState,
    boxcar_amplitude,
    excited_mode_amplitude,
    gaussian_density_amplitude,
    grid_from_callable,
    normalized_grid,
    read_grid_file,
    write_grid_file,
)
from .overlap import (
    MaximaDistance,
    maxima_distance,
    overlap_binary,
    overlap_discrete,
    overlap_grid,
    overlap_product_mc,
    ridge_value,
)
from .sampling import (
    SeedSpec,
    StateKind,
    StateVector,
    sample_complex_state,
    sample_cube_point,
    sample_real_state,
)
from .stats import (
    FitResult,
    OverlapEstimate,
    RunningMoments,
    accumulate,
    fit_log_linear,
    from_values,
    merge,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguousCrossingError",
    "AmbiguousMaximumError",
    "BeableOverlapError",
    "BinaryState",
    "BoundReport",
    "CUBE_OVERLAP_LIMIT",
    "DegenerateWeightsError",
    "EXACT_CROSSED_MODE_OVERLAP",
    "EXACT_TWO_DIM_COMPLEX_OVERLAP",
    "EXACT_TWO_DIM_REAL_OVERLAP",
    "ExperimentResult",
    "ExperimentRow",
    "FitResult",
    "GridFunction",
    "GridParseError",
    "IncompatibleGridsError",
    "IncompatibleStatesError",
    "InsufficientDataError",
    "InsufficientSignalError",
    "InvalidDimensionError",
    "InvalidParameterError",
    "InvalidPointError",
    "MaximaDistance",
    "NoCrossingError",
    "NotNormalizedError",
    "OverlapEstimate",
    "ProductState",
    "RunningMoments",
    "SeedSpec",
    "StateKind",
    "StateVector",
    "accumulate",
    "boxcar_amplitude",
    "crossed_mode_overlap",
    "displaced_gaussian_pair",
    "estimate_complex_overlap",
    "estimate_cube_overlap",
    "estimate_real_overlap",
    "estimate_reweighted_overlap",
    "excited_mode_amplitude",
    "fit_log_linear",
    "from_values",
    "gaussian_density_amplitude",
    "grid_from_callable",
    "localized_fraction",
    "maxima_distance",
    "merge",
    "normalized_grid",
    "optimal_bound",
    "overlap_binary",
    "overlap_bound",
    "overlap_discrete",
    "overlap_grid",
    "overlap_product_mc",
    "product_decay",
    "read_grid_file",
    "ridge_value",
    "run_bound",
    "run_counterexample",
    "run_cube_check",
    "run_ec_curve",
    "run_figure1",
    "run_integral_f",
    "run_localized",
    "run_pair_overlap",
    "run_product_decay",
    "sample_complex_state",
    "sample_cube_point",
    "sample_real_state",
    "write_grid_file",
]
