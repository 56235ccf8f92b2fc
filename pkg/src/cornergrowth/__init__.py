"""Simulation and numerical analysis of the inhomogeneous exponential corner growth model."""

__version__ = "0.1.0"

from .exceptions import (  # noqa: E402
    CornerGrowthError,
    DataError,
    DivergenceError,
    DomainError,
    InsufficientExtentError,
    InvalidParametersError,
    NumericalError,
    ParameterRangeError,
    ResourceError,
)
from .measures import Measure1D, TransformPair, cauchy_A, cauchy_B, cauchy_deriv  # noqa: E402
from .params import (  # noqa: E402
    BlockConstant,
    MacroProfile,
    Override,
    ParamPair,
    RowConstant,
    Triangular,
    empirical_measure,
    summary,
)
from .centering import rains_limit, solve_centering, stationary_mean  # noqa: E402
from .shape import (  # noqa: E402
    ShapeSpec,
    boundary,
    classify_region,
    gamma,
    gamma_argmin,
    in_limit_shape,
    limit_flux,
    limit_height,
    narrow_rate,
    rost_spec,
    spike_crevice_segment,
)
from .lpp import (  # noqa: E402
    cluster,
    exit_points,
    lpp_forward,
    lpp_point,
    lpp_sample,
    sample_weights,
    stationary_grid,
)
