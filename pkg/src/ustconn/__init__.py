"""Undirected st-connectivity through rotation maps, zig-zag products and expanders."""

from .connectivity import (
    ConnectivityVerdict,
    oracle_connect,
    path_enum_connect,
    reingold_connect,
    rv_connect,
)
from .errors import (
    DimensionError,
    GraphError,
    NumericalError,
    ParameterError,
    ParseError,
    QueryLimitExceeded,
    RestrictionError,
    SearchFailure,
    SizeCapError,
)
from .expanders import cayley_f2m, certified_base, find_expander, random_regular
from .graph import MultiGraph, RotationMap, validate_rotation_map
from .operators import derand_square, power, zigzag
from .spectral import lambda_abs2, report
from .transform import TransformOracle, TransformParams, lazy_rot_eval, regularize

__version__ = "0.1.0"
