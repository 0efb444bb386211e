"""Single-pass streaming estimation of the maximum directed cut."""

from .estimators import ExactDiCut, OfflineDiCut, StreamingDiCut
from .exceptions import (
    DiCutError,
    FixtureError,
    GraphFormatError,
    InvariantError,
    NumericError,
    OracleBoundError,
    ParameterError,
)
from .graph import ColoredDigraph, clamp, cut_value, degree_partition, edge_value, is_proper
from .offline import compute_pos, compute_tpos, exact_maxdicut, round_assignment, zbar
from .params import ParamSet, derive_theory_params, practical_params, tree_sizes
from .preprocess import ReductionConfig, check_assumptions, reduce_stream
from .streaming import evaluate, finalize, process_stream, vertex_estimator

__version__ = "0.1.0"
