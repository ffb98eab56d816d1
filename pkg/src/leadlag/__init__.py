"""Lead-lag paths between two time series by the symmetric thermal optimal path method."""

__version__ = "0.1.0"

from .engine import (  # noqa: E402
    EngineConfig,
    LeadLagPath,
    OptimalPath,
    SliceDistributions,
    backward_weights,
    forward_weights,
    temperature_sweep,
    tops_path,
    zero_temperature_path,
)
from .ingest import align, log_returns, normalize, parse_series, prepare_pair, read_series  # noqa: E402
from .lattice import DistanceMatrix, admissible_x, distance_matrix, rotate, unrotate  # noqa: E402
from .stats import adf_test, descriptive_stats, leadlag_summary  # noqa: E402
