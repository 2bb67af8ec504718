"""Shell-based monitoring of repeatable multichannel processes.

Noisy realizations of a repeatable process concentrate on a thin hollow
shell around the noise-free response manifold; the distance from a new
realization to that manifold is therefore a sharp, nearly Gaussian anomaly
statistic even when the channel count is huge.  This package provides the
shell statistics, a streaming comparator with k-sigma match tests, online
dynamic clustering of the manifold, ordinary-kriging interpolation with
uncertainty, an end-to-end monitoring pipeline with fast-defect and
slow-trend alarms, and synthetic generators with closed-form oracles.

Hot distance kernels are compiled with numba when available; set the
environment variable SHELLMON_NO_NUMBA=1 to force the pure-numpy fallback.
"""

from . import kriging
from ._kernels import numba_enabled
from .clustering import (
    Cluster,
    ClusterModel,
    IngestOutcome,
    cluster_dependent_stats,
    masked_distance,
    min_pair_distance,
)
from .comparator import Comparator, MatchResult
from .kriging import InterpolationResult, KrigingModel
from .pipeline import (
    AlarmEvent,
    MonitorConfig,
    MonitorState,
    Normalizer,
    load,
    save,
)
from .shell_stats import (
    ShellEstimate,
    TheoreticalShell,
    estimate_point_shell,
    expected_pair_distance,
    new_realization_correction,
    realization_zscore,
    theoretical_shell,
)
from .synth import (
    GroundTruth,
    ManifoldSpec,
    chi_moments,
    gen_cloud,
    inject_defect,
    oracle_suite,
    perpendicular_distance,
)

__version__ = "0.1.0"

__all__ = [
    "AlarmEvent",
    "Cluster",
    "ClusterModel",
    "Comparator",
    "GroundTruth",
    "IngestOutcome",
    "InterpolationResult",
    "KrigingModel",
    "ManifoldSpec",
    "MatchResult",
    "MonitorConfig",
    "MonitorState",
    "Normalizer",
    "ShellEstimate",
    "TheoreticalShell",
    "chi_moments",
    "cluster_dependent_stats",
    "estimate_point_shell",
    "expected_pair_distance",
    "gen_cloud",
    "inject_defect",
    "kriging",
    "load",
    "masked_distance",
    "min_pair_distance",
    "new_realization_correction",
    "numba_enabled",
    "oracle_suite",
    "perpendicular_distance",
    "realization_zscore",
    "save",
    "theoretical_shell",
    "__version__",
]
