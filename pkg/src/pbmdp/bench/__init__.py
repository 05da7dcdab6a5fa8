from .config import HYPERPARAMS, SOLVERS, BenchConfig, load_config, parse_config
from .runner import (
    CSV_HEADER,
    BenchmarkReport,
    EpisodeResult,
    build_solver,
    episodes_csv,
    run_benchmark,
    run_episode,
    standard_error,
    sweep_csv,
    time_sweep,
)

__all__ = [
    "CSV_HEADER",
    "HYPERPARAMS",
    "SOLVERS",
    "BenchConfig",
    "BenchmarkReport",
    "EpisodeResult",
    "build_solver",
    "episodes_csv",
    "load_config",
    "parse_config",
    "run_benchmark",
    "run_episode",
    "standard_error",
    "sweep_csv",
    "time_sweep",
]
