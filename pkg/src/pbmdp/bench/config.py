"""Benchmark configuration files and per-problem default hyperparameters.

A configuration is an INI file with the sections ``[env]``, ``[solver]``,
``[filter]`` and ``[run]``.  Every key is validated; unknown sections or keys
are rejected so that typos never silently fall back to defaults.
"""

from __future__ import annotations

import configparser
import warnings
from dataclasses import dataclass, field, replace

from .._validation import ConfigurationError, check_fraction, check_positive_int
from ..envs import ENVIRONMENTS, constants

POLICY_SOLVERS = ("random", "qmdp", "lightdark-heuristic")
TREE_SOLVERS = ("sparse-pft", "pft-dpw", "ssw")
SOLVERS = POLICY_SOLVERS + TREE_SOLVERS

# hyperparameter table keys -> estimator parameter names
SOLVER_KEYS = {
    "c": "c_ucb",
    "k_o": "n_children",
    "k_a": "k_action",
    "alpha_a": "alpha_action",
    "alpha_o": None,  # observation widening is not implemented; accepted and ignored
    "depth": "depth",
    "n_particles": "n_particles",
    "rollout": "rollout",
    "width": "width",
}
_INT_KEYS = {"k_o", "depth", "n_particles", "width"}
_FLOAT_KEYS = {"c", "k_a", "alpha_a", "alpha_o"}

_QMDP = "qmdp"
# a QMDP rollout never localises from a wide Light Dark belief, so leaf values
# carry no signal about visiting the light; the localise-then-descend rollout does
_LD_ROLLOUT = "lightdark-heuristic"
# defaults per (solver, env); root particle counts are a local choice
HYPERPARAMS = {
    ("sparse-pft", "lasertag"): dict(c=26.0, k_o=4, depth=50, n_particles=20, rollout=_QMDP),
    ("sparse-pft", "lightdark"): dict(c=100.0, k_o=4, depth=20, n_particles=20, rollout=_LD_ROLLOUT),
    ("sparse-pft", "subhunt"): dict(c=100.0, k_o=5, depth=50, n_particles=20, rollout=_QMDP),
    ("sparse-pft", "vdptag"): dict(c=70.0, k_a=20.0, k_o=8, depth=10, n_particles=20, rollout="random"),
    ("sparse-pft", "vdptag-discrete"): dict(c=61.0, k_o=10, depth=10, n_particles=20, rollout="random"),
    ("pft-dpw", "lasertag"): dict(c=26.0, k_o=4, alpha_o=1 / 35, depth=50, n_particles=20, rollout=_QMDP),
    ("pft-dpw", "lightdark"): dict(c=100.0, k_o=4, alpha_o=1 / 10, depth=20, n_particles=20, rollout=_LD_ROLLOUT),
    ("pft-dpw", "subhunt"): dict(c=100.0, k_o=2, alpha_o=1 / 10, depth=50, n_particles=20, rollout=_QMDP),
    ("pft-dpw", "vdptag"): dict(
        c=70.0, k_a=20.0, alpha_a=1 / 25, k_o=8, alpha_o=1 / 85, depth=10, n_particles=20, rollout="random"
    ),
    ("pft-dpw", "vdptag-discrete"): dict(c=47.0, k_o=4, alpha_o=1 / 5, depth=10, n_particles=20, rollout="random"),
}


@dataclass(frozen=True)
class BenchConfig:
    env: str = "lightdark"
    solver: str = "random"
    solver_params: dict = field(default_factory=dict)
    filter_particles: int | None = None
    resample_threshold: float = 0.5
    rejuvenation: float | None = None
    episodes: int = 100
    seed: int = 0
    budget_mode: str = "time"
    budget: float = 1.0
    horizon: int | None = None
    workers: int = 1
    timing: bool = False
    out: str | None = None

    def __post_init__(self):
        if self.env not in ENVIRONMENTS:
            raise ConfigurationError(f"unknown environment {self.env!r}; known: {list(ENVIRONMENTS)}")
        if self.solver not in SOLVERS:
            raise ConfigurationError(f"unknown solver {self.solver!r}; known: {list(SOLVERS)}")
        if self.solver == "lightdark-heuristic" and self.env != "lightdark":
            raise ConfigurationError("lightdark-heuristic only runs on lightdark")
        check_positive_int(self.episodes, "episodes")
        check_positive_int(self.workers, "workers")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigurationError("seed must be an unsigned 64-bit integer")
        if self.budget_mode not in ("time", "queries"):
            raise ConfigurationError("budget mode must be 'time' or 'queries'")
        if self.budget_mode == "time" and not self.budget >= 0:
            raise ConfigurationError("time budget must be non-negative")
        if self.budget_mode == "queries":
            check_positive_int(self.budget, "queries", minimum=0)
        if self.horizon is not None:
            check_positive_int(self.horizon, "horizon", minimum=0)
        if self.filter_particles is not None:
            check_positive_int(self.filter_particles, "filter particles")
        check_fraction(self.resample_threshold, "resample_threshold")
        if self.rejuvenation is not None and self.rejuvenation < 0:
            raise ConfigurationError("rejuvenation must be non-negative")

    @property
    def env_constants(self) -> dict:
        return constants.VDPTAG if self.env.startswith("vdptag") else getattr(constants, self.env.upper())

    @property
    def n_filter_particles(self) -> int:
        return self.filter_particles or int(self.env_constants["filter_particles"])

    @property
    def filter_rejuvenation(self) -> float:
        return float(self.env_constants["filter_rejuvenation"] if self.rejuvenation is None else self.rejuvenation)

    def resolved_solver_params(self) -> dict:
        """Table defaults for this (solver, env) overlaid with explicit keys."""
        merged = dict(HYPERPARAMS.get((self.solver, self.env), {}))
        merged.update(self.solver_params)
        return merged

    def estimator_params(self) -> dict:
        """Solver keyword arguments, with the budget applied to tree searches."""
        params = {}
        for key, value in self.resolved_solver_params().items():
            name = SOLVER_KEYS[key]
            if name is None:
                continue
            params[name] = value
        if self.solver in ("sparse-pft", "pft-dpw"):
            if self.budget_mode == "time":
                params.update(max_time=float(self.budget), n_queries=None)
            else:
                params.update(max_time=None, n_queries=int(self.budget))
            params.pop("width", None)
        elif self.solver == "ssw":
            params = {k: v for k, v in params.items() if k in ("width", "depth", "n_particles")}
        else:
            params = {}
        return params

    def with_budget(self, mode: str, budget) -> "BenchConfig":
        return replace(self, budget_mode=mode, budget=budget)

    def echo(self) -> dict:
        return {
            "env": self.env,
            "solver": self.solver,
            "solver_params": self.resolved_solver_params(),
            "filter": {
                "particles": self.n_filter_particles,
                "resample_threshold": self.resample_threshold,
                "rejuvenation": self.filter_rejuvenation,
            },
            "run": {
                "episodes": self.episodes,
                "seed": int(self.seed),
                "budget_mode": self.budget_mode,
                "budget": self.budget,
                "horizon": self.horizon,
                "workers": self.workers,
                "timing": self.timing,
            },
            "constants_version": constants.CONSTANTS_VERSION,
            "constants": {k: v for k, v in self.env_constants.items()},
        }


_SECTIONS = {
    "env": {"name"},
    "solver": {"name"} | set(SOLVER_KEYS),
    "filter": {"particles", "resample_threshold", "rejuvenation"},
    "run": {"episodes", "seed", "time", "queries", "horizon", "workers", "timing", "out"},
}


def _number(section, key, raw, kind):
    try:
        return kind(raw)
    except ValueError:
        if kind is float and "/" in raw:
            num, _, den = raw.partition("/")
            try:
                return float(num) / float(den)
            except (ValueError, ZeroDivisionError):
                pass
        raise ConfigurationError(f"[{section}] {key} = {raw!r} is not a valid {kind.__name__}") from None


def parse_config(text: str, source: str = "<string>") -> BenchConfig:
    """Parse INI text into a :class:`BenchConfig`, rejecting unknown keys."""
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigurationError(f"{source}: {exc}") from None
    for section in cp.sections():
        if section not in _SECTIONS:
            raise ConfigurationError(f"{source}: unknown section [{section}]")
        unknown = set(cp[section]) - _SECTIONS[section]
        if unknown:
            raise ConfigurationError(f"{source}: unknown key(s) in [{section}]: {sorted(unknown)}")
    kw = {}
    if cp.has_section("env"):
        kw["env"] = cp["env"].get("name", "lightdark")
    if cp.has_section("solver"):
        sec = cp["solver"]
        kw["solver"] = sec.get("name", "random")
        params = {}
        for key, raw in sec.items():
            if key == "name":
                continue
            if key == "rollout":
                params[key] = raw.strip()
            else:
                params[key] = _number("solver", key, raw, int if key in _INT_KEYS else float)
        if "alpha_o" in params:
            warnings.warn("alpha_o is accepted for completeness but observation widening is not implemented", UserWarning)
        kw["solver_params"] = params
    if cp.has_section("filter"):
        sec = cp["filter"]
        if "particles" in sec:
            kw["filter_particles"] = _number("filter", "particles", sec["particles"], int)
        if "resample_threshold" in sec:
            kw["resample_threshold"] = _number("filter", "resample_threshold", sec["resample_threshold"], float)
        if "rejuvenation" in sec:
            kw["rejuvenation"] = _number("filter", "rejuvenation", sec["rejuvenation"], float)
    if cp.has_section("run"):
        sec = cp["run"]
        if "time" in sec and "queries" in sec:
            raise ConfigurationError(f"{source}: [run] sets both time and queries")
        if "time" in sec:
            kw.update(budget_mode="time", budget=_number("run", "time", sec["time"], float))
        if "queries" in sec:
            kw.update(budget_mode="queries", budget=_number("run", "queries", sec["queries"], int))
        for key in ("episodes", "seed", "horizon", "workers"):
            if key in sec:
                kw[key] = _number("run", key, sec[key], int)
        if "timing" in sec:
            try:
                kw["timing"] = sec.getboolean("timing")
            except ValueError:
                raise ConfigurationError(f"{source}: [run] timing must be a boolean") from None
        if "out" in sec:
            kw["out"] = sec["out"]
    return BenchConfig(**kw)


def load_config(path) -> BenchConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text, source=str(path))
