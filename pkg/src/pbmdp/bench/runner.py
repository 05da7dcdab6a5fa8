"""Closed-loop episodes, Monte Carlo aggregation and planning-time sweeps."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .._validation import ConfigurationError
from ..baselines import make_policy
from ..envs import make_env
from ..filtering import ParticleFilter
from ..rng import episode_seed, generator, substream
from ..solvers import SparsePFT, SparseSamplingOmega
from .config import POLICY_SOLVERS, BenchConfig

CSV_HEADER = (
    "episode",
    "seed",
    "env",
    "solver",
    "budget_mode",
    "budget",
    "disc_return",
    "undisc_return",
    "steps",
    "mean_plan_ms",
    "degenerate_updates",
)

# sub-stream indices of an episode seed
_MODEL, _ENV, _FILTER, _PLANNER = range(4)


@dataclass
class EpisodeResult:
    episode: int
    seed: int
    env: str
    solver: str
    budget_mode: str
    budget: float
    disc_return: float
    undisc_return: float
    steps: int
    plan_ms: list = field(default_factory=list, repr=False)
    degenerate_updates: int = 0

    @property
    def mean_plan_ms(self) -> float:
        return float(np.mean(self.plan_ms)) if self.plan_ms else float("nan")


@dataclass
class BenchmarkReport:
    config: dict
    episodes: list

    @property
    def returns(self) -> list:
        return [e.disc_return for e in self.episodes]

    @property
    def n(self) -> int:
        return len(self.episodes)

    @property
    def mean(self) -> float:
        return statistics.fmean(self.returns)

    @property
    def std_error(self):
        """Sample standard deviation over ``sqrt(n)``; ``None`` for a single episode."""
        return standard_error(self.returns)

    def summary(self) -> dict:
        timed = [e.mean_plan_ms for e in self.episodes if e.plan_ms]
        return {
            "n": self.n,
            "mean": self.mean,
            "std_error": self.std_error,
            "mean_undiscounted": statistics.fmean(e.undisc_return for e in self.episodes),
            "mean_steps": statistics.fmean(e.steps for e in self.episodes),
            "mean_plan_ms": statistics.fmean(timed) if timed else None,
            "degenerate_updates": sum(e.degenerate_updates for e in self.episodes),
        }

    def to_csv(self, timing: bool = False) -> str:
        return episodes_csv(self.episodes, timing)

    def to_json(self) -> str:
        return json.dumps({"config": self.config, "summary": self.summary()}, indent=2, sort_keys=True, default=str)


def standard_error(values):
    values = list(values)
    if len(values) < 2:
        return None
    return statistics.stdev(values) / math.sqrt(len(values))


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def episodes_csv(episodes, timing: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for e in episodes:
        plan = _fmt(e.mean_plan_ms) if timing and e.plan_ms else ""
        w.writerow(
            [
                e.episode,
                e.seed,
                e.env,
                e.solver,
                e.budget_mode,
                _fmt(e.budget),
                _fmt(e.disc_return),
                _fmt(e.undisc_return),
                e.steps,
                plan,
                e.degenerate_updates,
            ]
        )
    return buf.getvalue()


def build_solver(cfg: BenchConfig, model):
    """Instantiate and fit the configured solver for ``model``."""
    if cfg.solver in POLICY_SOLVERS:
        return make_policy(cfg.solver, model)
    params = cfg.estimator_params()
    if cfg.solver == "ssw":
        return SparseSamplingOmega(**params).fit(model)
    if cfg.solver == "pft-dpw":
        if model.discrete_actions and ("k_action" in params or "alpha_action" in params):
            raise ConfigurationError("k_a/alpha_a widen continuous action sets; this environment has discrete actions")
        params["dpw"] = True
    return SparsePFT(**params).fit(model)


def run_episode(cfg: BenchConfig, seed: int, episode: int = 0) -> EpisodeResult:
    """Plan, act, observe and filter until a terminal state or the horizon.

    The tree is rebuilt at every step.  Policies that ignore the belief skip
    the particle filter entirely; the result is unchanged because the filter
    draws from its own sub-stream.
    """
    root = np.random.SeedSequence(int(seed))
    model = make_env(cfg.env, seed=substream(root, _MODEL))
    solver = build_solver(cfg, model)
    env_rng = generator(substream(root, _ENV))
    filter_rng = generator(substream(root, _FILTER))
    planner_ss = substream(root, _PLANNER)
    use_belief = getattr(solver, "requires_belief", True)

    horizon = model.horizon if cfg.horizon is None else cfg.horizon
    state = model.initial_states(1, env_rng)[0]
    pf = belief = None
    if use_belief:
        pf = ParticleFilter(cfg.n_filter_particles, cfg.resample_threshold, cfg.filter_rejuvenation).fit(model)
        belief = pf.initialize(filter_rng)

    rewards, plan_ms, degenerate = [], [], 0
    for t in range(horizon):
        if model.is_terminal(state[None, :])[0]:
            break
        t0 = time.perf_counter()
        action = solver.plan(belief, generator(substream(planner_ss, t)))
        plan_ms.append(1e3 * (time.perf_counter() - t0))
        nxt, obs, r = model.generate(state[None, :], action, env_rng)
        state = nxt[0]
        rewards.append(float(r[0]))
        if use_belief:
            belief = pf.update(belief, action, obs[0], filter_rng)
            degenerate += int(belief.degenerate)

    disc = 0.0
    for r in reversed(rewards):
        disc = r + model.discount * disc
    return EpisodeResult(
        episode=episode,
        seed=int(seed),
        env=cfg.env,
        solver=cfg.solver,
        budget_mode=cfg.budget_mode,
        budget=cfg.budget,
        disc_return=float(disc),
        undisc_return=float(sum(rewards)),
        steps=len(rewards),
        plan_ms=plan_ms,
        degenerate_updates=degenerate,
    )


def _run_indexed(args):
    cfg, k = args
    return run_episode(cfg, episode_seed(cfg.seed, k), k)


def run_benchmark(cfg: BenchConfig, out_dir=None, progress=None) -> BenchmarkReport:
    """Run ``cfg.episodes`` seeded episodes and aggregate them.

    Episode ``k`` uses ``episode_seed(cfg.seed, k)``.  With ``workers > 1``
    episodes run in a process pool; results are always ordered by index.
    When ``out_dir`` (or ``cfg.out``) is set, ``episodes.csv`` and
    ``report.json`` are written there.
    """
    jobs = [(cfg, k) for k in range(cfg.episodes)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            episodes = list(pool.map(_run_indexed, jobs, chunksize=max(1, len(jobs) // (4 * cfg.workers))))
    else:
        episodes = []
        for job in jobs:
            episodes.append(_run_indexed(job))
            if progress is not None:
                progress(len(episodes), len(jobs))
    report = BenchmarkReport(cfg.echo(), episodes)
    out_dir = out_dir or cfg.out
    if out_dir is not None:
        write_report(report, out_dir, timing=cfg.timing)
    return report


def write_report(report: BenchmarkReport, out_dir, timing: bool = False, stem: str = "") -> None:
    try:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, f"{stem}episodes.csv"), "w", encoding="utf-8", newline="") as fh:
            fh.write(report.to_csv(timing))
        with open(os.path.join(out_dir, f"{stem}report.json"), "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
    except OSError as exc:
        raise OSError(f"cannot write benchmark output to {out_dir}: {exc.strerror}") from exc


def time_sweep(cfg: BenchConfig, budgets, out_dir=None) -> list:
    """One report per budget (same master seed) plus a long-format CSV.

    The budget mode of ``cfg`` decides whether ``budgets`` are seconds or
    query counts.
    """
    budgets = list(budgets)
    if not budgets:
        raise ConfigurationError("the sweep needs at least one budget")
    reports = []
    for b in budgets:
        if not b > 0:
            raise ConfigurationError(f"sweep budgets must be positive, got {b}")
        reports.append(run_benchmark(cfg.with_budget(cfg.budget_mode, b), out_dir=None))
    out_dir = out_dir or cfg.out
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, "sweep.csv"), "w", encoding="utf-8", newline="") as fh:
            fh.write(sweep_csv(reports, cfg.timing))
        for b, rep in zip(budgets, reports):
            write_report(rep, out_dir, timing=cfg.timing, stem=f"budget_{b}_")
    return reports


def sweep_csv(reports, timing: bool = False) -> str:
    """All episodes of all budgets in one table with the standard header."""
    text = [episodes_csv([], timing)]
    for rep in reports:
        text.append(rep.to_csv(timing).split("\n", 1)[1])
    return "".join(text)
