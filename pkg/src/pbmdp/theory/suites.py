"""Shipped experiment matrices and the row format used by ``pbmdp theory``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .._validation import ConfigurationError
from ..rng import generator, substream
from .constants import theorem2_constants
from .sn import DiscreteDistPair, renyi_inf, theorem1_experiment
from .toys import SHIPPED_TOYS, WIDTH_GRID, coupled_convergence_experiment, independent_run_gap

# (name, p, q, f); dyadic probabilities keep the exact expectations exact
SN_PAIRS = (
    ("identical", (0.5, 0.25, 0.25), (0.5, 0.25, 0.25), (1.0, -1.0, 0.5)),
    ("skewed", (0.5, 0.5), (0.25, 0.75), (1.0, 0.0)),
    ("point-mass", (1.0, 0.0), (0.5, 0.5), (0.25, 1.0)),
    ("four-point", (0.125, 0.125, 0.25, 0.5), (0.25, 0.25, 0.25, 0.25), (-1.0, 0.5, 0.0, 1.0)),
)
SN_SIZES = (64, 256)
SN_MARGINS = (0.1, 0.2)
SN_TRIALS = 10_000

T2_POINTS = (
    (1.0, 0.5, 1.0, 2.0, 2, 2),
    (8.0, 0.0, 1.0, 1.0, 1, 1),
    (0.5, 0.9, 2.0, 1.5, 3, 4),
    (2.0, 0.25, 10.0, 4.0, 2, 3),
    (0.1, 0.95, 1.0, 1.0, 5, 2),
)


@dataclass(frozen=True)
class TheoryRow:
    experiment: str
    point: str
    statistic: float
    bound: float
    passed: bool

    def csv(self) -> str:
        return f"{self.experiment},{self.point},{self.statistic!r},{self.bound!r},{int(self.passed)}"


ROW_HEADER = "experiment,point,statistic,bound,pass"


def sn_matrix():
    """The shipped ``(name, pair, f, N, lam)`` points: lam sits a margin ``t`` past the precondition."""
    out = []
    for name, p, q, f in SN_PAIRS:
        pair = DiscreteDistPair(np.array(p), np.array(q))
        f = np.array(f)
        scale = float(np.abs(f).max()) * renyi_inf(pair)
        for n in SN_SIZES:
            for t in SN_MARGINS:
                out.append((f"{name};N={n};t={t}", pair, f, n, scale * (t + 1.0 / math.sqrt(n))))
    return out


def theorem1_rows(seed=0, trials=SN_TRIALS):
    rows = []
    ss = np.random.SeedSequence(seed)
    for k, (label, pair, f, n, lam) in enumerate(sn_matrix()):
        res = theorem1_experiment(pair, f, n, lam, trials, generator(substream(ss, k)))
        rows.append(TheoryRow("theorem1", label, res.violation_rate, res.bound, res.passed))
    return rows


def convergence_rows(seed=0, n_seeds=20, widths=WIDTH_GRID):
    rows = []
    seeds = range(seed, seed + n_seeds)
    for name, factory in SHIPPED_TOYS.items():
        table = coupled_convergence_experiment(factory(), widths, seeds)
        med = table.median_errors
        for i, c in enumerate(table.widths):
            # each median must not exceed its predecessor
            prev = med[i - 1] if i else math.inf
            rows.append(TheoryRow("convergence-median", f"{name};C={c}", float(med[i]), float(prev), bool(med[i] <= prev)))
        top = max(table.widths)
        agree = table.agreement(top)
        need = math.ceil(0.9 * len(table.seeds))
        rows.append(TheoryRow("convergence-action", f"{name};C={top}", float(agree), float(need), agree >= need))
        gap, err = independent_run_gap(factory(), top, seed)
        rows.append(TheoryRow("convergence-gap", f"{name};C={top}", gap, 2 * err, gap <= 2 * err))
    return rows


def constants_rows():
    rows = []
    for eps, gamma, r_max, d_inf, depth, n_a in T2_POINTS:
        c = theorem2_constants(eps, gamma, r_max, d_inf, depth, n_a)
        label = f"eps={eps};gamma={gamma};rmax={r_max};dinf={d_inf};D={depth};A={n_a}"
        rows.append(TheoryRow("theorem2-width", label, c.width, math.inf, math.isfinite(c.width) and c.width > 0))
    return rows


SUITES = {
    "theorem1": theorem1_rows,
    "convergence": convergence_rows,
    "constants": lambda seed=0: constants_rows(),
}


def run_suite(name: str, seed: int = 0):
    """Rows of one suite, or of every suite for ``name == "all"``."""
    if name == "all":
        return [row for fn in SUITES.values() for row in fn(seed=seed)]
    if name not in SUITES:
        raise ConfigurationError(f"unknown suite {name!r}; known: {sorted(SUITES)} and 'all'")
    return SUITES[name](seed=seed)
