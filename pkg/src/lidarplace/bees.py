"""Artificial bee colony search: a bounded black-box minimizer.

The colony keeps ``num_bees`` food sources (candidate solutions).  Each
iteration runs three phases:

* employed: every source tries one local move (one random coordinate nudged
  toward/away from a random partner) and keeps it only if strictly better;
* onlooker: ``num_bees`` fitness-proportional draws pick sources to retry the
  same local move, so good sources get more attempts;
* scout: a source that has failed ``abandonment_threshold`` times in a row is
  abandoned and resampled uniformly from the box.

Fitness is ``1 / (1 + cost)``, so lower cost means proportionally more
onlooker attention.  Candidate moves are clamped into the box, the global
best is retained across scout restarts, and every random draw happens on the
main thread before objective evaluation, so results are bit-identical for a
fixed seed no matter how many worker threads evaluate the objective.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "FoodSource",
    "AbcParams",
    "SolveResult",
    "fitness",
    "roulette_select",
    "neighbor",
    "optimize",
]


@dataclass
class FoodSource:
    """One candidate solution with its cost, fitness, and failure streak."""

    solution: np.ndarray
    cost: float
    fitness: float
    stagnation: int = 0


@dataclass(frozen=True)
class AbcParams:
    """Colony settings.

    ``mutate_all_dims`` switches the local move from the default single
    random coordinate to nudging every coordinate at once; it is off by
    default.
    """

    num_bees: int
    max_iterations: int
    abandonment_threshold: int = 100
    rng_seed: int = 0
    mutate_all_dims: bool = False

    def __post_init__(self):
        if self.num_bees < 2:
            raise ValueError("num_bees must be >= 2 (local moves need a partner)")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.abandonment_threshold < 1:
            raise ValueError("abandonment_threshold must be >= 1")


@dataclass(frozen=True, eq=False)
class SolveResult:
    """Best solution found plus per-iteration convergence history.

    ``history`` has one ``(best_cost, mean_cost)`` row per iteration; the
    best-cost column is non-increasing.  ``population`` is the final colony
    state and ``scout_counts`` tallies how often each source was abandoned.
    """

    best_solution: np.ndarray
    best_cost: float
    history: np.ndarray
    population: tuple[FoodSource, ...] = field(repr=False, default=())
    scout_counts: np.ndarray = field(repr=False, default=None)

    @property
    def history_best(self) -> np.ndarray:
        return self.history[:, 0]

    @property
    def history_mean(self) -> np.ndarray:
        return self.history[:, 1]


def fitness(cost: float) -> float:
    """Map a non-negative cost to fitness ``1 / (1 + cost)`` in (0, 1]."""
    cost = float(cost)
    if not math.isfinite(cost) or cost < 0.0:
        raise ValueError(f"cost must be finite and non-negative, got {cost}")
    return 1.0 / (1.0 + cost)


def _roulette_many(fitnesses: np.ndarray, rng: np.random.Generator, count: int) -> np.ndarray:
    cumulative = np.cumsum(fitnesses)
    draws = rng.random(count) * cumulative[-1]
    picks = np.searchsorted(cumulative, draws, side="right")
    return np.minimum(picks, fitnesses.size - 1)


def roulette_select(fitnesses, rng: np.random.Generator) -> int:
    """Draw one index with probability proportional to its fitness."""
    fits = np.asarray(fitnesses, dtype=float)
    if fits.ndim != 1 or fits.size == 0 or np.any(fits <= 0.0) or not np.all(np.isfinite(fits)):
        raise ValueError("fitnesses must be a non-empty vector of positive finite values")
    return int(_roulette_many(fits, rng, 1)[0])


def neighbor(
    x_i: np.ndarray,
    x_k: np.ndarray,
    j: int,
    rng: np.random.Generator,
    lower: np.ndarray,
    upper: np.ndarray,
) -> np.ndarray:
    """Local move: nudge coordinate ``j`` of ``x_i`` along its offset from
    partner ``x_k`` by a uniform factor in [-1, 1], then clamp into the box."""
    x_i = np.asarray(x_i, dtype=float)
    v = x_i.copy()
    phi = rng.uniform(-1.0, 1.0)
    v[j] = x_i[j] + phi * (x_i[j] - np.asarray(x_k, dtype=float)[j])
    np.clip(v, lower, upper, out=v)
    return v


def _partners(rng: np.random.Generator, exclude: np.ndarray, size: int) -> np.ndarray:
    """Uniform partner indices in [0, size) never equal to ``exclude``."""
    k = rng.integers(0, size - 1, exclude.size)
    return k + (k >= exclude)


def _check_costs(costs: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(costs)) or np.any(costs < 0.0):
        raise ValueError("objective must return finite non-negative costs")
    return costs


def optimize(
    objective: Callable[[np.ndarray], float],
    bounds: tuple[Sequence[float], Sequence[float]],
    params: AbcParams,
    threads: int = 1,
) -> SolveResult:
    """Minimize ``objective`` over the box ``bounds`` with a bee colony.

    ``objective`` must be pure, deterministic, and finite (non-negative) on
    the box.  With ``threads > 1`` candidate evaluations within each phase run
    on a thread pool; all randomness is drawn up front on the main thread and
    results are applied in source order, so the outcome is identical to the
    single-threaded run.
    """
    lower = np.asarray(bounds[0], dtype=float)
    upper = np.asarray(bounds[1], dtype=float)
    if lower.ndim != 1 or lower.shape != upper.shape:
        raise ValueError("bounds must be two equal-length vectors")
    if np.any(lower > upper):
        raise ValueError("bounds inverted: lower must not exceed upper")
    dim = lower.size
    tau = params.num_bees
    rng = np.random.default_rng(params.rng_seed)

    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None

    def evaluate(batch: np.ndarray) -> np.ndarray:
        rows = list(batch)
        if pool is None:
            costs = [float(objective(row)) for row in rows]
        else:
            costs = [float(c) for c in pool.map(objective, rows)]
        return _check_costs(np.asarray(costs, dtype=float))

    try:
        solutions = rng.uniform(lower, upper, (tau, dim))
        costs = evaluate(solutions)
        fits = 1.0 / (1.0 + costs)
        stagnation = np.zeros(tau, dtype=np.int64)
        scout_counts = np.zeros(tau, dtype=np.int64)

        best_idx = int(np.argmin(costs))
        best_cost = float(costs[best_idx])
        best_solution = solutions[best_idx].copy()

        history = np.empty((params.max_iterations, 2), dtype=float)

        def propose(base_rows: np.ndarray, partner_rows: np.ndarray) -> np.ndarray:
            if params.mutate_all_dims:
                phi = rng.uniform(-1.0, 1.0, (base_rows.shape[0], dim))
                trial = base_rows + phi * (base_rows - partner_rows)
            else:
                cols = rng.integers(0, dim, base_rows.shape[0])
                phi = rng.uniform(-1.0, 1.0, base_rows.shape[0])
                rows = np.arange(base_rows.shape[0])
                trial = base_rows.copy()
                trial[rows, cols] = base_rows[rows, cols] + phi * (
                    base_rows[rows, cols] - partner_rows[rows, cols]
                )
            return np.clip(trial, lower, upper)

        for iteration in range(params.max_iterations):
            # Employed phase: one trial per source, built from a snapshot.
            partners = _partners(rng, np.arange(tau), tau)
            trials = propose(solutions, solutions[partners])
            trial_costs = evaluate(trials)
            for i in range(tau):
                if trial_costs[i] < costs[i]:
                    solutions[i] = trials[i]
                    costs[i] = trial_costs[i]
                    fits[i] = 1.0 / (1.0 + trial_costs[i])
                    stagnation[i] = 0
                else:
                    stagnation[i] += 1
            m = int(np.argmin(costs))
            if costs[m] < best_cost:
                best_cost = float(costs[m])
                best_solution = solutions[m].copy()

            # Onlooker phase: fitness-proportional retries of the snapshot.
            selected = _roulette_many(fits, rng, tau)
            partners = _partners(rng, selected, tau)
            trials = propose(solutions[selected], solutions[partners])
            trial_costs = evaluate(trials)
            for t in range(tau):
                i = int(selected[t])
                if trial_costs[t] < costs[i]:
                    solutions[i] = trials[t]
                    costs[i] = trial_costs[t]
                    fits[i] = 1.0 / (1.0 + trial_costs[t])
                    stagnation[i] = 0
                else:
                    stagnation[i] += 1
            m = int(np.argmin(costs))
            if costs[m] < best_cost:
                best_cost = float(costs[m])
                best_solution = solutions[m].copy()

            # Scout phase: abandon exhausted sources.  The streak can grow by
            # two per iteration, so the trigger is >= rather than ==.
            scouts = np.flatnonzero(stagnation >= params.abandonment_threshold)
            if scouts.size:
                fresh = rng.uniform(lower, upper, (scouts.size, dim))
                fresh_costs = evaluate(fresh)
                for t, i in enumerate(scouts):
                    solutions[i] = fresh[t]
                    costs[i] = fresh_costs[t]
                    fits[i] = 1.0 / (1.0 + fresh_costs[t])
                    stagnation[i] = 0
                    scout_counts[i] += 1
                m = int(np.argmin(costs))
                if costs[m] < best_cost:
                    best_cost = float(costs[m])
                    best_solution = solutions[m].copy()

            history[iteration, 0] = best_cost
            history[iteration, 1] = costs.mean()
    finally:
        if pool is not None:
            pool.shutdown()

    population = tuple(
        FoodSource(
            solution=solutions[i].copy(),
            cost=float(costs[i]),
            fitness=float(fits[i]),
            stagnation=int(stagnation[i]),
        )
        for i in range(tau)
    )
    history.flags.writeable = False
    scout_counts.flags.writeable = False
    return SolveResult(
        best_solution=best_solution,
        best_cost=best_cost,
        history=history,
        population=population,
        scout_counts=scout_counts,
    )
