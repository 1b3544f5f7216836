"""Monte Carlo sum-rate and interference at a fixed number of users."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .batch import draw_batch
from .duals import DualVariables, SolverError, Z95, solve_duals
from .power_control import evaluate_batch
from .scenario import ScenarioConfig


@dataclass(frozen=True)
class EstimateResult:
    sum_rate: float
    interference: float
    duals: DualVariables
    rate_hw: float
    intf_hw: float
    trials: int
    seed: int
    power: float = math.nan
    power_hw: float = math.nan
    n: int = 0
    k: int = 0


def _mean_hw(x):
    return float(np.mean(x)), Z95 * float(np.std(x, ddof=1)) / math.sqrt(x.size)


def estimate(scenario: ScenarioConfig, trials: int = 20_000, seed: int = 0, *,
             duals: DualVariables | None = None, solve_trials: int | None = None,
             tol: float = 0.02, jobs: int | None = None) -> EstimateResult:
    """Sum-rate and interference of ``scenario`` at its solved multipliers.

    Multipliers come from a batch drawn on a stream independent of the
    ``trials`` estimation draws; pass ``duals`` to skip the solve.  ``power``
    is the average total transmit power on the estimation draws.
    """
    if trials < 1000:
        raise ValueError("estimate needs at least 1000 trials")
    if duals is None:
        duals = solve_duals(scenario, solve_trials or trials, tol, seed, jobs=jobs)
    elif scenario.network == "IL":
        duals = DualVariables(0.0, duals.mu)
    batch = draw_batch(scenario, trials, seed, "estimate", jobs)
    power, intf, rate = evaluate_batch(batch.h, batch.g, duals.lam, duals.mu)
    r, r_hw = _mean_hw(rate)
    q, q_hw = _mean_hw(intf)
    p, p_hw = _mean_hw(power)
    return EstimateResult(r, q, duals, r_hw, q_hw, trials, seed, p, p_hw, scenario.n, scenario.k)


def estimate_many(scenario: ScenarioConfig, n_list, trials: int, seed: int, **kw):
    """``estimate`` at each N, in order."""
    out = []
    for n in n_list:
        sc = scenario.with_n(int(n))
        try:
            out.append(estimate(sc, trials, seed, **kw))
        except SolverError as exc:
            raise SolverError(f"{sc.label} at N={n}: {exc}", exc.bracket) from exc
    return out


def interference_profile(scenario: ScenarioConfig, n_list, trials: int = 20_000,
                         seed: int = 0, **kw) -> list[tuple[int, float]]:
    if scenario.feedback != "kscg":
        raise ValueError("interference_profile expects a K-SCG scenario")
    return [(r.n, r.interference) for r in estimate_many(scenario, n_list, trials, seed, **kw)]
