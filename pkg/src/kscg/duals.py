"""Lagrange multipliers for the average power and interference constraints.

Multipliers are found on one fixed channel batch (common random numbers), so
the sample-average constraints are monotone in each multiplier.  The
interference multiplier is solved inside the power multiplier: for each
trial lam, mu(lam) meets the interference budget or is zero when the budget
is already met at mu = 0; lam is then chosen so the power budget binds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .batch import ChannelBatch, draw_batch
from .power_control import evaluate_batch

Z95 = 1.959963984540054


@dataclass(frozen=True)
class DualVariables:
    lam: float
    mu: float


@dataclass(frozen=True)
class ConstraintEstimate:
    avg_total_power: float
    avg_interference: float
    avg_individual_power: float
    power_hw: float
    interference_hw: float
    individual_hw: float


class SolverError(RuntimeError):
    def __init__(self, message, bracket=None):
        super().__init__(message if bracket is None else f"{message} (last bracket {bracket})")
        self.bracket = bracket


def _mean_hw(x: np.ndarray) -> tuple[float, float]:
    m = float(np.mean(x))
    hw = Z95 * float(np.std(x, ddof=1)) / math.sqrt(x.size) if x.size > 1 else math.inf
    return m, hw


def estimate_constraints(scenario, duals: DualVariables, batch: ChannelBatch) -> ConstraintEstimate:
    if batch.trials == 0:
        raise ValueError("empty batch")
    lam = 0.0 if scenario.network == "IL" else duals.lam
    power, intf, _ = evaluate_batch(batch.h, batch.g, lam, duals.mu)
    p, p_hw = _mean_hw(power)
    q, q_hw = _mean_hw(intf)
    return ConstraintEstimate(p, q, p / batch.n, p_hw, q_hw, p_hw / batch.n)


def _brent(f, lo, hi, what):
    try:
        return optimize.brentq(f, lo, hi, xtol=1e-300, rtol=1e-10, maxiter=300)
    except (RuntimeError, ValueError) as exc:
        raise SolverError(f"{what} search failed: {exc}", (lo, hi)) from exc


def solve_duals(scenario, batch_size: int = 20_000, tol: float = 0.02, seed: int = 0,
                batch: ChannelBatch | None = None, jobs: int | None = None) -> DualVariables:
    """Multipliers meeting each active budget within ``tol`` relative on the batch."""
    if not 0 < tol <= 0.1:
        raise ValueError(f"tol must lie in (0, 0.1], got {tol}")
    if batch is None:
        if batch_size < 1000:
            raise ValueError("solve_duals needs a batch of at least 1000 draws")
        batch = draw_batch(scenario, batch_size, seed, "solve", jobs)
    h, g = batch.h, batch.g
    q_target = scenario.q_ave if scenario.has_interference_limit else None
    p_target = scenario.power_target

    def mean_power(lam, mu):
        return float(np.mean(evaluate_batch(h, g, lam, mu)[0]))

    def mean_intf(lam, mu):
        return float(np.mean(evaluate_batch(h, g, lam, mu)[1]))

    def mu_of(lam):
        if q_target is None:
            return 0.0
        if lam > 0 and mean_intf(lam, 0.0) <= q_target:
            return 0.0  # budget met with a free interference price
        hi = (1.0 + tol) / q_target  # per-draw interference < 1/mu
        lo = hi * 1e-12 if lam == 0 else 0.0
        if mean_intf(lam, lo) <= q_target:
            raise SolverError("interference budget unreachable at the lower bracket", (lo, hi))
        return _brent(lambda mu: mean_intf(lam, mu) - q_target, lo, hi, "mu")

    if p_target is None:
        duals = DualVariables(0.0, mu_of(0.0))
    else:
        hi = (1.0 + tol) / p_target  # per-draw power < 1/lam
        lam = None
        if q_target is not None:
            mu0 = mu_of(0.0)
            if mean_power(0.0, mu0) <= p_target:
                lam = 0.0
        if lam is None:
            lo = hi * 1e-12
            if mean_power(lo, mu_of(lo)) <= p_target:
                raise SolverError("power budget unreachable at the lower bracket", (lo, hi))
            lam = _brent(lambda t: mean_power(t, mu_of(t)) - p_target, lo, hi, "lam")
        duals = DualVariables(lam, mu_of(lam))

    _verify(scenario, duals, batch, tol)
    return duals


def _verify(scenario, duals, batch, tol):
    est = estimate_constraints(scenario, duals, batch)
    checks = []
    if scenario.power_target is not None:
        checks.append(("power", est.avg_total_power, scenario.power_target, duals.lam))
    if scenario.has_interference_limit:
        checks.append(("interference", est.avg_interference, scenario.q_ave, duals.mu))
    for name, value, target, mult in checks:
        if value > target * (1.0 + tol):
            raise SolverError(f"{name} budget exceeded: {value:.6g} > {target:.6g}", (mult, mult))
        if mult > 0 and abs(value / target - 1.0) > tol:
            raise SolverError(f"{name} budget not met with equality: {value:.6g} vs {target:.6g}",
                              (mult, mult))
