"""Scheduling and water-filling power for one channel realization or a batch.

The scheduled user maximises X_i = h_i / (lam + mu g_i) over the eligible set
and receives P = (1/(lam + mu g) - 1/h)^+.  The single-realization path
evaluates the winner's power and rate in exact rational arithmetic, so both
stay accurate to rounding even when X is barely above one.  The batch path
uses (X - 1)/h in floating point, which is plenty for Monte Carlo averages.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .order_stats import k_smallest_batch, select_k_smallest


@dataclass(frozen=True)
class AllocationResult:
    selected: int | None
    power: float
    rate: float
    interference: float
    metric: float


def _check_duals(lam: float, mu: float):
    if lam < 0 or mu < 0:
        raise ValueError(f"multipliers must be nonnegative, got ({lam}, {mu})")
    if lam == 0 and mu == 0:
        raise ValueError("lam = mu = 0 gives an unbounded water level")


def allocate(h, g, duals, eligible=None) -> AllocationResult:
    lam, mu = float(duals.lam), float(duals.mu)
    _check_duals(lam, mu)
    h = np.asarray(h, dtype=float)
    g = np.asarray(g, dtype=float)
    if eligible is None:
        idx = np.arange(h.size)
    else:
        idx = np.unique(np.asarray(eligible, dtype=int))
        if idx.size == 0:
            raise ValueError("eligible set is empty")
    metric = h[idx] / (lam + mu * g[idx])
    j = int(np.argmax(metric))  # first maximum -> lowest index
    x, i = float(metric[j]), int(idx[j])
    hi = Fraction(float(h[i]))
    level = Fraction(lam) + Fraction(mu) * Fraction(float(g[i]))
    if hi <= level:
        return AllocationResult(None, 0.0, 0.0, 0.0, x)
    excess = (hi - level) / level  # X - 1, exactly
    power = float(excess / hi)
    return AllocationResult(i, power, math.log1p(float(excess)), float(g[i] * power), x)


def scenario_duals(scenario, duals):
    """IL networks price power at zero: only mu is used."""
    if scenario.network == "IL":
        return type(duals)(0.0, duals.mu)
    return duals


def allocate_scenario(scenario, h, g, duals) -> AllocationResult:
    if scenario.feedback == "full":
        eligible = None
    else:
        eligible = select_k_smallest(g, scenario.k).indices
    return allocate(h, g, scenario_duals(scenario, duals), eligible)


def suboptimal_il_policy(h, g, q_ave: float, eligible=None) -> AllocationResult:
    """Give the minimum-g eligible user exactly the interference budget."""
    if not q_ave > 0:
        raise ValueError("Q_ave must be positive")
    h = np.asarray(h, dtype=float)
    g = np.asarray(g, dtype=float)
    idx = np.arange(g.size) if eligible is None else np.unique(np.asarray(eligible, dtype=int))
    i = int(idx[np.argmin(g[idx])])
    power = q_ave / g[i]
    return AllocationResult(i, float(power), math.log1p(h[i] * power), float(q_ave), float(h[i] / g[i]))


def ipil_policy_power(eps: float, gamma_g: float, n: int) -> float:
    return eps * n ** min(1.0, 1.0 / gamma_g)


def suboptimal_ipil_policy(h, g, eps: float, gamma_g: float, n: int, eligible=None) -> AllocationResult:
    """Fixed power eps * N^{min(1, 1/gamma_g)} for the minimum-g eligible user.

    Feasibility is not checked here; per-user average power is
    eps * N^{min(1, 1/gamma_g) - 1} and the caller must verify the
    interference side empirically.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    h = np.asarray(h, dtype=float)
    g = np.asarray(g, dtype=float)
    idx = np.arange(g.size) if eligible is None else np.unique(np.asarray(eligible, dtype=int))
    i = int(idx[np.argmin(g[idx])])
    power = ipil_policy_power(eps, gamma_g, n)
    return AllocationResult(i, power, math.log1p(h[i] * power), float(g[i] * power), float(h[i]))


# ---- batch path ---------------------------------------------------------

def reduce_candidates(h: np.ndarray, g: np.ndarray, k: int | None = None):
    """Keep, per row, only users not dominated in (high h, low g).

    User j dominates i when h_j >= h_i and g_j <= g_i; then X_j >= X_i for
    every (lam, mu) >= 0, so the argmax over the survivors equals the argmax
    over the eligible set.  Survivors are the running-maximum records of h
    taken in ascending g order, about log K of them.  Returns padded arrays
    (h = 0, g = 1 in padding, which never wins).
    """
    t, n = h.shape
    if k is not None and k < n:
        mask = k_smallest_batch(g, k)
        sel = np.nonzero(mask)[1].reshape(t, k)
        h = np.take_along_axis(h, sel, axis=1)
        g = np.take_along_axis(g, sel, axis=1)
    order = np.argsort(g, axis=1)
    hs = np.take_along_axis(h, order, axis=1)
    gs = np.take_along_axis(g, order, axis=1)
    runmax = np.maximum.accumulate(hs, axis=1)
    rec = np.empty(hs.shape, dtype=bool)
    rec[:, 0] = True
    rec[:, 1:] = hs[:, 1:] > runmax[:, :-1]
    width = int(rec.sum(axis=1).max())
    slot = np.cumsum(rec, axis=1) - 1
    rows, cols = np.nonzero(rec)
    hr = np.zeros((t, width))
    gr = np.ones((t, width))
    hr[rows, slot[rows, cols]] = hs[rows, cols]
    gr[rows, slot[rows, cols]] = gs[rows, cols]
    return hr, gr


def evaluate_batch(hr: np.ndarray, gr: np.ndarray, lam: float, mu: float):
    """Per-trial (power, interference, rate) of the scheduled user."""
    _check_duals(lam, mu)
    x = hr / (lam + mu * gr)
    j = np.argmax(x, axis=1)[:, None]
    xs = np.take_along_axis(x, j, axis=1)[:, 0]
    hs = np.take_along_axis(hr, j, axis=1)[:, 0]
    gs = np.take_along_axis(gr, j, axis=1)[:, 0]
    on = xs >= 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        power = np.where(on, (xs - 1.0) / hs, 0.0)
        rate = np.where(on, np.log(np.where(on, xs, 1.0)), 0.0)
    return power, gs * power, rate
