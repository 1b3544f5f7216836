"""Sum-rate sweeps over N, slope fits and the reference curves."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import fading
from .fading import FadingModel
from .scenario import ScenarioConfig
from .simulator import EstimateResult, estimate, estimate_many


@dataclass(frozen=True)
class SweepPoint:
    n: int
    k: int
    sum_rate: float
    rate_hw: float
    interference: float
    intf_hw: float
    lam: float
    mu: float
    power: float = math.nan
    power_hw: float = math.nan

    @classmethod
    def from_estimate(cls, r: EstimateResult) -> "SweepPoint":
        return cls(r.n, r.k, r.sum_rate, r.rate_hw, r.interference, r.intf_hw,
                   r.duals.lam, r.duals.mu, r.power, r.power_hw)


@dataclass(frozen=True)
class SweepResult:
    points: list[SweepPoint]
    regressor_kind: str
    fitted_slope: float
    fitted_intercept: float
    slope_se: float
    theory_slope: float
    scenario: ScenarioConfig = field(repr=False, default=None)

    @property
    def n_values(self):
        return [p.n for p in self.points]

    @property
    def rates(self):
        return np.array([p.sum_rate for p in self.points])


def regressor_kind(scenario: ScenarioConfig) -> str:
    return "loglogN" if scenario.network == "TPIL" else "logN"


def regressor(kind: str, values) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    if kind in ("loglogN", "loglogK"):
        return np.log(np.log(v))
    if kind in ("logN", "logK"):
        return np.log(v)
    raise ValueError(f"unknown regressor {kind!r}")


def theory_slope(scenario: ScenarioConfig) -> float:
    if scenario.network == "TPIL":
        return 1.0 / fading.class_c_params(scenario.stsb).n
    gamma_g = fading.class_c_params(scenario.stpb).gamma
    if scenario.network == "IL":
        return 1.0 / gamma_g
    return min(1.0, 1.0 / gamma_g)


def weighted_fit(x, y, hw) -> tuple[float, float, float]:
    """Weighted least squares line; weights are inverse CI variances.

    Returns (slope, intercept, slope standard error).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    w = 1.0 / np.square(np.maximum(np.asarray(hw, dtype=float), 1e-12))
    sw = w.sum()
    xm, ym = (w * x).sum() / sw, (w * y).sum() / sw
    sxx = (w * (x - xm) ** 2).sum()
    slope = (w * (x - xm) * (y - ym)).sum() / sxx
    intercept = ym - slope * xm
    # hw is a 95% half-width, so sigma_i = hw_i / 1.96
    se = 1.959963984540054 ** -1 / math.sqrt(sxx)
    return float(slope), float(intercept), float(se)


def fit_points(points, kind: str, use_k: bool = False):
    xs = [p.k if use_k else p.n for p in points]
    return weighted_fit(regressor(kind, xs), [p.sum_rate for p in points],
                        [p.rate_hw for p in points])


def run_sweep(base: ScenarioConfig, n_list, trials: int = 20_000, seed: int = 0,
              **kw) -> SweepResult:
    n_list = [int(n) for n in n_list]
    if len(n_list) < 5 or max(n_list) < 512:
        raise ValueError("a sweep needs at least 5 values of N reaching 512 or more")
    if min(n_list) < 3:
        raise ValueError("log log N needs N >= 3")
    results = estimate_many(base, n_list, trials, seed, **kw)
    points = [SweepPoint.from_estimate(r) for r in results]
    kind = regressor_kind(base)
    slope, intercept, se = fit_points(points, kind)
    return SweepResult(points, kind, slope, intercept, se, theory_slope(base), base)


def theory_curve(scenario: ScenarioConfig, n_list) -> list[tuple[int, float]]:
    """Second-order reference curve in nats.

    TPIL: (1/n_h) log log N + log P_ave + (1/n_h) log(1/beta_h).
    IL:   (1/gamma_g) log N + log Q_ave + (1/gamma_g) log(eta_g E[h^gamma_g]).
    IPIL: log N + log P_ave when gamma_g <= 1, the IL curve otherwise.
    """
    n = np.asarray(n_list, dtype=float)
    ph = fading.class_c_params(scenario.stsb)
    pg = fading.class_c_params(scenario.stpb)
    net = scenario.network
    if net == "TPIL":
        y = (np.log(np.log(n)) + math.log(1.0 / ph.beta)) / ph.n + math.log(scenario.p_ave)
    elif net == "IL" or (net == "IPIL" and pg.gamma > 1.0):
        if not scenario.has_interference_limit:
            raise ValueError("the interference-limited curve needs a finite Q_ave")
        shift = math.log(pg.eta * fading.moment(scenario.stsb, pg.gamma))
        y = (np.log(n) + shift) / pg.gamma + math.log(scenario.q_ave)
    elif net == "IPIL":
        y = np.log(n) + math.log(scenario.p_ave)
    else:
        raise ValueError(f"no reference curve for {net}")
    return [(int(a), float(b)) for a, b in zip(n_list, y)]


def with_parameter(model: FadingModel, value: float) -> FadingModel:
    if model.kind == "rayleigh":
        raise ValueError("Rayleigh has no parameter to vary")
    return FadingModel(model.kind, value)


def parameter_study(scenario: ScenarioConfig, link: str, grid, n: int = 50,
                    trials: int = 20_000, seed: int = 0, **kw) -> list[tuple[float, float]]:
    """Sum-rate at fixed N as one fading parameter of ``link`` ("stsb"/"stpb") varies."""
    if link not in ("stsb", "stpb"):
        raise ValueError("link must be 'stsb' or 'stpb'")
    out = []
    for v in grid:
        sc = scenario.replace(n=n, **{link: with_parameter(getattr(scenario, link), v)})
        out.append((float(v), estimate(sc, trials, seed, **kw).sum_rate))
    return out
