"""K-smallest selection and the order-statistic facts behind it."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from . import fading
from .fading import FadingModel


@dataclass(frozen=True)
class KscgSelection:
    indices: tuple[int, ...]
    threshold: float


def select_k_smallest(g, k: int) -> KscgSelection:
    """Indices of the ``k`` smallest gains, ascending in gain, ties to the lower index."""
    g = np.asarray(g, dtype=float)
    n = g.size
    if not 1 <= k <= n:
        raise ValueError(f"K must lie in [1, {n}], got {k}")
    if k < n:
        part = np.argpartition(g, k - 1)[:k]
        # argpartition is not tie-stable; widen to every gain equal to the k-th value
        kth = g[part].max()
        cand = np.flatnonzero(g <= kth)
    else:
        cand = np.arange(n)
    order = cand[np.lexsort((cand, g[cand]))][:k]
    return KscgSelection(tuple(int(i) for i in order), float(g[order[-1]]))


def k_smallest_batch(g: np.ndarray, k: int) -> np.ndarray:
    """Row-wise K-smallest mask for a (trials, N) array of gains."""
    n = g.shape[-1]
    if not 1 <= k <= n:
        raise ValueError(f"K must lie in [1, {n}], got {k}")
    if k == n:
        return np.ones(g.shape, dtype=bool)
    idx = np.argpartition(g, k - 1, axis=-1)[..., :k]
    mask = np.zeros(g.shape, dtype=bool)
    np.put_along_axis(mask, idx, True, axis=-1)
    return mask


def beta_law_check(model: FadingModel, n: int, k: int, trials: int,
                   rng: np.random.Generator, *, return_z: bool = False):
    """KS distance between F(g_(K:N)) and Beta(K, N-K+1) over ``trials`` draws."""
    if trials < 1000:
        raise ValueError("beta_law_check needs at least 1000 trials")
    if not 1 <= k <= n:
        raise ValueError(f"K must lie in [1, {n}], got {k}")
    z = np.empty(trials)
    step = max(1, 2_000_000 // n)
    for start in range(0, trials, step):
        stop = min(trials, start + step)
        g = fading.sample(model, rng, (stop - start, n))
        kth = np.partition(g, k - 1, axis=1)[:, k - 1]
        z[start:stop] = fading.cdf(model, kth)
    ks = stats.kstest(z, stats.beta(k, n - k + 1).cdf).statistic
    return (ks, z) if return_z else ks


def sample_max(model: FadingModel, n: int, trials: int, rng: np.random.Generator) -> np.ndarray:
    out = np.empty(trials)
    step = max(1, 4_000_000 // n)
    for start in range(0, trials, step):
        stop = min(trials, start + step)
        out[start:stop] = fading.sample(model, rng, (stop - start, n)).max(axis=1)
    return out


def concentration_interval(model: FadingModel, n: int, eps: float) -> tuple[float, float]:
    """(G^{-1}(N^{1-eps}), G^{-1}(N^{1+eps})] for the maximum of N draws."""
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    params = fading.class_c_params(model)
    return (fading.tail_g_inv(params, n ** (1.0 - eps)),
            fading.tail_g_inv(params, n ** (1.0 + eps)))


def concentration_check(model: FadingModel, n: int, eps: float, trials: int,
                        rng: np.random.Generator) -> float:
    """Fraction of trials whose maximum lands in the concentration interval."""
    lo, hi = concentration_interval(model, n, eps)
    y = sample_max(model, n, trials, rng)
    return float(np.mean((y > lo) & (y <= hi)))


def concentration_probability(model: FadingModel, n: int, eps: float) -> float:
    """Exact P(lo < max <= hi) = F(hi)^N - F(lo)^N."""
    lo, hi = concentration_interval(model, n, eps)
    # F^N = exp(N log1p(-sf)) keeps precision when sf is tiny
    upper = math.exp(n * math.log1p(-float(fading.sf(model, hi))))
    lower = math.exp(n * math.log1p(-float(fading.sf(model, lo))))
    return upper - lower


def g_min_scaling(model: FadingModel, n: int, trials: int, rng: np.random.Generator) -> float:
    """Monte Carlo E[min g] divided by F^{-1}(1/N)."""
    if n < 2:
        raise ValueError("g_min_scaling needs N >= 2")
    if trials < 10_000:
        raise ValueError("g_min_scaling needs at least 10^4 trials")
    step = max(1, 4_000_000 // n)
    mins = []
    for start in range(0, trials, step):
        stop = min(trials, start + step)
        mins.append(fading.sample(model, rng, (stop - start, n)).min(axis=1))
    return float(np.concatenate(mins).mean() / fading.quantile(model, 1.0 / n))


def g_min_limit(model: FadingModel) -> float:
    """Gamma(1 + 1/gamma_g), the limit of :func:`g_min_scaling`."""
    return math.gamma(1.0 + 1.0 / fading.class_c_params(model).gamma)
