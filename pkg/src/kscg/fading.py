"""Class-C channel power-gain laws.

Every model here describes a unit-mean *power* gain.  Rayleigh is the
exponential law, Nakagami-m is Gamma(m, 1/m), Weibull(c) is the square of a
Weibull(c) magnitude (a Weibull law of shape c/2 in power) and Rician(K) is a
scaled noncentral chi-square with two degrees of freedom.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate, optimize, special, stats

KINDS = ("rayleigh", "rician", "nakagami", "weibull")


@dataclass(frozen=True)
class FadingModel:
    kind: str
    param: float | None = None

    def __post_init__(self):
        kind = self.kind.lower()
        object.__setattr__(self, "kind", kind)
        if kind not in KINDS:
            raise ValueError(f"unknown fading model {self.kind!r}")
        if kind == "rayleigh":
            object.__setattr__(self, "param", None)
            return
        if self.param is None:
            raise ValueError(f"{kind} needs a parameter")
        p = float(self.param)
        object.__setattr__(self, "param", p)
        if kind == "rician" and not p >= 0:
            raise ValueError(f"Rician factor must be >= 0, got {p}")
        if kind == "nakagami" and not p >= 0.5:
            raise ValueError(f"Nakagami m must be >= 0.5, got {p}")
        if kind == "weibull" and not p > 0:
            raise ValueError(f"Weibull c must be > 0, got {p}")

    def __str__(self):
        if self.kind == "rayleigh":
            return "Rayleigh"
        label = {"rician": "Rician", "nakagami": "Nakagami", "weibull": "Weibull"}[self.kind]
        return f"{label}({self.param:g})"


def rayleigh() -> FadingModel:
    return FadingModel("rayleigh")


def rician(k_factor: float) -> FadingModel:
    return FadingModel("rician", k_factor)


def nakagami(m: float) -> FadingModel:
    return FadingModel("nakagami", m)


def weibull(c: float) -> FadingModel:
    return FadingModel("weibull", c)


def parse_model(text: str) -> FadingModel:
    """Parse ``"rayleigh"``, ``"nakagami(0.5)"``, ``"weibull:4"`` and similar."""
    s = text.strip().lower().replace(" ", "")
    for sep in ("(", ":", "="):
        if sep in s:
            kind, _, rest = s.partition(sep)
            rest = rest.rstrip(")")
            return FadingModel(kind, float(rest))
    return FadingModel(s)


def _zero(x):
    return np.zeros_like(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class ClassCParams:
    alpha: float
    l: float
    beta: float
    n: float
    eta: float
    gamma: float
    H: Callable = field(default=_zero, compare=False, repr=False)


def _weibull_beta(c: float) -> float:
    # Gamma^{c/2}(1 + 2/c): rate of the unit-mean power law
    return math.exp(0.5 * c * special.gammaln(1.0 + 2.0 / c))


def class_c_params(model: FadingModel) -> ClassCParams:
    """Tail and origin signature of ``model`` (alpha, l, beta, n, H, eta, gamma)."""
    kind, p = model.kind, model.param
    if kind == "rayleigh" or (kind == "rician" and p == 0.0):
        return ClassCParams(1.0, 0.0, 1.0, 1.0, 1.0, 1.0)
    if kind == "rician":
        k = p
        alpha = 1.0 / (2.0 * math.sqrt(math.pi) * math.exp(k) * (k * (k + 1.0)) ** 0.25)
        coef = 2.0 * math.sqrt(k * (k + 1.0))

        def H(x):
            return coef * np.sqrt(np.asarray(x, dtype=float))

        return ClassCParams(alpha, -0.25, k + 1.0, 1.0, (k + 1.0) * math.exp(-k), 1.0, H)
    if kind == "nakagami":
        m = p
        a = math.exp((m - 1.0) * math.log(m) - special.gammaln(m))
        return ClassCParams(a, m - 1.0, m, 1.0, a, m)
    c = p
    b = _weibull_beta(c)
    return ClassCParams(1.0, 0.0, b, c / 2.0, b, c / 2.0)


def sample(model: FadingModel, rng: np.random.Generator, size=None):
    """Draw unit-mean power gains from ``model`` using ``rng``."""
    kind, p = model.kind, model.param
    if kind == "rayleigh":
        return rng.standard_exponential(size)
    if kind == "nakagami":
        return rng.gamma(p, 1.0 / p, size)
    if kind == "weibull":
        # exact inverse CDF: F(x) = 1 - exp(-beta x^{c/2})
        e = rng.standard_exponential(size)
        return (e / _weibull_beta(p)) ** (2.0 / p)
    if p == 0.0:
        return rng.standard_exponential(size)
    return rng.noncentral_chisquare(2.0, 2.0 * p, size) / (2.0 * (p + 1.0))


def cdf(model: FadingModel, x):
    x = np.asarray(x, dtype=float)
    xp = np.maximum(x, 0.0)
    kind, p = model.kind, model.param
    if kind == "rayleigh" or (kind == "rician" and p == 0.0):
        out = -np.expm1(-xp)
    elif kind == "nakagami":
        out = special.gammainc(p, p * xp)
    elif kind == "weibull":
        out = -np.expm1(-_weibull_beta(p) * xp ** (p / 2.0))
    else:
        out = stats.ncx2.cdf(2.0 * (p + 1.0) * xp, 2.0, 2.0 * p)
    out = np.where(x > 0, out, 0.0)
    return out[()] if out.ndim == 0 else out


def sf(model: FadingModel, x):
    """Survival function 1 - F(x), accurate deep in the tail."""
    x = np.asarray(x, dtype=float)
    xp = np.maximum(x, 0.0)
    kind, p = model.kind, model.param
    if kind == "rayleigh" or (kind == "rician" and p == 0.0):
        out = np.exp(-xp)
    elif kind == "nakagami":
        out = special.gammaincc(p, p * xp)
    elif kind == "weibull":
        out = np.exp(-_weibull_beta(p) * xp ** (p / 2.0))
    else:
        out = stats.ncx2.sf(2.0 * (p + 1.0) * xp, 2.0, 2.0 * p)
    out = np.where(x > 0, out, 1.0)
    return out[()] if out.ndim == 0 else out


def pdf(model: FadingModel, x):
    x = np.asarray(x, dtype=float)
    kind, p = model.kind, model.param
    with np.errstate(divide="ignore", invalid="ignore"):
        if kind == "rayleigh" or (kind == "rician" and p == 0.0):
            out = np.exp(-x)
        elif kind == "nakagami":
            out = stats.gamma.pdf(x, p, scale=1.0 / p)
        elif kind == "weibull":
            k = p / 2.0
            b = _weibull_beta(p)
            out = b * k * x ** (k - 1.0) * np.exp(-b * x**k)
        else:
            s = 2.0 * (p + 1.0)
            out = s * stats.ncx2.pdf(s * x, 2.0, 2.0 * p)
    out = np.where(x > 0, out, 0.0)
    return out[()] if out.ndim == 0 else out


def quantile(model: FadingModel, q: float) -> float:
    """Numeric inverse of :func:`cdf` by bracketed root finding."""
    if not 0.0 < q < 1.0:
        raise ValueError(f"quantile level must lie in (0, 1), got {q}")
    hi = 1.0
    while cdf(model, hi) < q:
        hi *= 2.0
    lo = hi / 2.0
    while lo > 1e-300 and cdf(model, lo) > q:
        lo /= 2.0
    return optimize.brentq(lambda t: cdf(model, t) - q, lo, hi, xtol=1e-300, rtol=1e-13)


# G is increasing on (0, inf) for every catalog model once x >= 1.
TAIL_THRESHOLD = 1.0


def tail_g(params: ClassCParams, x):
    """G(x) = x^{-l} exp(beta x^n - H(x)) / alpha, the tail characterisation."""
    x = np.asarray(x, dtype=float)
    if np.any(x < TAIL_THRESHOLD):
        raise ValueError(f"tail_g needs x >= {TAIL_THRESHOLD}")
    return np.exp(log_tail_g(params, x))


def log_tail_g(params: ClassCParams, x):
    x = np.asarray(x, dtype=float)
    return -params.l * np.log(x) + params.beta * x**params.n - params.H(x) - math.log(params.alpha)


def tail_g_inv(params: ClassCParams, y: float) -> float:
    """Solve G(z) = y for z >= TAIL_THRESHOLD."""
    if math.isinf(y):
        raise ValueError("tail_g_inv got an infinite argument; use log_tail_g_inv")
    return log_tail_g_inv(params, math.log(y))


def log_tail_g_inv(params: ClassCParams, log_y: float) -> float:
    """Solve log G(z) = log_y; usable where G itself overflows."""
    floor = float(log_tail_g(params, TAIL_THRESHOLD))
    if log_y < floor:
        raise ValueError(f"tail_g_inv argument exp({log_y}) is below G({TAIL_THRESHOLD}) = {math.exp(floor)}")
    if log_y == floor:
        return TAIL_THRESHOLD

    def f(z):
        return float(log_tail_g(params, z)) - log_y

    hi = 2.0 * TAIL_THRESHOLD
    while f(hi) < 0:
        hi *= 2.0
    return optimize.brentq(f, TAIL_THRESHOLD, hi, xtol=1e-300, rtol=1e-13)


def moment(model: FadingModel, p: float) -> float:
    """E[X^p] for the unit-mean power gain X."""
    if not p > 0:
        raise ValueError(f"moment order must be positive, got {p}")
    kind, a = model.kind, model.param
    if kind == "rayleigh" or (kind == "rician" and a == 0.0):
        return math.gamma(1.0 + p)
    if kind == "nakagami":
        return math.exp(special.gammaln(a + p) - special.gammaln(a) - p * math.log(a))
    if kind == "weibull":
        return math.exp(special.gammaln(1.0 + 2.0 * p / a) - p * special.gammaln(1.0 + 2.0 / a))
    # Rician: no elementary closed form used here, integrate the density
    scale = 1.0 + 2.0 * math.sqrt(a / (a + 1.0)) + 1.0
    body, _ = integrate.quad(lambda t: t**p * pdf(model, t), 0.0, scale * 4,
                             epsabs=0.0, epsrel=1e-11, limit=200)
    tail, _ = integrate.quad(lambda t: t**p * pdf(model, t), scale * 4, np.inf,
                             epsabs=0.0, epsrel=1e-11, limit=200)
    return body + tail
