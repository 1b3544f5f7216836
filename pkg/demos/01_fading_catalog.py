"""A tour of the fading catalog.

Every model is a unit-mean power gain.  The class-C signature describes how
the CDF behaves near zero (eta, gamma) and how fast the tail dies (alpha, l,
beta, n, H).  Interference links care about the origin, data links care
about the tail.
"""
import numpy as np

from kscg import fading
from kscg.fading import nakagami, rayleigh, rician, weibull

models = [rayleigh(), rician(1.0), nakagami(0.5), nakagami(2.0), weibull(1.0), weibull(4.0)]
rng = np.random.default_rng(0)

print(f"{'model':<14}{'alpha':>9}{'l':>7}{'beta':>8}{'n':>6}{'eta':>8}{'gamma':>7}{'mean':>8}")
for m in models:
    p = fading.class_c_params(m)
    mean = fading.sample(m, rng, 200_000).mean()
    print(f"{str(m):<14}{p.alpha:9.4f}{p.l:7.2f}{p.beta:8.4f}{p.n:6.2f}{p.eta:8.4f}{p.gamma:7.2f}{mean:8.4f}")

# near the origin F(x) ~ eta x^gamma, which is what makes a small g likely
print("\nF(x) / (eta x^gamma) at x = 1e-4")
for m in models:
    p = fading.class_c_params(m)
    print(f"  {str(m):<14}{fading.cdf(m, 1e-4) / (p.eta * 1e-4 ** p.gamma):.5f}")

# far out, (1 - F) G -> 1; the maximum of N gains sits near G^{-1}(N)
print("\nlocation of the maximum of N = 1000 gains")
for m in models:
    p = fading.class_c_params(m)
    top = fading.sample(m, rng, (2000, 1000)).max(axis=1)
    print(f"  {str(m):<14}G^-1(N) = {fading.tail_g_inv(p, 1000.0):6.3f}   median max = {np.median(top):6.3f}")
