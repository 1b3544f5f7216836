"""How far finite networks are from the limits.

Two slow convergences show up at desk-scale N.  The maximum of N exponential
gains concentrates in ((1-eps) log N, (1+eps) log N] only slowly.  An IPIL
network with gamma_g < 1 behaves like an interference-limited one until N
is in the tens of thousands.
"""
import math

import numpy as np

from kscg import fading, order_stats
from kscg.fading import rayleigh, weibull
from kscg.scaling import run_sweep, theory_curve
from kscg.scenario import ScenarioConfig

print("exact P((1-eps) log N < max <= (1+eps) log N), Rayleigh")
for eps in (0.1, 0.2, 0.3, 0.5):
    row = [order_stats.concentration_probability(rayleigh(), n, eps) for n in (1e2, 1e4, 1e6, 1e9)]
    print(f"  eps={eps:<4}" + "".join(f"{v:8.3f}" for v in row))
mc = order_stats.concentration_check(rayleigh(), 10_000, 0.2, 10_000, np.random.default_rng(1))
print(f"Monte Carlo at N=1e4, eps=0.2: {mc:.3f}")

base = ScenarioConfig.from_db("IPIL", rayleigh(), weibull(1.5), 16, p_ave_db=15, q_ave_db=0)
n_list = [16, 32, 64, 128, 256, 512, 1024]
res = run_sweep(base, n_list, 5000, seed=1)
mac = dict(theory_curve(base, n_list))
il = dict(theory_curve(base.replace(network="IL"), n_list))
print(f"\nIPIL Rayleigh/Weibull(1.5): fitted slope {res.fitted_slope:.3f}, theory {res.theory_slope:.3f}")
for p in res.points:
    print(f"  N={p.n:5d} rate {p.sum_rate:6.3f}  log N + log P {mac[p.n]:6.3f}  IL curve {il[p.n]:6.3f}  mu {p.mu:.3f}")

g = fading.class_c_params(weibull(1.5))
shift = math.log(g.eta * fading.moment(rayleigh(), g.gamma))
cross = (math.log(base.p_ave) - shift / g.gamma) / (1 / g.gamma - 1)
print(f"the two curves cross near N = {math.exp(cross):.3g}")
