"""Interference-limited networks: one gain of feedback is enough.

With no power budget the rate is set by how small the best interference
gain is, so reporting just the minimum g (K = 1) keeps the log N slope.
The price is a constant: the scheduled user's data gain is no longer picked
for size.  That constant is log E[h] - E[log h] in the limit, which is large
for a Nakagami(0.5) data link.
"""
import math

from scipy import special

from kscg.fading import nakagami, rician, weibull
from kscg.scaling import run_sweep
from kscg.scenario import ScenarioConfig

n_list = [16, 32, 64, 128, 256, 512, 1024]
trials = 5000

for stsb, stpb in [(rician(1), weibull(1)), (rician(1), nakagami(1.2)), (nakagami(0.5), rician(1))]:
    base = ScenarioConfig("IL", stsb, stpb, 16, q_ave=1.0)
    full = run_sweep(base, n_list, trials, seed=1)
    one = run_sweep(base.replace(feedback="kscg", k_const=1), n_list, trials, seed=1)
    gaps = [a.sum_rate - b.sum_rate for a, b in zip(full.points, one.points)]
    print(f"{stsb}/{stpb}: slope {full.fitted_slope:.3f} (theory {full.theory_slope:.3f}), "
          f"K=1 slope {one.fitted_slope:.3f}, gap {min(gaps):.2f}..{max(gaps):.2f} nats, "
          f"mu*Q at N=1024 {full.points[-1].mu:.3f}")

m = 0.5
print(f"\nlimiting K=1 gap for Nakagami({m}) data links: {-(special.digamma(m) - math.log(m)):.3f} nats")
