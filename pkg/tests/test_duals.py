import math

import numpy as np
import pytest
from scipy import integrate, optimize

from kscg.batch import ChannelBatch, draw_batch, draw_channels
from kscg.duals import DualVariables as D, SolverError, estimate_constraints, solve_duals
from kscg.fading import nakagami, rayleigh, weibull
from kscg.scenario import ScenarioConfig

P = 10 ** 1.5


def sc(network="TPIL", stsb=rayleigh(), stpb=rayleigh(), n=16, **kw):
    return ScenarioConfig(network, stsb, stpb, n, **kw)


def sample_dual(v, h, g, p_target, q_target):
    """Sample-average Lagrange dual, minimised directly as an independent oracle."""
    lam, mu = np.exp(v)
    x = (h / (lam + mu * g)).max(axis=1)
    phi = np.where(x > 1, np.log(np.maximum(x, 1)) - 1 + 1 / x, 0.0)
    return phi.mean() + lam * p_target + mu * q_target


# -- oracles -------------------------------------------------------------------------

def test_single_user_power_quadrature():
    s = sc(n=1, q_ave=math.inf)
    batch = draw_batch(s, 100_000, 3, "validate")
    est = estimate_constraints(s, D(1 / P, 0.0), batch)
    exact, _ = integrate.quad(lambda h: (P - 1 / h) * math.exp(-h), 1 / P, np.inf)
    assert est.avg_total_power == pytest.approx(exact, rel=0.02)


@pytest.mark.parametrize("stsb, stpb, n", [(weibull(4), nakagami(0.5), 64), (rayleigh(), weibull(1), 256)])
def test_solver_matches_direct_dual_minimisation(stsb, stpb, n):
    s = sc("TPIL", stsb, stpb, n, p_ave=P)
    h, g = draw_channels(stsb, stpb, n, 4000, np.random.default_rng(5))
    d = solve_duals(s, batch=ChannelBatch(h, g, n, n))
    res = optimize.minimize(sample_dual, [math.log(1 / P), math.log(0.1)], args=(h, g, P, 1.0),
                            method="Nelder-Mead", options=dict(xatol=1e-10, fatol=1e-14, maxiter=4000))
    lam, mu = np.exp(res.x)
    assert d.lam == pytest.approx(lam, rel=1e-3)
    assert d.mu == pytest.approx(mu, rel=1e-3)


# -- examples --------------------------------------------------------------------------

def test_huge_lambda_gives_no_power():
    s = sc()
    est = estimate_constraints(s, D(1e6, 0.0), draw_batch(s, 2000, 0))
    assert est.avg_total_power < 1e-4


def test_monotone_on_fixed_batch():
    s = sc(stsb=weibull(1), stpb=nakagami(0.5), n=32)
    batch = draw_batch(s, 5000, 1)
    lams = np.geomspace(1e-3, 1.0, 25)
    pw = [estimate_constraints(s, D(l, 0.1), batch).avg_total_power for l in lams]
    assert all(a >= b for a, b in zip(pw, pw[1:]))
    mus = np.geomspace(1e-3, 10.0, 25)
    it = [estimate_constraints(s, D(0.03, m), batch).avg_interference for m in mus]
    assert all(a >= b for a, b in zip(it, it[1:]))


def test_il_full_mu_near_inverse_budget():
    d = solve_duals(sc("IL", n=1024), 20_000, seed=2)
    assert d.lam == 0.0
    assert d.mu == pytest.approx(1.0, rel=0.10)


def test_kscg_tpil_interference_slack():
    d = solve_duals(sc("TPIL", n=1024, p_ave=P, feedback="kscg", k_exponent=0.5), 20_000, seed=2)
    assert d.mu == 0.0
    assert d.lam * P == pytest.approx(1.0, abs=0.1)


def test_primary_mac_lambda():
    for n in (64, 256, 1024):
        d = solve_duals(sc("IPIL", n=n, p_ave=P, q_ave=math.inf), 20_000, seed=2)
        assert d.mu == 0.0
        assert 0.85 <= n * d.lam * P <= 1.15


@pytest.mark.parametrize("s", [
    sc("TPIL", weibull(4), nakagami(0.5), 128, p_ave=P),
    sc("TPIL", weibull(1), nakagami(0.5), 128, p_ave=P, feedback="kscg", k_exponent=0.5),
    sc("IL", rayleigh(), weibull(1), 128),
    sc("IPIL", rayleigh(), weibull(2.5), 128, p_ave=P, feedback="kscg", k_const=1),
], ids=lambda s: s.label)
def test_solution_meets_budgets_and_bounds(s):
    tol = 0.02
    batch = draw_batch(s, 20_000, 4, "solve")
    d = solve_duals(s, tol=tol, batch=batch)
    est = estimate_constraints(s, d, batch)
    if s.power_target is not None:
        assert est.avg_total_power <= s.power_target * (1 + tol)
        assert d.lam <= (1 + tol) / s.power_target
        if d.lam > 0:
            assert est.avg_total_power == pytest.approx(s.power_target, rel=tol)
    assert d.mu <= (1 + tol) / s.q_ave
    assert est.avg_interference <= s.q_ave * (1 + tol)
    if d.mu > 0:
        assert est.avg_interference == pytest.approx(s.q_ave, rel=tol)
    else:
        # complementary slackness: budget already met at mu = 0
        assert estimate_constraints(s, D(d.lam, 0.0), batch).avg_interference <= s.q_ave


def test_unreachable_budget_raises():
    s = sc("TPIL", n=4, q_ave=math.inf)
    batch = ChannelBatch(np.zeros((2000, 1)), np.ones((2000, 1)), 4, 4)
    with pytest.raises(SolverError) as err:
        solve_duals(s, batch=batch)
    assert err.value.bracket is not None


def test_bad_tolerance_rejected():
    with pytest.raises(ValueError):
        solve_duals(sc(), tol=0.5)
