"""Exit criteria for the solver, one test per criterion.

Run ``pytest tests/test_acceptance.py`` to get a PASS/FAIL line per criterion
in the terminal summary.
"""

import itertools
import time
from dataclasses import replace

import numpy as np
import pytest

from roaming import (
    GameParams,
    PricePair,
    closed_form_ne,
    closed_form_rstar,
    find_rstar,
    fonc_residual,
    solve_demand,
    solve_ne,
    sweep_utilities_vs_r,
    utilities_full,
    utilities_simplified,
)
from roaming.cli import main
from roaming.model import Congestion

from oracles import brute_demand, g_vec

FIG = GameParams(delta=1.0, b1=10.0, b2=1.0)
R_LIMIT = 20 / 9


def test_c1_closed_form_ne_reproduction(criterion):
    """C1 numeric NE at delta=1, phi=0.9, r=0.8 is (0.38, 0.38) and matches the closed form"""
    params = replace(FIG, r=0.8)
    t0 = time.perf_counter()
    ne = solve_ne(params)
    elapsed = time.perf_counter() - t0
    cf = closed_form_ne(params)
    dev_paper = max(abs(ne.prices.p1 - 0.38), abs(ne.prices.p2 - 0.38))
    dev_cf = max(abs(ne.prices.p1 - cf.p1), abs(ne.prices.p2 - cf.p2))
    criterion.check(ne.converged, f"converged in {ne.iterations} iterations")
    criterion.check(dev_paper < 5e-3, f"|p* - 0.38| = {dev_paper:.2e} < 5e-3")
    criterion.check(dev_cf < 1e-6, f"|p* - closed form| = {dev_cf:.2e} < 1e-6")
    criterion.check(elapsed < 1.0, f"runtime {elapsed:.3f}s < 1s")


def test_c2_oracle_equivalence_grid(criterion):
    """C2 75-point (delta, phi, r) grid: numeric NE equals closed form, SOC holds, utilities > 0"""
    t0 = time.perf_counter()
    worst, soc, positive, n = 0.0, True, True, 0
    for delta, ph, target in itertools.product([0.5, 1.0, 2.0], [0.0, 0.25, 0.5, 0.75, 0.9],
                                               [0.0, 0.5, 1.0, 1.5, 1.9]):
        r = target / (delta * ph) if ph > 0 else target / delta
        params = GameParams.from_phi(ph, delta=delta, r=r)
        ne = solve_ne(params)
        cf = closed_form_ne(params)
        worst = max(worst, abs(ne.prices.p1 - cf.p1), abs(ne.prices.p2 - cf.p2))
        soc &= ne.soc_ok
        positive &= ne.utilities.u1 > 0 and ne.utilities.u2 > 0
        n += 1
    elapsed = time.perf_counter() - t0
    criterion.check(n == 75, f"{n} grid points")
    criterion.check(worst < 1e-6, f"max |numeric - closed form| = {worst:.2e} < 1e-6")
    criterion.check(soc, "second-order conditions hold at every point")
    criterion.check(positive, "U1*, U2* > 0 at every point")
    criterion.check(elapsed < 10.0, f"runtime {elapsed:.2f}s < 10s")


def test_c3_fair_roaming_charge(criterion):
    """C3 fair roaming charge r* = 1.30178 at delta=1, phi=0.9; root-find equals closed form on a grid"""
    t0 = time.perf_counter()
    res = find_rstar(FIG)
    criterion.check(abs(res.r_star - 1.30178) < 1e-4, f"r* = {res.r_star:.6f}, |r* - 1.30178| < 1e-4")
    worst = 0.0
    for ph in [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95]:
        for delta in [0.5, 1.0, 2.0]:
            params = GameParams.from_phi(ph, delta=delta)
            worst = max(worst, abs(find_rstar(params).r_star - closed_form_rstar(params)))
    elapsed = time.perf_counter() - t0
    criterion.check(worst < 1e-6, f"max |root-find - closed form| = {worst:.2e} < 1e-6 over 30 cases")
    criterion.check(elapsed < 10.0, f"runtime {elapsed:.2f}s < 10s")


@pytest.fixture(scope="module")
def fine_sweep():
    # last grid point sits exactly at 20/9 - step
    n = 1000
    step = R_LIMIT / n
    return step, sweep_utilities_vs_r(FIG, step * np.arange(1, n))


def test_c4_utilities_shape(criterion, fine_sweep):
    """C4 U1*, U2* positive and nonincreasing in r, both below 1e-6 at 20/9 - step"""
    step, table = fine_sweep
    r, u1, u2 = table.column("r"), table.column("u1"), table.column("u2")
    criterion.check(abs(r[-1] - (R_LIMIT - step)) < 1e-12, f"last grid point r = {r[-1]:.6f} = 20/9 - {step:.2e}")
    criterion.check(bool(np.all(u1 > 0) and np.all(u2 > 0)), "U1*, U2* > 0 on the whole grid")
    criterion.check(u1[-1] < 1e-6 and u2[-1] < 1e-6, f"U1* = {u1[-1]:.2e}, U2* = {u2[-1]:.2e} < 1e-6 at the edge")
    criterion.check(bool(np.all(np.diff(u2) <= 0)), "U2* nonincreasing")
    rises = np.flatnonzero(np.diff(u1) > 0)
    criterion.check(
        rises.size == 0,
        "U1* nonincreasing" if rises.size == 0 else
        f"U1* increases on r in [{r[rises[0]]:.4f}, {r[rises[-1] + 1]:.4f}] (peak {u1.max():.5f} "
        f"at r = {r[np.argmax(u1)]:.4f})",
    )


def test_c5_fairness_gap_sign(criterion, fine_sweep):
    """C5 fairness gap negative for every sampled r < r*, positive for every sampled r > r*"""
    _, table = fine_sweep
    r, gap = table.column("r"), table.column("gap")
    rs = closed_form_rstar(FIG)
    below, above = gap[r < rs], gap[r > rs]
    criterion.check(bool(np.all(below < 0)), f"{below.size} points below r* all negative")
    criterion.check(bool(np.all(above > 0)), f"{above.size} points above r* all positive")


def test_c6_no_boundary_equilibria(criterion):
    """C6 dU2/dp2 > 0 at p2 = 0 for p1 > 0, and p1 = 0 gives U1 = U2 = 0"""
    params = replace(FIG, r=0.8)
    p1s = np.linspace(0.01, 1.27, 64)
    slopes = [fonc_residual(PricePair(p1, 0.0), params)[1] for p1 in p1s]
    criterion.check(min(slopes) > 0, f"min dU2/dp2 at p2=0 over {p1s.size} values of p1: {min(slopes):.3e} > 0")
    zeros = [utilities_simplified(PricePair(0.0, p2), params) for p2 in np.linspace(0, 1.28, 33)]
    criterion.check(all(u.u1 == 0 and u.u2 == 0 for u in zeros), "U1 = U2 = 0 whenever p1 = 0")


def _random_case(rng, model):
    b1 = rng.uniform(0.5, 20.0)
    b2 = b1 * rng.uniform(0.05, 1.0)
    params = GameParams(
        delta=rng.uniform(0.3, 3.0), d_max=rng.uniform(0.2, 20.0), r=rng.uniform(0.0, 2.0),
        b1=b1, b2=b2, gamma=b2 * rng.uniform(0.02, 0.8), congestion=model,
    )
    cap = 2.0 / params.delta
    return params, PricePair(rng.uniform(0.0, cap), rng.uniform(0.0, cap))


def test_c7_demand_fixed_point(criterion):
    """C7 demand fixed point: residuals < 1e-9 D_max and agreement with a grid scan, 1000 draws per model"""
    rng = np.random.default_rng(20240611)
    for model in Congestion:
        worst_res, worst_scan = 0.0, 0.0
        for _ in range(1000):
            params, prices = _random_case(rng, model)
            d = solve_demand(prices, params)
            ph, r = params.phi, params.r
            total = params.d_max * max(0.0, 1 - params.delta * (prices.p1 + prices.p2 + ph * r) / 2)
            s = prices.p1 + prices.p2 + ph * r
            g1 = float(g_vec(d.d1 + ph * d.d2, params.b1, params.gamma, model.value))
            g2 = float(g_vec((1 - ph) * d.d2, params.b2, params.gamma, model.value))
            res1 = abs(d.d1 - total * (prices.p2 + ph * r) / s * g1)
            res2 = abs(d.d2 - total * prices.p1 / s * g2)
            worst_res = max(worst_res, res1 / params.d_max, res2 / params.d_max)
            ref = brute_demand(prices.p1, prices.p2, params.delta, params.d_max, r, params.b1, params.b2,
                               params.gamma, model.value)
            worst_scan = max(worst_scan, abs(d.d1 - ref[0]), abs(d.d2 - ref[1]))
        criterion.check(worst_res < 1e-9, f"{model.value}: max residual / D_max = {worst_res:.2e} < 1e-9")
        criterion.check(worst_scan < 1e-6, f"{model.value}: max |solver - grid scan| = {worst_scan:.2e} < 1e-6")


def test_c8_simplified_full_consistency(criterion):
    """C8 utilities_full equals utilities_simplified to 1e-12 relative without costs or congestion"""
    rng = np.random.default_rng(8)
    worst = 0.0
    for _ in range(1000):
        params = GameParams.from_phi(rng.uniform(0, 0.99), delta=rng.uniform(0.3, 3.0),
                                     r=rng.uniform(0, 2.0), d_max=rng.uniform(0.1, 10.0), b1=100.0)
        prices = PricePair(*rng.uniform(0.0, 2.0 / params.delta, 2))
        a, b = utilities_full(prices, params), utilities_simplified(prices, params)
        for x, y in ((a.u1, b.u1), (a.u2, b.u2)):
            worst = max(worst, abs(x - y) / max(abs(y), 1e-300) if y != 0 else abs(x))
    criterion.check(worst < 1e-12, f"max relative difference {worst:.2e} < 1e-12 over 1000 price pairs")


def test_c9_sweep_determinism(criterion, tmp_path):
    """C9 repeated sweep runs with the same config give byte-identical CSV bodies"""
    cfg = tmp_path / "fig2.cfg"
    cfg.write_text("delta = 1\nb1 = 10\nb2 = 1\npoints = 200\n")
    bodies = []
    for k in range(3):
        out = tmp_path / f"run{k}.csv"
        assert main(["sweep", "--config", str(cfg), "-o", str(out)]) == 0
        raw = out.read_bytes()
        bodies.append(b"".join(ln for ln in raw.splitlines(keepends=True) if not ln.startswith(b"#")))
    criterion.check(bodies[0] == bodies[1] == bodies[2] and len(bodies[0]) > 0,
                    f"3 runs, {len(bodies[0])} body bytes each, identical")
