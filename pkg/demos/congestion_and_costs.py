# The general model: congestion feedback in demand and operating costs.
#
# Demand here depends on itself through the congestion factor g, so each
# price pair needs a fixed-point solve. Nothing below has a closed form to
# compare against; the equilibrium is certified by re-solving best responses
# and checking the second-order condition numerically.

from dataclasses import replace

from roaming import BracketError, GameParams, PricePair, find_rstar, solve_demand, solve_ne

base = GameParams(delta=1.0, r=0.8, b1=2.0, b2=0.2, gamma=0.05, d_max=1.0)
prices = PricePair(0.4, 0.4)

for model in ("none", "linear", "mm1"):
    d = solve_demand(prices, replace(base, congestion=model))
    print(f"{model:>6}: D1 = {d.d1:.5f}  D2 = {d.d2:.5f}")

# The entrant's own network carries only (1 - phi) D2 = 0.1 * D2, but the
# incumbent carries D1 + phi D2 on capacity 2, so congestion mostly bites there.
params = replace(base, congestion="mm1", cd1=0.02, cd2=0.03, cb1=0.002, cb2=0.005)
ne = solve_ne(params, "full")
print(f"full-model NE: p = ({ne.prices.p1:.5f}, {ne.prices.p2:.5f}), "
      f"U = ({ne.utilities.u1:.5f}, {ne.utilities.u2:.5f}), converged={ne.converged}, soc_ok={ne.soc_ok}")

# The same fairness expression, now with infrastructure costs on the books.
res = find_rstar(params, "full")
print(f"fair roaming charge with congestion and costs: r* = {res.r_star:.5f} (gap {res.gap:.1e})")
print(f"cost-free, congestion-free reference:           r* = {find_rstar(GameParams(b1=2.0, b2=0.2, gamma=0.05)).r_star:.5f}")

# A heavier incumbent infrastructure bill keeps the gap negative at every r:
# no roaming charge makes this pair of providers "fair".
try:
    find_rstar(replace(params, cb1=0.01), "full")
except BracketError as exc:
    print("no fair charge:", exc)
