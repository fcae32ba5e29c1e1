# Best-response curves of the two providers and where they meet.
#
# With delta = 1, phi = 0.9 (b1 = 10, b2 = 1) and roaming charge r = 0.8 the
# curves cross at the symmetric Nash equilibrium, roughly (0.38, 0.38).
#
#     python demos/best_response_curves.py [--plot out.png]

import argparse

from roaming import GameParams, best_response_crossing, closed_form_ne, solve_ne, sweep_best_response

parser = argparse.ArgumentParser()
parser.add_argument("--plot", help="save a figure here (needs matplotlib)")
args = parser.parse_args()

params = GameParams(delta=1.0, r=0.8, b1=10.0, b2=1.0)

# br1 is the incumbent's reply to p2 = p, br2 the entrant's reply to p1 = p
table = sweep_best_response(params, n=257)
for p, br1, br2 in table.rows[::32]:
    print(f"p = {p:.3f}   br1(p) = {br1:.4f}   br2(p) = {br2:.4f}")

# The entrant earns nothing while the incumbent charges 0, so br2(0) = 0.
print("br2(0) =", table.rows[0][2])

crossing = best_response_crossing(table)
ne = solve_ne(params)
cf = closed_form_ne(params)
print(f"interpolated crossing   ({crossing[0]:.4f}, {crossing[1]:.4f})")
print(f"best-response iteration ({ne.prices.p1:.6f}, {ne.prices.p2:.6f})  "
      f"after {ne.iterations} rounds, soc_ok={ne.soc_ok}")
print(f"closed form             ({cf.p1:.6f}, {cf.p2:.6f})")

if args.plot:
    import matplotlib.pyplot as plt

    p, br1, br2 = (table.column(c) for c in ("p", "br1", "br2"))
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    ax.plot(p, br2, label="entrant: p2*(p1)")
    ax.plot(br1, p, "--", label="incumbent: p1*(p2)")
    ax.plot(*crossing, "ko")
    ax.set_xlabel("p1")
    ax.set_ylabel("p2")
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.plot, dpi=150)
    print("wrote", args.plot)
