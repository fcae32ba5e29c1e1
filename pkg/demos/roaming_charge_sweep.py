# Equilibrium utilities and the fairness gap as the regulator moves r.
#
# delta = 1, phi = 0.9. The gap (1 - phi) U1* - U2* is negative (entrant
# favored) below the fair charge r* ~ 1.3018 and positive above it. Both
# utilities vanish as r approaches 2 / (delta * phi) = 20/9.
#
#     python demos/roaming_charge_sweep.py [--csv out.csv] [--plot out.png]

import argparse

import numpy as np

from roaming import GameParams, closed_form_rstar, export_table, find_rstar, sweep_utilities_vs_r

parser = argparse.ArgumentParser()
parser.add_argument("--csv", help="write the sweep table here")
parser.add_argument("--plot", help="save a two-panel figure here (needs matplotlib)")
args = parser.parse_args()

params = GameParams(delta=1.0, b1=10.0, b2=1.0)
table = sweep_utilities_vs_r(params)  # 200 points on (0, 20/9)
r, u1, u2, gap = (table.column(c) for c in ("r", "u1", "u2", "gap"))

for k in range(0, r.size, 25):
    print(f"r = {r[k]:.3f}   U1* = {u1[k]:.5f}   U2* = {u2[k]:.6f}   gap = {gap[k]:+.6f}")

# U2* falls all the way; U1* first rises, since roaming revenue grows faster
# than the incumbent's access revenue shrinks, then falls.
k = int(np.argmax(u1))
print(f"U1* peaks at r = {r[k]:.3f} (U1* = {u1[k]:.5f}); U2* decreasing: {bool(np.all(np.diff(u2) < 0))}")

res = find_rstar(params)
print(f"fair roaming charge r* = {res.r_star:.6f} (closed form {closed_form_rstar(params):.6f})")

if args.csv:
    export_table(table, "csv", args.csv)
    print("wrote", args.csv)

if args.plot:
    import matplotlib.pyplot as plt

    fig, (a, b) = plt.subplots(1, 2, figsize=(9, 3.5))
    a.plot(r, u1, label="U1*/Dmax (incumbent)")
    a.plot(r, u2, "--", label="U2*/Dmax (entrant)")
    a.set_xlabel("r")
    a.legend()
    b.plot(r, gap)
    b.axhline(0, color="k", lw=0.5)
    b.axvline(res.r_star, color="r", lw=0.5)
    b.set_xlabel("r")
    b.set_ylabel("((1-phi) U1* - U2*) / Dmax")
    fig.tight_layout()
    fig.savefig(args.plot, dpi=150)
    print("wrote", args.plot)
