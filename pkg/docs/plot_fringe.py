"""Sample plot of a fringe.csv produced by `gravchan fringe` (not shipped
with the package; documentation material only).

    gravchan fringe --config run.json --out fringe.csv
    python docs/plot_fringe.py fringe.csv
"""

import csv
import sys

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "fringe.csv"
with open(path, newline="") as handle:
    rows = list(csv.DictReader(handle))

x = [float(r["delta_phi_rad"]) for r in rows]
plt.plot(x, [float(r["p_direct"]) for r in rows], label="direct readout")
plt.plot(x, [float(r["p_channel_joint_g"]) for r in rows], label="through channel")
plt.xlabel(r"$\Delta\phi$ [rad]")
plt.ylabel("probability")
plt.legend()
plt.tight_layout()
plt.savefig("fringe.png", dpi=150)
print("wrote fringe.png")
