#!/usr/bin/env python3
"""Walk through the division analysis of the hand-built two-line network:
directions, regions, significance, strip behaviour and the practical line."""

import math
import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from divider import division, two_line_net

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

net = two_line_net()

print("== division lines ==")
for ln in division.division_directions(net):
    rho = division.significance(net, ln.index)
    print(f"row {ln.index}: |w| = {ln.weight_norm:.4f}, "
          f"direction = ({ln.direction[0]:+.4f}, {ln.direction[1]:+.4f}), "
          f"rho = {rho:.5f} (scaled jump {net.action_bound * rho:.4f} m/s^2)")

print("\n== regions ==")
for reg in division.regions(net):
    print(f"theta in [{math.degrees(reg.theta_lo):7.2f}, "
          f"{math.degrees(reg.theta_hi):7.2f}] deg  phi = {reg.phi}  "
          f"asymptotic mu = {division.phi_bar(net, reg.representative):+.5f}")

# strip behaviour of the dominant line: output vs feature offset delta
deltas = np.linspace(-1, 1, 401)
outputs = [division.psi_bar(net, 0, d) for d in deltas]
root = division.psi_bar_root(net, 0)
print(f"\nstrip output zero at delta = {root:.6f} "
      f"(perpendicular offset {math.atanh(root) / 1.0:+.4f} m)")

# the practical line: zero crossings of the real network on growing circles
print("\n== practical line vs radius ==")
for radius in (2.0, 10.0, 100.0, 1000.0):
    for s in division.practical_line(net, radius):
        ang = math.degrees(math.atan2(s[1], s[0])) % 360
        if ang < 180:
            print(f"radius {radius:7.1f}: crossing at {ang:8.4f} deg")
offset = division.line_offset(net, 0, 1000.0)
print(f"perpendicular offset from the dominant line: {offset:+.5f} m")

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4.5))
ax1.plot(deltas, outputs)
ax1.axhline(0, color="k", lw=0.5)
ax1.axvline(root, color="r", ls=":", label=f"zero at {root:.3f}")
ax1.set_xlabel("feature offset delta")
ax1.set_ylabel("asymptotic output")
ax1.set_title("strip output across the dominant line")
ax1.legend()

theta = np.linspace(0, 2 * math.pi, 720)
circle = np.column_stack([np.cos(theta), np.sin(theta)])
for radius, color in ((2.0, "C0"), (10.0, "C1"), (100.0, "C2")):
    acts = net.act(radius * circle)
    ax2.plot(np.degrees(theta), acts, color, label=f"radius {radius:g}")
ax2.axhline(0, color="k", lw=0.5)
ax2.set_xlabel("state angle [deg]")
ax2.set_ylabel("action [m/s^2]")
ax2.set_title("action around circles (saturation with radius)")
ax2.legend()
fig.tight_layout()
fig.savefig(os.path.join(OUT, "division_analysis.png"), dpi=120)
print("wrote", os.path.join(OUT, "division_analysis.png"))
