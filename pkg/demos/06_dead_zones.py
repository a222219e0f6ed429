#!/usr/bin/env python3
"""Dead zones: regions where position, velocity and action share a sign,
so the plant runs away from the target for good."""

import math
import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from divider import division, env, negate_output, two_line_net

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

healthy = two_line_net()
broken = negate_output(healthy)

print("healthy net dead zones:", len(division.dead_zones(healthy)))
dead = division.dead_zones(broken)
print("negated net dead zones:", len(dead))
for reg in dead:
    print(f"  theta in [{math.degrees(reg.theta_lo):7.2f}, "
          f"{math.degrees(reg.theta_hi):7.2f}] deg, phi = {reg.phi}")

fig, ax = plt.subplots(figsize=(6, 5))
for reg in dead:
    theta = 0.5 * (reg.theta_lo + reg.theta_hi)
    for radius in (5.0, 15.0, 40.0):
        s0 = radius * np.array([math.cos(theta), math.sin(theta)])
        traj = env.rollout(broken.act, s0, horizon=90.0)
        ax.plot(traj.p, traj.v, lw=1.5)
        ax.plot(*s0, "k.")
        print(f"  rollout from ({s0[0]:8.2f}, {s0[1]:8.2f}): {traj.reason}, "
              f"|p| end = {abs(traj.p[-1]):.0f}")
ax.set_xlabel("p [m]")
ax.set_ylabel("v [m/s]")
ax.set_title("trajectories seeded inside dead zones run away")
fig.tight_layout()
fig.savefig(os.path.join(OUT, "dead_zones.png"), dpi=120)
print("wrote", os.path.join(OUT, "dead_zones.png"))
