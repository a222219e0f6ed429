#!/usr/bin/env python3
"""The time-optimal bang-bang baseline: switching curve, trajectory, and the
closed-form quantities used to benchmark trained policies."""

import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from divider import env, oracle

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

s0 = (-10.0, 0.0)
print("start:", s0)
print("optimal time      :", oracle.optimal_time(s0))
print("ideal decel point :", oracle.ideal_decel_point(s0))

traj = env.rollout(oracle.controller(), s0, dt=1e-3)
m = env.metrics(traj)
print("rollout           :", traj.reason, "in", traj.t[-1], "s")
print("overshoot         :", m.overshoot)
print("actual decel point:", m.actual_decel_point)

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4.5))

# phase plane with the switching curve 2 a p = -sign(v) v^2
v = np.linspace(-12, 12, 400)
p_curve = -np.sign(v) * v**2 / (2 * 5.0)
ax1.plot(p_curve, v, "k--", lw=1, label="switching curve")
ax1.plot(traj.p, traj.v, "r", lw=2, label="trajectory")
ax1.plot(*s0, "ro")
ax1.plot(*oracle.ideal_decel_point(s0), "b^", label="ideal decel point")
ax1.set_xlabel("p [m]")
ax1.set_ylabel("v [m/s]")
ax1.legend()
ax1.set_title("phase plane")

ax2.plot(traj.t, traj.p, label="p")
ax2.plot(traj.t, traj.v, label="v")
ax2.plot(traj.t, traj.a, label="a")
ax2.set_xlabel("t [s]")
ax2.legend()
ax2.set_title("time response")

fig.tight_layout()
fig.savefig(os.path.join(OUT, "bang_bang_baseline.png"), dpi=120)
print("wrote", os.path.join(OUT, "bang_bang_baseline.png"))
