#!/usr/bin/env python3
"""Train a small agent, extract its division geometry and measure the
overshoot growth when the start state leaves the training range.

A short run (600 episodes, a couple of minutes) is enough to see the
phenomenon; the full test suite trains 2000-episode agents.
"""

import math
import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from divider import TrainConfig, division, env, oracle, train

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

config = TrainConfig(algorithm="ppo", seed=0, episodes=600)
print("training", config.algorithm, "for", config.episodes, "episodes ...")
actor, curve = train(config)
rets = [r for _, r in curve]
print("median return, first 100 episodes:", np.median(rets[:100]))
print("median return, last 100 episodes :", np.median(rets[-100:]))

print("\npractical-line angle vs radius (straightens as tanh saturates):")
for radius in (20.0, 200.0, 2000.0):
    angles = [math.degrees(math.atan2(s[1], s[0])) % 180
              for s in division.practical_line(actor, radius)]
    print(f"  radius {radius:6.0f}: {sorted(set(round(a, 2) for a in angles))}")

fig, axes = plt.subplots(1, 2, figsize=(11, 4.5))
for p0, color in ((-10.0, "C0"), (-20.0, "C1"), (-40.0, "C2")):
    traj = env.rollout(actor.act, (p0, 0.0), horizon=40.0)
    m = env.metrics(traj)
    t_opt = oracle.optimal_time((p0, 0.0))
    print(f"start {p0:6.1f}: overshoot {m.overshoot:7.3f} m, "
          f"settling {m.settling_time} s, optimal time {t_opt:.2f} s")
    axes[0].plot(traj.p, traj.v, color, label=f"p0 = {p0:g}")
    axes[1].plot(traj.t, traj.p, color)

v = np.linspace(-16, 16, 400)
axes[0].plot(-np.sign(v) * v**2 / 10.0, v, "k--", lw=1,
             label="ideal switching curve")
axes[0].set_xlabel("p [m]")
axes[0].set_ylabel("v [m/s]")
axes[0].legend()
axes[0].set_title("trajectories vs the ideal curve")
axes[1].axhline(0, color="k", lw=0.5)
axes[1].set_xlabel("t [s]")
axes[1].set_ylabel("p [m]")
axes[1].set_title("position responses (note the overshoot growth)")
fig.tight_layout()
fig.savefig(os.path.join(OUT, "train_and_compare.png"), dpi=120)
print("wrote", os.path.join(OUT, "train_and_compare.png"))
