#!/usr/bin/env python3
"""Render state-action patterns: proximal curvature vs distal straightening
of the division boundary, for the hand-built net and its dead-zone twin."""

import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from divider import RasterSpec, negate_output, render, two_line_net

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

net = two_line_net()
windows = (2.0, 10.0, 100.0)

fig, axes = plt.subplots(2, len(windows), figsize=(4 * len(windows), 7.5))
for col, half in enumerate(windows):
    spec = RasterSpec(p_range=(-half, half), v_range=(-half, half),
                      resolution=256, mode="action")
    for row, (label, n) in enumerate((("two-line net", net),
                                      ("negated output", negate_output(net)))):
        grid = render(n, spec)
        ax = axes[row, col]
        im = ax.imshow(grid, extent=(-half, half, -half, half),
                       cmap="RdBu_r", vmin=-5, vmax=5)
        ax.set_title(f"{label}, +-{half:g} m")
        ax.set_xlabel("p [m]")
        if col == 0:
            ax.set_ylabel("v [m/s]")
fig.colorbar(im, ax=axes, shrink=0.8, label="action [m/s^2]")
fig.savefig(os.path.join(OUT, "state_action_patterns.png"), dpi=120)
print("wrote", os.path.join(OUT, "state_action_patterns.png"))
print("note how the boundary is curved near the origin and straight far out")
