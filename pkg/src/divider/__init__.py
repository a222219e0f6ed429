"""State-space division analysis of small double-integrator policies.

Library layout:
  net         fully connected policy engine (forward, gradients, weights I/O)
  env         double-integrator plant, rollouts, trajectory metrics
  oracle      time-optimal bang-bang baseline and closed-form quantities
  division    division lines, regions, strips, significance, dead zones
  train       DDPG-style and PPO trainers
  raster      state-action pattern grids (CSV + portable graymap)
  cli         the `divider` command-line tool
"""

from .division import (DivisionLine, RegionFeature, StripProbe, dead_zones,
                       division_directions, line_offset, phi, phi_bar,
                       practical_line, psi_bar, psi_bar_root, regions,
                       significance, strip_delta, strip_formula_check,
                       strip_probe, write_analysis_report)
from .env import (Trajectory, TrajectoryMetrics, action_fluctuation_at_v0,
                  metrics, rollout, step)
from .net import Mlp, PolicyNet
from .oracle import (bang_bang_action, ideal_decel_point, optimal_time,
                     switching_function)
from .raster import RasterSpec, render, write_raster
from .reference_nets import negate_output, two_line_net
from .train import (TrainConfig, TrainingDiverged, load_config, reward, train)

__version__ = "0.1.0"
