"""Double-integrator plant, rollouts and trajectory metrics."""

import math
from dataclasses import dataclass

import numpy as np

DT_DEFAULT = 0.02
HORIZON_DEFAULT = 40.0
SETTLE_EPS = 0.05
DIVERGE_BOUND = 1.0e4
MAX_STEPS = 10_000_000

HORIZON_REACHED = "horizon_reached"
SETTLED = "settled"
DIVERGED = "diverged"


def step(state, a, dt, a_bound=None):
    """One zero-order-hold step: exact for the double integrator.

    p' = p + v dt + a dt^2 / 2,  v' = v + a dt.  If a_bound is given the
    acceleration is clamped to [-a_bound, a_bound] first.
    """
    p, v = float(state[0]), float(state[1])
    a = float(a)
    if not (math.isfinite(p) and math.isfinite(v) and math.isfinite(a)):
        raise ValueError("non-finite state or action")
    if not (math.isfinite(dt) and dt > 0):
        raise ValueError("dt must be positive")
    if a_bound is not None:
        a = min(max(a, -a_bound), a_bound)
    return (p + v * dt + 0.5 * a * dt * dt, v + a * dt)


@dataclass
class Trajectory:
    """Uniformly sampled (t, p, v, a) record of one rollout."""

    dt: float
    t: np.ndarray
    p: np.ndarray
    v: np.ndarray
    a: np.ndarray
    reason: str
    a_bound: float = 5.0

    def __len__(self):
        return len(self.t)

    def samples(self):
        """Iterate (t, (p, v), a) tuples."""
        for k in range(len(self.t)):
            yield self.t[k], (self.p[k], self.v[k]), self.a[k]

    def to_csv(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("t,p,v,a\n")
            for k in range(len(self.t)):
                fh.write("%.9g,%.9g,%.9g,%.9g\n"
                         % (self.t[k], self.p[k], self.v[k], self.a[k]))


def rollout(controller, s0, horizon=HORIZON_DEFAULT, dt=DT_DEFAULT,
            a_bound=5.0, settle_eps=SETTLE_EPS):
    """Roll the plant under `controller` (a state -> acceleration callable).

    Ends early once |p| and |v| stay below settle_eps for a full second
    (SETTLED) or once |p| exceeds the divergence bound (DIVERGED); otherwise
    runs to the horizon.  Actions are clamped to [-a_bound, a_bound].
    """
    if not (dt > 0 and horizon > 0):
        raise ValueError("horizon and dt must be positive")
    n_steps = int(round(horizon / dt))
    if n_steps > MAX_STEPS:
        raise ValueError("horizon/dt exceeds the step limit")
    window = int(round(1.0 / dt))  # settle needs this many extra samples

    p, v = float(s0[0]), float(s0[1])
    if not (math.isfinite(p) and math.isfinite(v)):
        raise ValueError("non-finite state")
    ts, ps, vs, actions = [], [], [], []
    in_zone = 0
    reason = HORIZON_REACHED
    for k in range(n_steps + 1):
        a = float(controller((p, v)))
        if not math.isfinite(a):
            raise ValueError("controller returned non-finite action")
        a = min(max(a, -a_bound), a_bound)
        ts.append(k * dt)
        ps.append(p)
        vs.append(v)
        actions.append(a)
        if abs(p) < settle_eps and abs(v) < settle_eps:
            in_zone += 1
            if in_zone > window:
                reason = SETTLED
                break
        else:
            in_zone = 0
        if abs(p) > DIVERGE_BOUND:
            reason = DIVERGED
            break
        if k == n_steps:
            break
        p, v = step((p, v), a, dt)
    return Trajectory(dt=dt, t=np.asarray(ts), p=np.asarray(ps),
                      v=np.asarray(vs), a=np.asarray(actions),
                      reason=reason, a_bound=a_bound)


@dataclass
class TrajectoryMetrics:
    overshoot: float               # m past the origin, opposite side of p0
    settling_time: float | None    # s, None if |p| never stays < eps
    actual_decel_point: tuple | None
    final_error: float             # |p| at the last sample


def metrics(traj, settle_eps=SETTLE_EPS):
    """Overshoot, settling time, first hard-braking sample and final error."""
    if len(traj) == 0:
        raise ValueError("empty trajectory")
    p0 = traj.p[0]
    toward = -np.sign(p0)  # unit direction from p0 toward the origin
    overshoot = max(0.0, float(np.max(toward * traj.p)))

    outside = np.abs(traj.p) >= settle_eps
    if not outside.any():
        settling_time = 0.0
    else:
        last = int(np.flatnonzero(outside)[-1])
        settling_time = None if last == len(traj) - 1 else float(traj.t[last + 1])

    decel = (traj.a * traj.v < 0.0) & (np.abs(traj.a) > 0.5 * traj.a_bound)
    idx = np.flatnonzero(decel)
    decel_point = ((float(traj.p[idx[0]]), float(traj.v[idx[0]]))
                   if idx.size else None)

    return TrajectoryMetrics(overshoot=overshoot,
                             settling_time=settling_time,
                             actual_decel_point=decel_point,
                             final_error=float(abs(traj.p[-1])))


def velocity_zero_crossings(traj):
    """Indices k where v changes sign strictly between samples k and k+1."""
    prod = traj.v[:-1] * traj.v[1:]
    return np.flatnonzero(prod < 0.0)


def action_fluctuation_at_v0(traj, window=1.0):
    """Size of the action blip around the first velocity zero crossing.

    Takes the samples within `window` seconds of the crossing, removes the
    straight line through the window endpoints and returns the peak-to-peak
    residual.  Returns None when v never crosses zero.
    """
    crossings = velocity_zero_crossings(traj)
    if crossings.size == 0:
        return None
    k = int(crossings[0])
    half = int(round(window / traj.dt))
    lo = max(0, k - half)
    hi = min(len(traj) - 1, k + 1 + half)
    if hi - lo < 2:
        return None
    seg = traj.a[lo:hi + 1]
    trend = np.linspace(seg[0], seg[-1], len(seg))
    resid = seg - trend
    return float(resid.max() - resid.min())
