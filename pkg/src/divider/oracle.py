"""Time-optimal bang-bang baseline for the double integrator.

The minimum-time controller switches between +-a_bound on the curve
2 a p = -sign(v) v^2; every comparison quantity (optimal time, ideal
deceleration point) has a closed form derived from the two-phase
accelerate/brake solution.
"""

import math

from .env import SETTLE_EPS

CURVE_TOL = 1e-9


def _sign(x):
    return (x > 0) - (x < 0)


def switching_function(state, a_bound=5.0):
    """g = 2 a p + sign(v) v^2; zero on the switching curve."""
    p, v = float(state[0]), float(state[1])
    return 2.0 * a_bound * p + _sign(v) * v * v


def bang_bang_action(state, a_bound=5.0, settle_eps=SETTLE_EPS, tol=CURVE_TOL):
    """Time-optimal acceleration command at `state`.

    Above the curve brake (-a_bound), below accelerate (+a_bound); on the
    curve decelerate toward the origin.  Near the origin (within a quarter
    of the settle tolerance) the command is zero so a discrete-time rollout
    comes to rest instead of chattering; the residual drift stays well
    inside the settle box over the one-second confirmation window.
    """
    p, v = float(state[0]), float(state[1])
    if not (math.isfinite(p) and math.isfinite(v)):
        raise ValueError("non-finite state")
    if abs(p) < 0.25 * settle_eps and abs(v) < 0.25 * settle_eps:
        return 0.0
    g = switching_function((p, v), a_bound)
    if g > tol:
        return -a_bound
    if g < -tol:
        return a_bound
    return -_sign(v) * a_bound  # on the curve; 0 at the exact origin


def controller(a_bound=5.0, settle_eps=SETTLE_EPS):
    """bang_bang_action wrapped for env.rollout."""
    return lambda s: bang_bang_action(s, a_bound=a_bound, settle_eps=settle_eps)


def optimal_time(state, a_bound=5.0):
    """Minimum time to reach the origin with |a| <= a_bound.

    Accelerate-then-brake: the switch time solves
    2 a^2 t1^2 + 4 a v t1 + (2 a p + v^2) = 0, giving
    T = (-v + sqrt(2 v^2 - 4 a p)) / a below the curve and the mirror image
    above it; on the curve only the braking phase |v| / a remains.
    """
    p, v = float(state[0]), float(state[1])
    if not (math.isfinite(p) and math.isfinite(v)):
        raise ValueError("non-finite state")
    g = switching_function((p, v), a_bound)
    if abs(g) <= CURVE_TOL:
        return abs(v) / a_bound
    if g < 0.0:
        return (-v + math.sqrt(2.0 * v * v - 4.0 * a_bound * p)) / a_bound
    return (v + math.sqrt(2.0 * v * v + 4.0 * a_bound * p)) / a_bound


def ideal_decel_point(state, a_bound=5.0):
    """Where the optimal trajectory from `state` meets the switching curve.

    For v0 = 0 this is (p0 / 2, sign(-p0) sqrt(a |p0|)).  States already on
    the curve are their own deceleration point.
    """
    p, v = float(state[0]), float(state[1])
    if not (math.isfinite(p) and math.isfinite(v)):
        raise ValueError("non-finite state")
    g = switching_function((p, v), a_bound)
    if abs(g) <= CURVE_TOL:
        return (p, v)
    if g < 0.0:
        vs = math.sqrt((v * v - 2.0 * a_bound * p) / 2.0)
        return (-vs * vs / (2.0 * a_bound), vs)
    vs = math.sqrt((v * v + 2.0 * a_bound * p) / 2.0)
    return (vs * vs / (2.0 * a_bound), -vs)
