"""Bang-bang baseline: switching law, closed-form times, deceleration points."""

import math

import numpy as np
import pytest

from divider import env, oracle


class TestBangBangAction:
    def test_accelerate_below_curve(self):
        assert oracle.bang_bang_action((-10.0, 0.0)) == 5.0

    def test_brake_above_curve_by_symmetry(self):
        assert oracle.bang_bang_action((10.0, 0.0)) == -5.0

    def test_on_curve_decelerates(self):
        # switch point of the (-10, 0) optimal trajectory, rounded as printed
        assert oracle.bang_bang_action((-5.0, 7.0711)) == -5.0
        exact = (-5.0, math.sqrt(50.0))
        assert oracle.bang_bang_action(exact) == -5.0

    def test_zero_near_origin(self):
        assert oracle.bang_bang_action((0.0, 0.0)) == 0.0
        assert oracle.bang_bang_action((0.01, -0.01)) == 0.0

    def test_odd_symmetry_away_from_curve(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            s = rng.uniform(-20, 20, 2)
            if abs(oracle.switching_function(s)) < 1e-6:
                continue
            assert oracle.bang_bang_action(s) == -oracle.bang_bang_action(-s)

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError, match="non-finite"):
            oracle.bang_bang_action((np.inf, 0.0))


class TestOptimalTime:
    def test_minus_ten(self):
        assert oracle.optimal_time((-10.0, 0.0)) == pytest.approx(
            2.0 * math.sqrt(2.0), rel=1e-12)

    def test_origin(self):
        assert oracle.optimal_time((0.0, 0.0)) == 0.0

    def test_minus_forty(self):
        assert oracle.optimal_time((-40.0, 0.0)) == pytest.approx(
            2.0 * math.sqrt(8.0), rel=1e-12)

    def test_mirror_symmetry(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            s = rng.uniform(-30, 30, 2)
            assert oracle.optimal_time(s) == pytest.approx(
                oracle.optimal_time(-s), rel=1e-9)

    def test_matches_fine_rollout(self):
        # dt = 1e-4 rollout arrival time vs closed form, within 2%
        for p0 in (-40.0, -10.0, 7.5):
            t_opt = oracle.optimal_time((p0, 0.0))
            traj = env.rollout(oracle.controller(), (p0, 0.0), dt=1e-4,
                               horizon=2.0 * t_opt + 2.0)
            inside = (np.abs(traj.p) < 0.05) & (np.abs(traj.v) < 0.05)
            t_arrive = traj.t[int(np.flatnonzero(inside)[0])]
            assert t_arrive == pytest.approx(t_opt, rel=0.02)


class TestIdealDecelPoint:
    def test_minus_ten(self):
        p, v = oracle.ideal_decel_point((-10.0, 0.0))
        assert p == pytest.approx(-5.0, abs=1e-12)
        assert v == pytest.approx(math.sqrt(50.0), abs=1e-12)

    def test_minus_forty(self):
        p, v = oracle.ideal_decel_point((-40.0, 0.0))
        assert p == pytest.approx(-20.0, abs=1e-12)
        assert v == pytest.approx(math.sqrt(200.0), abs=1e-12)

    def test_origin(self):
        assert oracle.ideal_decel_point((0.0, 0.0)) == (0.0, 0.0)

    def test_half_initial_error_rule(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            p0 = rng.uniform(-50, 50)
            p, v = oracle.ideal_decel_point((p0, 0.0))
            assert p == pytest.approx(p0 / 2.0, rel=1e-12, abs=1e-12)
            assert np.sign(v) == -np.sign(p0) or p0 == 0

    def test_curve_membership_random_starts(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            s = rng.uniform(-30, 30, 2)
            pt = oracle.ideal_decel_point(s)
            assert abs(oracle.switching_function(pt)) < 1e-9


class TestZeroOvershoot:
    def test_fifty_random_starts_from_rest(self):
        # a start with v0 != 0 above the switching curve is already committed
        # to crossing the origin, so the no-overshoot claim is for rest starts
        rng = np.random.default_rng(5)
        dt = 1e-3
        for _ in range(50):
            p0 = rng.uniform(1.0, 20.0) * rng.choice([-1.0, 1.0])
            traj = env.rollout(oracle.controller(), (p0, 0.0), dt=dt,
                               horizon=30.0)
            v_peak = float(np.max(np.abs(traj.v)))
            assert env.metrics(traj).overshoot < 10.0 * dt * v_peak
