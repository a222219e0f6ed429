"""Raster grids, graymap quantization and orientation."""

import math

import numpy as np
import pytest

from divider.net import PolicyNet
from divider.raster import (RasterSpec, grid_coords, read_pgm, render,
                            to_pixels, write_pgm, write_raster)
from divider.reference_nets import two_line_net


class TestSpec:
    def test_defaults_valid(self):
        spec = RasterSpec()
        assert spec.resolution == 512

    def test_empty_range_rejected(self):
        with pytest.raises(ValueError, match="nonempty"):
            RasterSpec(p_range=(5.0, 5.0))

    def test_resolution_bounds(self):
        with pytest.raises(ValueError, match="resolution"):
            RasterSpec(resolution=8)
        with pytest.raises(ValueError, match="resolution"):
            RasterSpec(resolution=10000)

    def test_bad_mode_rejected(self):
        with pytest.raises(ValueError, match="mode"):
            RasterSpec(mode="contour")


class TestOrientation:
    def test_p_rightward_v_upward(self):
        spec = RasterSpec(resolution=16)
        p, v = grid_coords(spec)
        assert p[0] < p[-1]      # columns left to right: increasing p
        assert v[0] > v[-1]      # rows top to bottom: decreasing v
        assert np.mean(p) == pytest.approx(0.0, abs=1e-12)
        assert np.mean(v) == pytest.approx(0.0, abs=1e-12)

    def test_velocity_feedback_net_splits_top_bottom(self):
        # action = -tanh(v): positive in the lower half plane (v < 0)
        net = PolicyNet([[[0.0, -1.0]]], simplified=True)
        grid = render(net, RasterSpec(resolution=32, mode="sign"))
        assert np.all(grid[:16, :] == -1.0)   # top rows have v > 0
        assert np.all(grid[16:, :] == 1.0)


class TestQuantization:
    def test_zero_net_uniform_midgray(self, tmp_path):
        net = PolicyNet([np.zeros((1, 2)) + 1e-30], simplified=True)
        spec = RasterSpec(resolution=16)
        grid = render(net, spec)
        px = to_pixels(grid, net.action_bound, "action")
        assert np.all(px == 128)

    def test_dequantized_pixels_match_csv(self, tmp_path):
        net = two_line_net()
        spec = RasterSpec(p_range=(-20, 20), v_range=(-20, 20), resolution=64)
        csv_path, pgm_path = write_raster(net, spec, str(tmp_path / "r"))
        grid = np.loadtxt(csv_path, delimiter=",")
        px = read_pgm(pgm_path).astype(float)
        ab = net.action_bound
        dequant = px / 255.0 * 2 * ab - ab
        step = 2 * ab / 255.0
        assert np.max(np.abs(dequant - grid)) <= step

    def test_sign_mode_levels(self, tmp_path):
        net = two_line_net()
        spec = RasterSpec(p_range=(-50, 50), v_range=(-50, 50),
                          resolution=32, mode="sign")
        csv_path, pgm_path = write_raster(net, spec, str(tmp_path / "s"))
        px = read_pgm(pgm_path)
        assert set(np.unique(px)) <= {0, 128, 255}
        grid = np.loadtxt(csv_path, delimiter=",")
        assert set(np.unique(grid)) <= {-1.0, 0.0, 1.0}

    def test_pgm_round_trip(self, tmp_path):
        px = np.arange(256, dtype=np.uint8).reshape(16, 16)
        path = tmp_path / "t.pgm"
        write_pgm(px, path)
        assert np.array_equal(read_pgm(path), px)


class TestBoundaryGeometry:
    def test_two_line_boundary_near_analytic_line(self, tmp_path):
        # the sign flip should track the dominant division line p = -sqrt(3) v
        net = two_line_net()
        res = 256
        spec = RasterSpec(p_range=(-100, 100), v_range=(-100, 100),
                          resolution=res, mode="sign")
        grid = render(net, spec)
        p, v = grid_coords(spec)
        px_size = 200.0 / res
        checked = 0
        for i in range(res):
            if abs(math.sqrt(3.0) * v[i]) > 95.0:
                continue  # analytic line leaves the raster window
            row = grid[i]
            flips = np.flatnonzero(row[:-1] * row[1:] < 0)
            assert len(flips) == 1
            p_flip = 0.5 * (p[flips[0]] + p[flips[0] + 1])
            assert abs(p_flip - (-math.sqrt(3.0) * v[i])) <= 2.0 * px_size
            checked += 1
        assert checked > res // 2
