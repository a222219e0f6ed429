"""State-action pattern rasters: CSV grids and binary P5 graymaps."""

from dataclasses import dataclass

import numpy as np

MODES = ("action", "sign")


@dataclass
class RasterSpec:
    p_range: tuple = (-100.0, 100.0)
    v_range: tuple = (-100.0, 100.0)
    resolution: int = 512
    mode: str = "action"

    def __post_init__(self):
        if not (self.p_range[0] < self.p_range[1]
                and self.v_range[0] < self.v_range[1]):
            raise ValueError("raster ranges must be nonempty")
        if not (16 <= int(self.resolution) <= 8192):
            raise ValueError("resolution must lie in [16, 8192]")
        if self.mode not in MODES:
            raise ValueError("mode must be one of %s" % (MODES,))


def grid_coords(spec):
    """Pixel-center coordinates: p left->right, v top->bottom (v decreasing).

    Row 0 of the grid is the top of the image (largest v), so the origin sits
    at the image center with p rightward and v upward.
    """
    n = int(spec.resolution)
    p_lo, p_hi = spec.p_range
    v_lo, v_hi = spec.v_range
    p = p_lo + (np.arange(n) + 0.5) * (p_hi - p_lo) / n
    v = v_hi - (np.arange(n) + 0.5) * (v_hi - v_lo) / n
    return p, v


def render(net, spec):
    """Action (or action-sign) grid over the spec's state window."""
    p, v = grid_coords(spec)
    pp, vv = np.meshgrid(p, v)  # vv constant along rows
    states = np.column_stack([pp.ravel(), vv.ravel()])
    actions = np.asarray(net.act(states)).reshape(pp.shape)
    if spec.mode == "sign":
        return np.sign(actions)
    return actions


def write_csv(grid, path):
    with open(path, "w", encoding="utf-8") as fh:
        for row in grid:
            fh.write(",".join("%.9g" % x for x in row) + "\n")


def to_pixels(grid, a_bound, mode):
    """Quantize a grid to uint8: [-a_bound, a_bound] -> [0, 255] for actions,
    {-1, 0, 1} -> {0, 128, 255} for signs."""
    if mode == "sign":
        px = np.full(grid.shape, 128, dtype=np.uint8)
        px[grid < 0] = 0
        px[grid > 0] = 255
        return px
    scaled = (grid + a_bound) / (2.0 * a_bound) * 255.0
    return np.clip(np.rint(scaled), 0, 255).astype(np.uint8)


def write_pgm(pixels, path):
    """Binary P5 graymap."""
    h, w = pixels.shape
    with open(path, "wb") as fh:
        fh.write(b"P5\n%d %d\n255\n" % (w, h))
        fh.write(pixels.tobytes())


def read_pgm(path):
    """Read back a binary P5 graymap written by write_pgm."""
    with open(path, "rb") as fh:
        data = fh.read()
    if not data.startswith(b"P5"):
        raise ValueError("not a binary P5 graymap")
    fields = []
    pos = 2
    while len(fields) < 3:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            while data[pos:pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        fields.append(int(data[start:pos]))
    pos += 1
    w, h, maxval = fields
    if maxval != 255:
        raise ValueError("expected 8-bit graymap")
    px = np.frombuffer(data[pos:pos + w * h], dtype=np.uint8)
    return px.reshape(h, w)


def write_raster(net, spec, out_base):
    """Write <out_base>.csv and <out_base>.pgm; returns (csv_path, pgm_path)."""
    grid = render(net, spec)
    csv_path = out_base + ".csv"
    pgm_path = out_base + ".pgm"
    write_csv(grid, csv_path)
    write_pgm(to_pixels(grid, net.action_bound, spec.mode), pgm_path)
    return csv_path, pgm_path
