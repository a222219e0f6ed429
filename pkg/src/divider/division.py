"""State-space division analysis of simplified policy networks.

A bias-free tanh network saturates as the state norm grows, so each
first-layer row w_i induces a pair of antipodal division directions
(perpendicular to w_i) across which the asymptotic first-layer feature
flips one element.  This module extracts those lines, the angular regions
between them, the strip behaviour around each line, a per-line
significance score, the practical (zero-level) division line of the real
network, and dead zones.  Only the practical-line scan accepts general
(biased / ReLU) networks.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .net import PolicyNet

SIGN_TOL = 1e-12          # |w.d| below this counts as exactly on a line
ZERO_ROW_TOL = 1e-9       # rows with smaller norm carry no division line
PARALLEL_TOL_RAD = math.radians(0.1)
SCAN_ANGLES = 4096
ANGLE_TOL = 1e-9


@dataclass
class DivisionLine:
    """One first-layer row's division line.

    `direction` is one of the two antipodal unit directions along the line;
    `pair()` gives both.  `significance` stays None until computed.
    """
    index: int
    direction: np.ndarray
    weight_norm: float
    significance: float | None = None
    parallel_to: tuple = ()

    def pair(self):
        return self.direction, -self.direction


@dataclass
class RegionFeature:
    """Angular region [theta_lo, theta_hi) with a constant asymptotic feature."""
    phi: np.ndarray
    representative: np.ndarray
    theta_lo: float
    theta_hi: float


@dataclass
class StripProbe:
    """Feature offset and asymptotic output at a perpendicular offset x."""
    index: int
    x: float
    delta: float
    output: float


def _require_simplified(net):
    if not isinstance(net, PolicyNet) or not net.simplified:
        raise ValueError("analysis requires simplified tanh network")


def _unit(theta):
    return np.array([math.cos(theta), math.sin(theta)])


def _perp(w):
    """Canonical unit perpendicular of w (w rotated by -90 degrees)."""
    n = float(np.hypot(w[0], w[1]))
    return np.array([w[1], -w[0]]) / n


def _propagate(net, feature):
    """Push a first-layer feature through layers 2..m (all tanh)."""
    z = np.asarray(feature, dtype=np.float64)
    for w in net.weights[1:]:
        z = np.tanh(w @ z)
    return float(z[0])


def division_directions(net):
    """Division lines of every usable first-layer row.

    Rows with near-zero norm are skipped with a warning; rows whose lines
    are within 0.1 degrees of another are flagged as near-parallel.
    """
    _require_simplified(net)
    w1 = net.weights[0]
    lines = []
    for i, w in enumerate(w1):
        norm = float(np.hypot(w[0], w[1]))
        if norm < ZERO_ROW_TOL:
            warnings.warn("row %d has near-zero weight, no division line" % i)
            continue
        lines.append(DivisionLine(index=i, direction=_perp(w), weight_norm=norm))
    if not lines:
        raise ValueError("all first-layer rows are near-zero")
    # near-parallel pairs, compared modulo pi (lines, not directions)
    angles = {ln.index: math.atan2(ln.direction[1], ln.direction[0]) % math.pi
              for ln in lines}
    for a, la in enumerate(lines):
        near = []
        for lb in lines:
            if lb.index == la.index:
                continue
            diff = abs(angles[la.index] - angles[lb.index])
            diff = min(diff, math.pi - diff)
            if diff < PARALLEL_TOL_RAD:
                near.append(lb.index)
        if near:
            la.parallel_to = tuple(near)
            warnings.warn("rows %s are near-parallel (within 0.1 deg)"
                          % ([la.index] + near))
    return lines


def phi(net, d):
    """Asymptotic first-layer feature sign(W1 d) in {-1, 0, 1}^n1."""
    _require_simplified(net)
    d = np.asarray(d, dtype=np.float64)
    u = net.weights[0] @ d
    out = np.sign(u)
    out[np.abs(u) < SIGN_TOL] = 0.0
    return out.astype(int)


def phi_bar(net, d):
    """Asymptotic unscaled output for a region-interior direction."""
    f = phi(net, d)
    if np.any(f == 0):
        raise ValueError("direction lies on a division line; use psi_bar")
    return _propagate(net, f)


def regions(net):
    """Angular partition of the unit circle by all division directions.

    Boundaries closer than the parallel tolerance are merged (a warning was
    already emitted for the offending rows).
    """
    lines = division_directions(net)
    raw = []
    for ln in lines:
        theta = math.atan2(ln.direction[1], ln.direction[0]) % (2 * math.pi)
        raw.append(theta)
        raw.append((theta + math.pi) % (2 * math.pi))
    raw.sort()
    bounds = []
    for theta in raw:
        if not bounds or theta - bounds[-1] >= PARALLEL_TOL_RAD:
            bounds.append(theta)
    # wraparound merge: the last boundary may sit on top of the first
    if len(bounds) > 1 and (bounds[0] + 2 * math.pi) - bounds[-1] < PARALLEL_TOL_RAD:
        bounds.pop()
    out = []
    for k, lo in enumerate(bounds):
        hi = bounds[k + 1] if k + 1 < len(bounds) else bounds[0] + 2 * math.pi
        rep = _unit(0.5 * (lo + hi))
        out.append(RegionFeature(phi=phi(net, rep), representative=rep,
                                 theta_lo=lo, theta_hi=hi))
    return out


def significance(net, i):
    """Output jump across division line i: |psi_bar(+1) - psi_bar(-1)|.

    Computed from both antipodal directions, which must agree (odd symmetry).
    """
    rho = _significance_one_side(net, i, antipodal=False)
    rho_flip = _significance_one_side(net, i, antipodal=True)
    if abs(rho - rho_flip) > 1e-12:
        raise AssertionError("antipodal significance mismatch for row %d" % i)
    return rho


def _strip_feature(net, i, delta, antipodal):
    w1 = net.weights[0]
    if not (0 <= i < w1.shape[0]):
        raise ValueError("row index out of range")
    w = w1[i]
    if float(np.hypot(w[0], w[1])) < ZERO_ROW_TOL:
        raise ValueError("row %d has near-zero weight" % i)
    d = _perp(w)
    if antipodal:
        d = -d
    u = w1 @ d
    feature = np.empty(w1.shape[0])
    for j in range(w1.shape[0]):
        if j == i:
            feature[j] = delta
        elif abs(u[j]) < SIGN_TOL:
            raise ValueError(
                "degenerate: division direction of row %d also lies on row %d's line"
                % (i, j))
        else:
            feature[j] = math.copysign(1.0, u[j])
    return feature


def _significance_one_side(net, i, antipodal):
    _require_simplified(net)
    hi = _propagate(net, _strip_feature(net, i, 1.0, antipodal))
    lo = _propagate(net, _strip_feature(net, i, -1.0, antipodal))
    return abs(hi - lo)


def strip_delta(net, i, x):
    """Feature offset delta_i = tanh(||w_i|| x) at perpendicular offset x."""
    w = np.asarray(net.weights[0][i], dtype=np.float64)
    return math.tanh(float(np.hypot(w[0], w[1])) * x)


def psi_bar(net, i, delta, antipodal=False):
    """Asymptotic unscaled output on line i's strip at feature offset delta."""
    _require_simplified(net)
    return _propagate(net, _strip_feature(net, i, delta, antipodal))


def psi_bar_root(net, i, tol=1e-10, antipodal=False):
    """Zero of delta -> psi_bar(net, i, delta) on (-1, 1), by bisection.

    Returns None when the endpoint outputs share a sign.  A coarse scan
    checks monotonicity first; multi-root strips are reported with a
    warning and the bisection root of the outer bracket is returned.
    """
    f = lambda delta: psi_bar(net, i, delta, antipodal)
    deltas = np.linspace(-1.0, 1.0, 1001)
    vals = np.array([f(x) for x in deltas])
    diffs = np.diff(vals)
    if not ((diffs >= 0).all() or (diffs <= 0).all()):
        warnings.warn("psi_bar is not monotone in delta for row %d" % i)
    flips = np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)
    if flips.size > 1:
        warnings.warn("psi_bar has multiple zero crossings for row %d" % i)
    if f(-1.0) == 0.0:
        return -1.0
    if f(1.0) == 0.0:
        return 1.0
    lo, hi = -1.0, 1.0
    if math.copysign(1.0, f(lo)) == math.copysign(1.0, f(hi)):
        return None
    flo = f(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if math.copysign(1.0, fm) == math.copysign(1.0, flo):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def strip_probe(net, i, x):
    """StripProbe for line i at perpendicular offset x."""
    delta = strip_delta(net, i, x)
    return StripProbe(index=i, x=x, delta=delta, output=psi_bar(net, i, delta))


def strip_formula_check(net, i, x, l):
    """Deviation between the finite first layer and its strip closed form.

    Evaluates tanh(W1 (d l + d_perp x)) at the (large) radius l and compares
    elementwise with the limit: tanh(||w_i|| x) on row i, sign(w_j . d)
    elsewhere.  Returns the max absolute deviation.
    """
    _require_simplified(net)
    w1 = net.weights[0]
    w = w1[i]
    norm = float(np.hypot(w[0], w[1]))
    if norm < ZERO_ROW_TOL:
        raise ValueError("row %d has near-zero weight" % i)
    d = _perp(w)
    d_perp = w / norm  # w . d_perp > 0 by construction
    s = d * l + d_perp * x
    direct = np.tanh(w1 @ s)
    u = w1 @ d
    closed = np.sign(u)
    closed[np.abs(u) < SIGN_TOL] = 0.0
    closed[i] = math.tanh(norm * x)
    return float(np.max(np.abs(direct - closed)))


def practical_line(net_or_fn, radius, n_angles=SCAN_ANGLES, angle_tol=ANGLE_TOL):
    """Zero crossings of the commanded action on the circle of given radius.

    Scans n_angles directions, then bisects every sign change down to
    angle_tol radians.  Accepts a PolicyNet or any state -> action callable
    (general biased/ReLU nets included: only sign changes are used).
    Returns crossing states sorted by angle; empty list if the action never
    changes sign on the circle.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    if isinstance(net_or_fn, PolicyNet):
        net = net_or_fn
        batch = lambda states: np.atleast_1d(net.act(states))
        f = lambda s: float(net.act(np.asarray(s)))
    else:
        f = net_or_fn
        batch = lambda states: np.array([f(s) for s in states])
    thetas = np.linspace(0.0, 2.0 * math.pi, n_angles, endpoint=False)
    states = radius * np.column_stack([np.cos(thetas), np.sin(thetas)])
    vals = batch(states)

    crossing_angles = []
    signs = np.sign(vals)
    for k in range(n_angles):
        k2 = (k + 1) % n_angles
        if signs[k] == 0.0:
            crossing_angles.append(float(thetas[k]))
            continue
        if signs[k2] == 0.0 or signs[k] * signs[k2] > 0:
            continue
        lo = float(thetas[k])
        hi = float(thetas[k]) + 2.0 * math.pi / n_angles
        flo = vals[k]
        while hi - lo > angle_tol:
            mid = 0.5 * (lo + hi)
            fm = f(radius * _unit(mid))
            if fm == 0.0:
                lo = hi = mid
                break
            if math.copysign(1.0, fm) == math.copysign(1.0, flo):
                lo = mid
            else:
                hi = mid
        crossing_angles.append(0.5 * (lo + hi))
    return [radius * _unit(theta) for theta in sorted(crossing_angles)]


def line_offset(net, i, radius):
    """Signed perpendicular distance from the practical line to line i.

    Positive along w_i.  Uses the crossing closest to the line; warns when
    row i is not the most significant one.
    """
    _require_simplified(net)
    rhos = {ln.index: significance(net, ln.index)
            for ln in division_directions(net)}
    best = max(rhos, key=rhos.get)
    if i != best and rhos[i] < rhos[best] - 1e-12:
        warnings.warn("row %d is not the most significant line (row %d is)"
                      % (i, best))
    crossings = practical_line(net, radius)
    if not crossings:
        raise ValueError("practical line is empty at radius %g" % radius)
    w = net.weights[0][i]
    w_hat = w / float(np.hypot(w[0], w[1]))
    offsets = [float(np.dot(w_hat, s)) for s in crossings]
    return min(offsets, key=abs)


def dead_zones(net, radii=(10.0, 100.0, 1000.0), samples=64):
    """Regions where position, velocity and commanded action share a sign.

    A region is reported dead only when (a) its representative direction has
    sign(d_p) = sign(d_v) = sign(phi_bar) != 0 and (b) a raster pass at the
    given radii confirms the shared sign on sampled quadrant-aligned states
    inside the region's angular span.
    """
    _require_simplified(net)
    dead = []
    for region in regions(net):
        rep = region.representative
        sp = _sign_tol(rep[0])
        sv = _sign_tol(rep[1])
        if sp == 0 or sp != sv:
            continue
        if _sign_tol(phi_bar(net, rep)) != sp:
            continue
        span = region.theta_hi - region.theta_lo
        margin = 0.02 * span
        thetas = np.linspace(region.theta_lo + margin,
                             region.theta_hi - margin, samples)
        dirs = np.column_stack([np.cos(thetas), np.sin(thetas)])
        aligned = (np.sign(dirs[:, 0]) == sp) & (np.sign(dirs[:, 1]) == sv)
        if not aligned.any():
            continue
        dirs = dirs[aligned]
        confirmed = True
        for r in radii:
            out = np.atleast_1d(net.act(r * dirs))
            if not np.all(np.sign(out) == sp):
                confirmed = False
                break
        if confirmed:
            dead.append(region)
    return dead


def _sign_tol(x, tol=SIGN_TOL):
    if abs(x) < tol:
        return 0
    return 1 if x > 0 else -1


def _phi_str(f):
    return "".join("+" if x > 0 else "-" if x < 0 else "0" for x in f)


def analysis_report(net, radii=(10.0, 100.0, 1000.0, 2000.0)):
    """Plain-text division report plus practical-line crossing rows.

    General (non-simplified) nets get a partial report: practical-line
    crossings only, with a warning header.  Returns (text, rows) where each
    row is (radius, angle_deg, p, v).
    """
    lines_out = ["state-space division report"]
    lines_out.append("layers: %s" % " -> ".join(str(n) for n in net.dims))
    lines_out.append("activation: %s%s" % (net.activation,
                                           " (simplified, bias-free)"
                                           if net.simplified else " (general)"))
    lines_out.append("action bound: %.9g" % net.action_bound)
    lines_out.append("")

    full = net.simplified
    if not full:
        lines_out.append("warning: division theory requires simplified network; "
                         "reporting practical line only")
        lines_out.append("")

    if full:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            div_lines = division_directions(net)
            for ln in div_lines:
                ln.significance = significance(net, ln.index)
            regs = regions(net)
            dead = dead_zones(net)
        for w in caught:
            lines_out.append("warning: %s" % w.message)
        if caught:
            lines_out.append("")

        lines_out.append("division lines (descending significance)")
        lines_out.append("  row      |w|        dir_p       dir_v        rho"
                         "          rho*a_bound")
        for ln in sorted(div_lines, key=lambda l: -l.significance):
            lines_out.append("  %3d  %9.4f  %10.6f  %10.6f  %12.6g  %12.6g"
                             % (ln.index, ln.weight_norm, ln.direction[0],
                                ln.direction[1], ln.significance,
                                ln.significance * net.action_bound))
        lines_out.append("")

        lines_out.append("regions: %d" % len(regs))
        lines_out.append("  theta_lo_deg  theta_hi_deg  phi")
        for reg in regs:
            lines_out.append("  %12.4f  %12.4f  %s"
                             % (math.degrees(reg.theta_lo),
                                math.degrees(reg.theta_hi),
                                _phi_str(reg.phi)))
        lines_out.append("")

        lines_out.append("dead zones: %d" % len(dead))
        for reg in dead:
            lines_out.append("  theta in [%.4f, %.4f] deg, phi %s"
                             % (math.degrees(reg.theta_lo),
                                math.degrees(reg.theta_hi),
                                _phi_str(reg.phi)))
        lines_out.append("")

    lines_out.append("practical-line crossings")
    lines_out.append("  radius      angle_deg            p            v")
    rows = []
    for r in radii:
        for s in practical_line(net, r):
            angle = math.degrees(math.atan2(s[1], s[0])) % 360.0
            rows.append((r, angle, float(s[0]), float(s[1])))
            lines_out.append("  %8.6g  %11.4f  %12.5g  %12.5g"
                             % (r, angle, s[0], s[1]))
    return "\n".join(lines_out) + "\n", rows


def write_analysis_report(net, report_path, crossings_path=None,
                          radii=(10.0, 100.0, 1000.0, 2000.0)):
    """Write the text report and the crossings CSV; returns the report text."""
    text, rows = analysis_report(net, radii)
    with open(report_path, "w", encoding="utf-8") as fh:
        fh.write(text)
    if crossings_path is not None:
        with open(crossings_path, "w", encoding="utf-8") as fh:
            fh.write("radius,angle_deg,p,v\n")
            for r, angle, p, v in rows:
                fh.write("%.9g,%.9g,%.9g,%.9g\n" % (r, angle, p, v))
    return text
