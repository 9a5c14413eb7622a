"""Closed planar curves: frame, curvature, arc-length tools, discrete norms.

Curves are sampled at the uniform parameter grid x_j = 2*pi*j/N and identified
with their trigonometric interpolant, so derivatives, metric, and curvature
come from the FFT.  The sample count must be a power of two.
"""

from __future__ import annotations

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.spatial import cKDTree

from .errors import DataFormatError, DegenerateCurveError, InvalidSpecError
from .fields import TWO_PI, ScalarField, VectorField, dot_rows, uniform_grid

_PAIR_CHUNK = 512


def _is_pow2(n):
    return n >= 8 and (n & (n - 1)) == 0


class Frame:
    """Unit tangent and outer unit normal along a counterclockwise curve."""

    __slots__ = ("tangent", "normal")

    def __init__(self, tangent, normal):
        self.tangent = tangent
        self.normal = normal


class ClosedCurve:
    """Closed curve gamma(x_j) with spectral metric, frame, and curvature.

    All geometric attributes are computed eagerly in the constructor; the
    object is immutable after that.  The O(N^2) simplicity check is not run
    here; call validate() where self-intersection matters.
    """

    __slots__ = (
        "nodes",
        "n",
        "gamma_x",
        "gamma_xx",
        "metric",
        "length",
        "signed_area",
        "is_ccw",
        "frame",
        "kappa",
        "arclength",
    )

    def __init__(self, nodes):
        nodes = np.asarray(nodes, dtype=float)
        if nodes.ndim != 2 or nodes.shape[1] != 2:
            raise InvalidSpecError("curve nodes must be an (N, 2) array")
        n = nodes.shape[0]
        if not _is_pow2(n):
            raise InvalidSpecError("node count must be a power of two, at least 8")
        self.nodes = nodes
        self.n = n

        fx = ScalarField(nodes[:, 0])
        fy = ScalarField(nodes[:, 1])
        dx = fx.derivative()
        dy = fy.derivative()
        d2x = fx.derivative(2)
        d2y = fy.derivative(2)
        self.gamma_x = np.column_stack([dx.samples, dy.samples])
        self.gamma_xx = np.column_stack([d2x.samples, d2y.samples])

        g = np.hypot(dx.samples, dy.samples)
        if np.min(g) <= 1e-12 * max(np.max(g), 1.0):
            raise DegenerateCurveError("metric |d gamma/dx| vanishes at a node")
        self.metric = ScalarField(g)
        self.length = TWO_PI * float(np.mean(g))

        t = self.gamma_x / g[:, None]
        nrm = np.column_stack([t[:, 1], -t[:, 0]])
        self.frame = Frame(VectorField(t), VectorField(nrm))

        cross = dx.samples * d2y.samples - dy.samples * d2x.samples
        self.kappa = ScalarField(cross / g**3, units="1/length")

        self.signed_area = 0.5 * TWO_PI * float(
            np.mean(nodes[:, 0] * dy.samples - nodes[:, 1] * dx.samples)
        )
        self.is_ccw = self.signed_area > 0.0

        s = ScalarField(g - np.mean(g)).antiderivative_zero_mean().samples
        self.arclength = s - s[0] + np.mean(g) * uniform_grid(n)

    # -- evaluation ------------------------------------------------------------

    def eval(self, x):
        """Trig-interpolant point(s) of the curve at parameter values x."""
        fx = ScalarField(self.nodes[:, 0])
        fy = ScalarField(self.nodes[:, 1])
        pts = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.column_stack([fx.eval_at(pts), fy.eval_at(pts)])
        return out if np.ndim(x) else out[0]

    def oversampled_nodes(self, factor):
        ox = ScalarField(self.nodes[:, 0]).oversampled(factor).samples
        oy = ScalarField(self.nodes[:, 1]).oversampled(factor).samples
        return np.column_stack([ox, oy])

    # -- validation ------------------------------------------------------------

    def validate(self, min_chord=None):
        """Simplicity at sample resolution: non-adjacent chords stay positive.

        Chunked O(N^2); raises DegenerateCurveError on failure.
        """
        if min_chord is None:
            min_chord = 1e-12 * self.length
        n = self.n
        idx = np.arange(n)
        for lo in range(0, n, _PAIR_CHUNK):
            hi = min(lo + _PAIR_CHUNK, n)
            block = self.nodes[lo:hi]
            d2 = (block[:, None, 0] - self.nodes[None, :, 0]) ** 2
            d2 += (block[:, None, 1] - self.nodes[None, :, 1]) ** 2
            sep = np.abs(idx[lo:hi, None] - idx[None, :])
            sep = np.minimum(sep, n - sep)
            d2[sep <= 1] = np.inf
            if np.min(d2) <= min_chord**2:
                raise DegenerateCurveError(
                    "curve self-intersects at sample resolution (min chord %.3e)"
                    % np.sqrt(max(np.min(d2), 0.0))
                )
        return self

    def total_curvature(self):
        return TWO_PI * float(np.mean(self.kappa.samples * self.metric.samples))

    def __repr__(self):
        return "ClosedCurve(n=%d, length=%.6g, ccw=%s)" % (self.n, self.length, self.is_ccw)


class OpenArcResult:
    """Frame-integration output that failed to close; feeds root finders."""

    __slots__ = ("nodes", "gap_vector", "tangent_mismatch", "theta", "length")

    def __init__(self, nodes, gap_vector, tangent_mismatch, theta, length):
        self.nodes = nodes
        self.gap_vector = np.asarray(gap_vector, dtype=float)
        self.tangent_mismatch = float(tangent_mismatch)
        self.theta = theta
        self.length = float(length)

    @property
    def gap(self):
        return float(np.hypot(self.gap_vector[0], self.gap_vector[1]))

    def __repr__(self):
        return "OpenArcResult(n=%d, gap=%.3e, tangent_mismatch=%.3e)" % (
            self.nodes.shape[0],
            self.gap,
            self.tangent_mismatch,
        )


# -- constructors ---------------------------------------------------------------


def make_circle(n, radius=1.0, center=(0.0, 0.0)):
    x = uniform_grid(n)
    return ClosedCurve(
        np.column_stack([center[0] + radius * np.cos(x), center[1] + radius * np.sin(x)])
    )


def make_ellipse(n, a=2.0, b=1.0, center=(0.0, 0.0)):
    x = uniform_grid(n)
    return ClosedCurve(np.column_stack([center[0] + a * np.cos(x), center[1] + b * np.sin(x)]))


# -- operations -------------------------------------------------------------------


def curvature(curve):
    """Signed curvature field; counterclockwise unit circle gives +1."""
    return curve.kappa


def turning_number(curve):
    """Winding of the tangent: wrapped angle increments summed over one loop."""
    t = curve.frame.tangent.xy
    ang = np.arctan2(t[:, 1], t[:, 0])
    d = np.diff(np.append(ang, ang[0]))
    d = (d + np.pi) % TWO_PI - np.pi
    return int(round(float(np.sum(d)) / TWO_PI))


def resample_arclength(curve, m):
    """Resample so the metric is constant L/(2 pi): arc-length parametrization.

    Cumulative length from the spectral antiderivative of an oversampled
    metric, inverted by monotone cubic interpolation, then trig resampling.
    Phase is fixed by keeping node 0.
    """
    if not _is_pow2(m):
        raise InvalidSpecError("target node count must be a power of two, at least 8")
    fine = 4
    gx = ScalarField(curve.nodes[:, 0]).oversampled(fine).derivative()
    gy = ScalarField(curve.nodes[:, 1]).oversampled(fine).derivative()
    g_fine = np.hypot(gx.samples, gy.samples)
    if np.min(g_fine) <= 0.0:
        raise DegenerateCurveError("metric vanishes on the refined grid")
    mean_g = float(np.mean(g_fine))
    s_fine = ScalarField(g_fine - mean_g).antiderivative_zero_mean().samples
    xs = uniform_grid(fine * curve.n)
    s_fine = s_fine - s_fine[0] + mean_g * xs
    total = TWO_PI * mean_g
    # append the endpoint so the inverse covers the full period
    x_tab = np.append(xs, TWO_PI)
    s_tab = np.append(s_fine, total)
    inv = PchipInterpolator(s_tab, x_tab)
    s_targets = np.arange(m) * (total / m)
    x_targets = np.asarray(inv(s_targets), dtype=float)
    # polish the monotone-cubic inverse with Newton on the spectral s(x)
    stilde = ScalarField(g_fine - mean_g).antiderivative_zero_mean()
    sd = stilde.derivative()
    s0 = stilde.samples[0]
    for _ in range(3):
        resid = mean_g * x_targets + stilde.eval_at(x_targets) - s0 - s_targets
        x_targets = x_targets - resid / (mean_g + sd.eval_at(x_targets))
    return ClosedCurve(curve.eval(x_targets))


def curve_from_curvature(kappa, length=None, anchor=((0.0, 0.0), 0.0), tol_close=None):
    """Integrate the frame equations from a curvature profile on [0, L).

    theta(s) = theta0 + integral of kappa, gamma(s) = gamma0 + integral of
    (cos theta, sin theta), both by per-mode spectral antiderivatives of the
    sampled unimodular tangent.  Returns a ClosedCurve when endpoint gap and
    tangent mismatch are both below tol_close, else an OpenArcResult carrying
    the gap vector for root finding.
    """
    L = float(length) if length is not None else kappa.period
    if L <= 0:
        raise InvalidSpecError("arc length must be positive")
    if abs(L - kappa.period) > 1e-12 * L:
        kappa = ScalarField(kappa.samples, period=L, units=kappa.units)
    if tol_close is None:
        tol_close = 1e-9 * L
    origin, theta0 = anchor
    n = kappa.n
    s = kappa.grid
    w = TWO_PI / L
    mbar = kappa.mean()

    theta_tilde = ScalarField(kappa.samples - mbar, period=L).antiderivative_zero_mean()
    theta_vals = theta0 + mbar * s + theta_tilde.samples

    u = np.exp(1j * theta_tilde.samples)
    c = np.fft.fft(u) / n
    k_signed = np.rint(np.fft.fftfreq(n) * n).astype(int)
    freq = mbar + w * k_signed

    m_int = round(mbar * L / TWO_PI)
    resonant = abs(mbar * L - TWO_PI * m_int) < 1e-10
    d = np.zeros(n, dtype=complex)
    if resonant:
        res_mask = k_signed == -m_int
        nz = ~res_mask
        d[nz] = c[nz] / (1j * freq[nz])
        c_res = complex(c[res_mask][0]) if np.any(res_mask) else 0.0 + 0.0j
    else:
        d = c / (1j * freq)
        c_res = 0.0 + 0.0j

    const = np.sum(d)
    periodic = n * np.fft.ifft(d)
    rot = np.exp(1j * theta0)
    gamma_c = complex(origin[0], origin[1]) + rot * (
        c_res * s + np.exp(1j * mbar * s) * periodic - const
    )
    nodes = np.column_stack([gamma_c.real, gamma_c.imag])

    if resonant:
        gap_c = rot * c_res * L
    else:
        gap_c = rot * (np.exp(1j * mbar * L) - 1.0) * const
    gap_vec = np.array([gap_c.real, gap_c.imag])
    tangent_mismatch = abs(mbar * L - TWO_PI * round(mbar * L / TWO_PI))

    gap = float(np.hypot(gap_vec[0], gap_vec[1]))
    if gap < tol_close and tangent_mismatch < tol_close:
        # remove the linear drift so the sample set is exactly periodic
        closed = nodes - np.outer(s / L, gap_vec)
        return ClosedCurve(closed)
    return OpenArcResult(nodes, gap_vec, tangent_mismatch, theta_vals, L)


def periodic_maximal(f):
    """Discrete maximal function: sup of symmetric window averages of |f|.

    Window radii run over all multiples of the node spacing up to twice the
    period (trapezoid-weighted averages, wrapped); the zero-radius limit |f_j|
    participates, so Mf >= |f| pointwise.
    """
    n = f.n
    a = np.abs(f.samples)
    h = f.period / n
    # indices j - 2n .. j + 2n live inside five tiled copies, offset 2n
    tiled = np.tile(a, 5)
    cum = np.concatenate([[0.0], np.cumsum(tiled)])
    best = a.copy()
    j = np.arange(n) + 2 * n
    for m in range(1, 2 * n + 1):
        full = cum[j + m + 1] - cum[j - m]
        trap = full - 0.5 * (tiled[j - m] + tiled[j + m])
        avg = trap * h / (2.0 * m * h)
        np.maximum(best, avg, out=best)
    return ScalarField(best, f.period, f.units)


def discrete_norms(curve, spec):
    """Intrinsic curve norms on the arc-length parametrization.

    spec is ("W2p", p) with 1 < p <= inf, or ("C2beta", beta) with
    0 <= beta <= 1.  W^{2,p} sums |gamma|_p + |tangent|_p + |kappa|_p over ds;
    C^{2,beta} takes max norms plus the Hölder quotient of kappa maximized
    over node pairs at least two grid cells apart.
    """
    if not isinstance(spec, (tuple, list)) or len(spec) != 2:
        raise InvalidSpecError("norm spec must be a (family, exponent) pair")
    family, expo = spec
    arc = curve
    gvar = np.ptp(curve.metric.samples) / np.mean(curve.metric.samples)
    if gvar > 1e-10:
        arc = resample_arclength(curve, curve.n)
    L = arc.length
    pt_norm = np.hypot(arc.nodes[:, 0], arc.nodes[:, 1])
    tan_norm = arc.frame.tangent.pointwise_norm().samples
    kap = arc.kappa.samples

    if family == "W2p":
        p = float(expo)
        if p <= 1:
            raise InvalidSpecError("W^{2,p} needs p > 1")
        if np.isinf(p):
            return float(np.max(pt_norm) + np.max(tan_norm) + np.max(np.abs(kap)))
        total = 0.0
        for vals in (pt_norm, tan_norm, np.abs(kap)):
            total += float((L * np.mean(vals**p)) ** (1.0 / p))
        return total
    if family == "C2beta":
        beta = float(expo)
        if not 0.0 <= beta <= 1.0:
            raise InvalidSpecError("C^{2,beta} needs 0 <= beta <= 1")
        base = float(np.max(pt_norm) + np.max(tan_norm) + np.max(np.abs(kap)))
        return base + holder_seminorm(arc.kappa, beta, period=L)
    raise InvalidSpecError("unknown norm family %r" % (family,))


def holder_seminorm(f, beta, period=None, min_cells=2):
    """sup |f_i - f_j| / d_ij^beta over wrapped pairs at least min_cells apart."""
    P = period if period is not None else f.period
    n = f.n
    h = P / n
    vals = f.samples
    best = 0.0
    idx = np.arange(n)
    for lo in range(0, n, _PAIR_CHUNK):
        hi = min(lo + _PAIR_CHUNK, n)
        diff = np.abs(vals[lo:hi, None] - vals[None, :])
        sep = np.abs(idx[lo:hi, None] - idx[None, :])
        sep = np.minimum(sep, n - sep)
        mask = sep >= min_cells
        if not np.any(mask):
            continue
        quot = diff[mask] / (sep[mask] * h) ** beta
        best = max(best, float(np.max(quot)))
    return best


def hausdorff_distance(curve_a, curve_b, oversample=8):
    """Symmetric Hausdorff distance between the two curve images.

    Dense samples of each interpolant are matched against the other curve:
    KD-tree candidates, exact point-to-segment distances on the adjacent
    polyline segments, then Newton projection onto the trig interpolant to
    remove chord-sag bias.  Every candidate is a true point distance, so the
    result can only overestimate, never undershoot.
    """
    return max(
        _directed_hausdorff(curve_a, curve_b, oversample),
        _directed_hausdorff(curve_b, curve_a, oversample),
    )


def _directed_hausdorff(curve_p, curve_q, oversample):
    pts = curve_p.oversampled_nodes(oversample)
    poly = curve_q.oversampled_nodes(oversample)
    m = poly.shape[0]
    tree = cKDTree(poly)
    _, nearest = tree.query(pts, k=1)
    best = np.full(pts.shape[0], np.inf)
    for off in (-1, 0, 1):
        seg_i = (nearest + off) % m
        a = poly[seg_i]
        b = poly[(seg_i + 1) % m]
        best = np.minimum(best, _point_segment_dist(pts, a, b))

    qx = ScalarField(curve_q.nodes[:, 0])
    qy = ScalarField(curve_q.nodes[:, 1])
    dqx, dqy = qx.derivative(), qy.derivative()
    d2qx, d2qy = qx.derivative(2), qy.derivative(2)
    x = nearest * (TWO_PI / m)
    max_step = 2.0 * TWO_PI / m
    for _ in range(4):
        rx = qx.eval_at(x) - pts[:, 0]
        ry = qy.eval_at(x) - pts[:, 1]
        tx, ty = dqx.eval_at(x), dqy.eval_at(x)
        grad = rx * tx + ry * ty
        hess = tx * tx + ty * ty + rx * d2qx.eval_at(x) + ry * d2qy.eval_at(x)
        hess = np.where(np.abs(hess) > 1e-300, hess, 1.0)
        x = x - np.clip(grad / hess, -max_step, max_step)
    proj = np.hypot(qx.eval_at(x) - pts[:, 0], qy.eval_at(x) - pts[:, 1])
    return float(np.max(np.minimum(best, proj)))


def _point_segment_dist(p, a, b):
    ab = b - a
    ap = p - a
    denom = np.maximum(dot_rows(ab, ab), 1e-300)
    t = np.clip(dot_rows(ap, ab) / denom, 0.0, 1.0)
    proj = a + t[:, None] * ab
    return np.hypot(p[:, 0] - proj[:, 0], p[:, 1] - proj[:, 1])


# -- file formats -----------------------------------------------------------------

_CURVE_HEADER = "# alpha-patch-curve v1"
_FIELD_HEADER = "# field v1"
_FMT = "%.17g"


def save_curve(curve, path):
    lines = ["%s N=%d L=%s" % (_CURVE_HEADER, curve.n, _FMT % curve.length)]
    x = uniform_grid(curve.n)
    for j in range(curve.n):
        lines.append(
            " ".join((_FMT % x[j], _FMT % curve.nodes[j, 0], _FMT % curve.nodes[j, 1]))
        )
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def load_curve(path):
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if not lines or not lines[0].startswith(_CURVE_HEADER):
        raise DataFormatError("missing curve header line")
    head = lines[0]
    try:
        n = int(head.split("N=")[1].split()[0])
    except (IndexError, ValueError):
        raise DataFormatError("curve header lacks a parseable N=")
    rows = lines[1:]
    if len(rows) != n:
        raise DataFormatError("curve file has %d rows, header says %d" % (len(rows), n))
    nodes = np.empty((n, 2))
    for j, ln in enumerate(rows):
        parts = ln.split()
        if len(parts) != 3:
            raise DataFormatError("curve row %d has %d columns, want 3" % (j, len(parts)))
        nodes[j, 0] = float(parts[1])
        nodes[j, 1] = float(parts[2])
    return ClosedCurve(nodes)


def save_field(field, path):
    lines = ["%s N=%d" % (_FIELD_HEADER, field.n)]
    for v in field.samples:
        lines.append(_FMT % v)
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def load_field(path, period=TWO_PI):
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if not lines or not lines[0].startswith(_FIELD_HEADER):
        raise DataFormatError("missing field header line")
    try:
        n = int(lines[0].split("N=")[1].split()[0])
    except (IndexError, ValueError):
        raise DataFormatError("field header lacks a parseable N=")
    rows = lines[1:]
    if len(rows) != n:
        raise DataFormatError("field file has %d rows, header says %d" % (len(rows), n))
    return ScalarField(np.array([float(v) for v in rows]), period=period)
