"""Fourier toolkit on the circle for the dispersive fractional multiplier.

Dyadic frequency blocks, Besov norms, the odd multiplier ik|k|^{2a-1}, its
unitary group, the periodized block kernels, principal-value dispersion
constants, Bernstein and modulus-of-smoothness measurements, and oscillatory
band integrals.  Everything assumes period 2*pi and the unnormalized L^p(dx)
convention (mass 2*pi).
"""

from __future__ import annotations

from functools import lru_cache
from math import factorial

import numpy as np
from scipy.integrate import quad

from .errors import (
    InvalidSpecError,
    OutOfBandError,
    UnsupportedRegimeError,
    WrongRegimeError,
)
from .fields import TWO_PI, ScalarField
from .reports import ScanReport

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(12)


def _check_alpha(alpha):
    a = float(alpha)
    if not 0.0 < a < 0.5:
        raise UnsupportedRegimeError("multiplier exponent needs 0 < alpha < 1/2")
    return a


# -- dyadic cutoff ----------------------------------------------------------------


def base_cutoff(xi):
    """Even C^inf cutoff: 1 on |xi| <= 3/4, 0 on |xi| >= 1, bump in between.

    The transition is exp(1 - 1/(1 - rho^2)) with rho = 4(|xi| - 3/4), which
    pins psi(1/2) = 1 and psi(1) = 0 so single dyadic modes project cleanly.
    """
    x = np.abs(np.asarray(xi, dtype=float))
    out = np.zeros_like(x)
    out[x <= 0.75] = 1.0
    mid = (x > 0.75) & (x < 1.0)
    rho = 4.0 * (x[mid] - 0.75)
    out[mid] = np.exp(1.0 - 1.0 / (1.0 - rho * rho))
    return out if out.ndim else float(out)


def block_symbol(q, xi):
    """psi_q: base cutoff for q = -1, dyadic difference for q >= 0."""
    if q == -1:
        return base_cutoff(xi)
    lam = 2.0**q
    return base_cutoff(np.asarray(xi) / (2.0 * lam)) - base_cutoff(np.asarray(xi) / lam)


class LPCutoff:
    """Dyadic partition bookkeeping for an N-point grid."""

    __slots__ = ("n", "q_max")

    def __init__(self, n):
        n = int(n)
        if n < 8 or n & (n - 1):
            raise InvalidSpecError("grid size must be a power of two, at least 8")
        self.n = n
        # largest q with 2^{q+1} <= N/2, so the whole block band is resolvable
        self.q_max = int(np.log2(n)) - 2

    def psi(self, xi):
        return base_cutoff(xi)

    def psi_q(self, q, xi):
        return block_symbol(q, xi)

    def partition_defect(self, k_values):
        """max |1 - sum_q psi_q(k)| over the given integer frequencies."""
        tot = np.zeros_like(np.asarray(k_values, dtype=float))
        for q in range(-1, int(np.log2(self.n)) + 1):
            tot += block_symbol(q, k_values)
        return float(np.max(np.abs(tot - 1.0)))


class SpectralBlock:
    """One dyadic piece of a field; coefficients vanish off the block band."""

    __slots__ = ("q", "data")

    def __init__(self, q, data):
        self.q = int(q)
        self.data = data

    def lp_norm(self, p, oversample=4):
        return self.data.lp_norm(p, oversample)

    def __repr__(self):
        return "SpectralBlock(q=%d, n=%d)" % (self.q, self.data.n)


def lp_project(f, q):
    """Dyadic block q of f by coefficient-wise multiplication with psi_q."""
    cutoff = LPCutoff(f.n)
    if q < -1 or q > cutoff.q_max:
        raise OutOfBandError(
            "block %d not resolvable on %d nodes (max %d)" % (q, f.n, cutoff.q_max)
        )
    k = np.arange(f.n // 2 + 1)
    return SpectralBlock(q, f.apply_rfft_multiplier(block_symbol(q, k)))


def besov_block_range(n):
    """Blocks summed by besov_norm: enough to weight every resolvable mode once."""
    return range(-1, int(np.log2(n)))


def besov_norm(f, s, p, r, oversample=4):
    """ell^r over blocks of 2^{qs} ||Delta_q f||_p (blocks past q_max included
    as raw coefficient masks so the Nyquist range still counts)."""
    if p < 1 or r < 1:
        raise InvalidSpecError("Besov indices need p, r >= 1")
    k = np.arange(f.n // 2 + 1)
    terms = []
    for q in besov_block_range(f.n):
        piece = f.apply_rfft_multiplier(block_symbol(q, k))
        terms.append(2.0 ** (q * s) * piece.lp_norm(p, oversample))
    terms = np.array(terms)
    if np.isinf(r):
        return float(np.max(terms))
    return float(np.sum(terms**r) ** (1.0 / r))


# -- the multiplier and its group ---------------------------------------------------


def apply_L_alpha(f, alpha):
    """Odd dispersive multiplier: coefficient k picks up i k |k|^{2a-1}."""
    a = _check_alpha(alpha)
    k = np.arange(f.n // 2 + 1, dtype=float)
    mult = 1j * k ** (2.0 * a)
    mult[0] = 0.0
    mult[-1] = 0.0  # unpaired Nyquist cosine has no odd partner
    return f.apply_rfft_multiplier(mult)


def evolve_group(f, alpha, t):
    """Exact unitary evolution: coefficient k multiplied by e^{i t k^{2a}}.

    The unpaired Nyquist mode is left fixed: its odd phase is not
    representable on the grid, and identity there preserves the group law
    and the L^2 isometry exactly.
    """
    a = _check_alpha(alpha)
    k = np.arange(f.n // 2 + 1, dtype=float)
    mult = np.exp(1j * float(t) * k ** (2.0 * a))
    mult[-1] = 1.0
    return f.apply_rfft_multiplier(mult)


# -- principal-value dispersion constant --------------------------------------------

_PV_CUT = 1.0e6


@lru_cache(maxsize=None)
def _pv_sine_positive(alpha, k):
    a = float(alpha)
    k = float(k)
    # 2 * integral_0^inf z^{-1-2a} sin(kz) dz, split at the mild singularity
    eps = 1e-3
    head = 0.0
    for m in range(9):
        power = 2 * m + 1
        head += (
            (-1.0) ** m
            * (k * eps) ** power
            / (float(factorial(power)) * (power - 2 * a))
            * eps ** (-2 * a)
        )
    body, _ = quad(
        lambda z: z ** (-1.0 - 2 * a) * np.sin(k * z),
        eps,
        1.0,
        limit=200,
        epsabs=1e-14,
        epsrel=1e-13,
    )
    osc = 0.0
    z0 = 1.0
    while z0 < _PV_CUT:
        z1 = min(2.0 * z0, _PV_CUT)
        val, _ = quad(
            lambda z: z ** (-1.0 - 2 * a),
            z0,
            z1,
            weight="sin",
            wvar=k,
            limit=400,
            epsabs=1e-14,
            epsrel=1e-13,
        )
        osc += val
        z0 = z1
    # two integrations by parts bound the remainder by z^{-3-2a}/k^3
    zc = _PV_CUT
    tail = np.cos(k * zc) * zc ** (-1.0 - 2 * a) / k
    tail += (1.0 + 2 * a) * np.sin(k * zc) * zc ** (-2.0 - 2 * a) / k**2
    return 2.0 * (head + body + osc + tail)


def pv_sine_integral(alpha, k):
    """PV integral of z |z|^{-2-2a} sin(kz) over the line; odd in k."""
    a = _check_alpha(alpha)
    k = float(k)
    if k == 0.0:
        return 0.0
    if k < 0.0:
        return -_pv_sine_positive(a, -k)
    return _pv_sine_positive(a, k)


def c_alpha(alpha):
    """Dispersion normalization: the k=1 PV value is 1/c_alpha."""
    return 1.0 / pv_sine_integral(alpha, 1.0)


# -- periodized block kernels --------------------------------------------------------


def group_kernel(q, alpha, t, oversample=4):
    """Periodized kernel of Delta_q e^{tL}: sum of psi_q(n) e^{i(nx + n^{2a} t)}.

    Returns the kernel on an oversampled grid together with its L^1 norm in
    the normalized (Haar) measure, which is the convolution operator constant:
    Delta_q e^{tL} f = (1/2pi) k_q * f.
    """
    a = _check_alpha(alpha)
    if q < -1:
        raise OutOfBandError("block index below -1")
    lam = 1 if q == -1 else 2**q
    m = int(oversample) * max(8, 4 * lam)
    if m & (m - 1):
        raise InvalidSpecError("oversample must keep the grid a power of two")
    half = m // 2
    k = np.arange(half + 1, dtype=float)
    coeff = block_symbol(q, k) * np.exp(1j * float(t) * k ** (2.0 * a))
    coeff[0] = block_symbol(q, np.array([0.0]))[0]  # mode 0 carries no phase
    samples = np.fft.irfft(coeff * m, n=m)
    field = ScalarField(samples)
    return field, field.lp_norm(1, oversample=1) / TWO_PI


def band_profile(u):
    """Default even band profile psi(u/2) - psi(u), supported in [1/2, 2]."""
    return base_cutoff(np.asarray(u) / 2.0) - base_cutoff(u)


def band_profile_integral(y_values, big_lambda, alpha, profile=None, support=(0.5, 2.0)):
    """J(y) = (1/pi) Re int profile(u) e^{i(yu + Lambda u^{2a})} du over u > 0.

    This is the normalized band integral: with y = lam*x and Lambda = t*lam^{2a}
    it equals the profile-localized oscillatory integral at frequency scale lam,
    and lam * J is the corresponding real-line kernel value at x.  Panels are
    sized so the local phase advances at most ~pi/2 per panel.
    """
    a = _check_alpha(alpha)
    if profile is None:
        profile = band_profile
    lo, hi = support
    ys = np.atleast_1d(np.asarray(y_values, dtype=float))
    lam_t = float(big_lambda)
    rate = np.max(np.abs(ys)) + 2.0 * a * lam_t * lo ** (2.0 * a - 1.0)
    # floor of 48 panels resolves the cutoff transitions even at slow phase
    n_panels = max(int(np.ceil((hi - lo) * max(rate, 1.0) / (0.5 * np.pi))) + 4, 48)
    edges = np.linspace(lo, hi, n_panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    rad = 0.5 * np.diff(edges)
    u = (mid[:, None] + rad[:, None] * _GL_NODES[None, :]).ravel()
    w = (rad[:, None] * _GL_WEIGHTS[None, :]).ravel()
    fw = profile(u) * w
    out = np.empty(ys.size)
    chunk = max(1, (1 << 22) // u.size)
    for i in range(0, ys.size, chunk):
        phase = np.outer(ys[i : i + chunk], u) + lam_t * u ** (2.0 * a)
        out[i : i + chunk] = np.cos(phase) @ fw
    out /= np.pi
    return out if np.ndim(y_values) else float(out[0])


def stationary_phase_eval(q, alpha, t, x_grid, profile=None):
    """Band-profile oscillatory integral on a spatial grid, with the scaled
    on-band and bracket-weighted off-band magnitudes the dispersive bounds
    control.  Requires t lambda_q^{2a} >= 1.
    """
    a = _check_alpha(alpha)
    lam = 2.0 ** int(q)
    big = float(t) * lam ** (2.0 * a)
    if big < 1.0:
        raise WrongRegimeError("need t * lambda_q^{2a} >= 1 for the band regime")
    x = np.asarray(x_grid, dtype=float)
    vals = band_profile_integral(lam * x, big, a, profile=profile)

    # stationary frequency u_s solves y + 2a Lambda u^{2a-1} = 0
    u_lo, u_hi = 0.75, 2.0
    edge_a = 2.0 * a * t * lam ** (2.0 * a - 1.0) * u_hi ** (2.0 * a - 1.0)
    edge_b = 2.0 * a * t * lam ** (2.0 * a - 1.0) * u_lo ** (2.0 * a - 1.0)
    band_lo, band_hi = -edge_b, -edge_a  # negative x, edge_b > edge_a

    report = ScanReport(
        ["x", "abs_iq", "on_band", "scaled_on", "scaled_off", "phase_arg"],
        meta={
            "q": q,
            "alpha": a,
            "t": float(t),
            "band_lo": band_lo,
            "band_hi": band_hi,
        },
    )
    expo = 2.0 * a / (1.0 - 2.0 * a)
    for xj, v in zip(x, vals):
        on = band_lo <= xj <= band_hi
        bracket = np.sqrt(1.0 + (lam * xj + big) ** 2)
        phase_arg = float(t) ** (1.0 / (1.0 - 2.0 * a)) * abs(xj) ** (-expo) if xj != 0 else 0.0
        report.add_row(
            xj,
            abs(v),
            1.0 if on else 0.0,
            abs(v) * np.sqrt(t) * lam**a if on else 0.0,
            abs(v) * bracket**4 if not on else 0.0,
            phase_arg,
        )
    return report


# -- measured inequalities ------------------------------------------------------------


def bernstein_check(q, p, r, trials, alpha=0.25, n=None, seed=0):
    """Measured Bernstein ratios over random blocks.

    Columns: trial, embed_ratio = ||b||_r / (lam^{1/p-1/r} ||b||_p), and
    lalpha_ratio = ||L b||_p / (lam^{2a} ||b||_p); maxima land in meta.
    """
    if p > r:
        raise InvalidSpecError("Bernstein embedding needs p <= r")
    a = _check_alpha(alpha)
    lam = 2.0**q
    if n is None:
        n = max(64, 2 ** (q + 3))
    rng = np.random.default_rng(seed)
    report = ScanReport(["trial", "embed_ratio", "lalpha_ratio"], meta={"q": q, "p": p, "r": r})
    gain = 1.0 / p - 1.0 / r
    for trial in range(trials):
        f = ScalarField(rng.standard_normal(n))
        b = lp_project(f, q).data
        base = b.lp_norm(p)
        if base < 1e-13:
            continue
        embed = b.lp_norm(r) / (lam**gain * base)
        op = apply_L_alpha(b, a).lp_norm(p) / (lam ** (2.0 * a) * base)
        report.add_row(trial, embed, op)
    report.meta["max_embed_ratio"] = float(np.max(report.column("embed_ratio")))
    report.meta["max_lalpha_ratio"] = float(np.max(report.column("lalpha_ratio")))
    return report


def modulus_integral(f, s, p, max_level=48, rel_cut=1e-12):
    """integral_0^1 h^{-1-s} ||f(.+h) - f||_p dh by dyadic Gauss panels."""
    if not 0.0 < s < 1.0:
        raise InvalidSpecError("modulus order needs 0 < s < 1")
    total = 0.0
    for j in range(max_level):
        a_j, b_j = 2.0 ** (-j - 1), 2.0**-j
        mid = 0.5 * (a_j + b_j)
        rad = 0.5 * (b_j - a_j)
        piece = 0.0
        for node, wgt in zip(_GL_NODES, _GL_WEIGHTS):
            h = mid + rad * node
            diff = ScalarField(f.shift(h).samples - f.samples, f.period)
            piece += wgt * rad * h ** (-1.0 - s) * diff.lp_norm(p)
        total += piece
        if j > 8 and piece < rel_cut * max(total, 1e-300):
            break
    return total


def modulus_besov_check(f, s, p):
    """Ratio of the modulus-of-smoothness integral to the r=1 Besov norm."""
    denom = besov_norm(f, s, p, 1)
    if denom == 0.0:
        return 0.0
    return modulus_integral(f, s, p) / denom
