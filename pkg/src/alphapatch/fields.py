"""Periodic scalar/vector fields on a uniform parameter grid.

Fields are sampled at x_j = period*j/N and identified with their trigonometric
interpolant.  The Fourier convention throughout the package is the unnormalized
one, fhat(k) = integral of f(x) e^{-ikx} dx over one period, so the trig
coefficient of e^{ikx} is c_k = FFT_k / N and fhat(k) = period * c_k.  All L^p
norms integrate against dx (total mass = period).
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidSpecError

TWO_PI = 2.0 * np.pi


def uniform_grid(n, period=TWO_PI):
    return np.arange(n) * (period / n)


class ScalarField:
    """Real periodic samples plus cached spectral data.

    Immutable by convention: no method mutates `samples` in place.
    """

    __slots__ = ("samples", "period", "units", "_rfft")

    def __init__(self, samples, period=TWO_PI, units=""):
        samples = np.asarray(samples, dtype=float)
        if samples.ndim != 1 or samples.size < 4:
            raise InvalidSpecError("field needs a 1-D sample array with at least 4 points")
        self.samples = samples
        self.period = float(period)
        self.units = units
        self._rfft = None

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_function(cls, fn, n, period=TWO_PI, units=""):
        x = uniform_grid(n, period)
        return cls(np.asarray(fn(x), dtype=float), period, units)

    @classmethod
    def from_trig_coeffs(cls, coeffs, n, period=TWO_PI, units=""):
        """Build from a dict {k: c_k} of trig coefficients (k signed ints).

        Conjugate symmetry is enforced: the sample field is the real part of
        sum c_k e^{i k 2pi x / period}.
        """
        x = uniform_grid(n, period)
        f = np.zeros(n, dtype=complex)
        w = TWO_PI / period
        for k, c in coeffs.items():
            f += c * np.exp(1j * k * w * x)
        return cls(f.real, period, units)

    # -- basic accessors -------------------------------------------------------

    @property
    def n(self):
        return self.samples.size

    @property
    def grid(self):
        return uniform_grid(self.n, self.period)

    @property
    def rfft(self):
        if self._rfft is None:
            self._rfft = np.fft.rfft(self.samples)
        return self._rfft

    @property
    def coeffs(self):
        """Trig coefficients c_k ordered k = -N/2 .. N/2-1 (fftshift order)."""
        return np.fft.fftshift(np.fft.fft(self.samples)) / self.n

    def trig_coeff(self, k):
        """c_k of e^{i k w x}, w = 2pi/period; conjugate symmetry for k < 0."""
        n = self.n
        if abs(k) > n // 2:
            return 0.0 + 0.0j
        if k >= 0:
            return self.rfft[k] / n
        return np.conj(self.rfft[-k]) / n

    def mean(self):
        return float(np.mean(self.samples))

    # -- spectral primitives ---------------------------------------------------

    def apply_rfft_multiplier(self, values):
        """Multiply rfft bins k = 0..N/2 by `values` and transform back.

        The caller guarantees the implied full-line symbol satisfies
        m(-k) = conj(m(k)) so the output is real; the Nyquist bin must be
        given a real value (or zero) by the caller.
        """
        spec = self.rfft * np.asarray(values)
        out = np.fft.irfft(spec, n=self.n)
        return ScalarField(out, self.period, self.units)

    def derivative(self, order=1):
        n = self.n
        w = TWO_PI / self.period
        k = np.arange(n // 2 + 1) * w
        mult = (1j * k) ** order
        if order % 2 == 1:
            mult[-1] = 0.0  # unpaired Nyquist mode has no odd-derivative partner
        return self.apply_rfft_multiplier(mult)

    def shift(self, h):
        """Samples of f(. + h)."""
        n = self.n
        w = TWO_PI / self.period
        k = np.arange(n // 2 + 1) * w
        mult = np.exp(1j * k * h)
        mult[-1] = np.cos(k[-1] * h)  # Nyquist cos mode shifts to a real multiple
        return self.apply_rfft_multiplier(mult)

    def antiderivative_zero_mean(self):
        """Spectral antiderivative of f - mean(f); zero-mean result."""
        n = self.n
        w = TWO_PI / self.period
        k = np.arange(n // 2 + 1) * w
        mult = np.zeros(n // 2 + 1, dtype=complex)
        mult[1:] = 1.0 / (1j * k[1:])
        mult[-1] = 0.0
        return self.apply_rfft_multiplier(mult)

    def oversampled(self, factor):
        """Trig interpolant resampled on a factor*N grid (spectral zero-pad)."""
        if factor == 1:
            return self
        n = self.n
        m = int(factor * n)
        spec = np.zeros(m // 2 + 1, dtype=complex)
        spec[: n // 2 + 1] = self.rfft
        spec[n // 2] *= 0.5  # split the shared Nyquist bin symmetrically
        out = np.fft.irfft(spec, n=m) * (m / n)
        return ScalarField(out, self.period, self.units)

    def eval_at(self, points):
        """Trig-interpolant values at arbitrary points (chunked, exact)."""
        pts = np.atleast_1d(np.asarray(points, dtype=float))
        n = self.n
        w = TWO_PI / self.period
        c = self.rfft / n
        k = np.arange(1, n // 2)
        vals = np.empty(pts.size)
        chunk = max(1, (1 << 21) // max(k.size, 1))
        for lo in range(0, pts.size, chunk):
            p = pts[lo : lo + chunk]
            # c0 + 2 Re sum_{0<k<N/2} c_k e^{ikwx} + c_{N/2} cos(N/2 w x)
            phases = np.exp(1j * w * np.outer(p, k))
            vals[lo : lo + chunk] = (
                c[0].real
                + 2.0 * (phases @ c[1:-1]).real
                + c[-1].real * np.cos(w * (n // 2) * p)
            )
        return vals if np.ndim(points) else float(vals[0])

    # -- parity ----------------------------------------------------------------

    def even_part(self):
        rev = np.empty_like(self.samples)
        rev[0] = self.samples[0]
        rev[1:] = self.samples[:0:-1]
        return ScalarField(0.5 * (self.samples + rev), self.period, self.units)

    def odd_mass(self):
        """L^2 norm of the odd part (parity defect about x = 0)."""
        rev = np.empty_like(self.samples)
        rev[0] = self.samples[0]
        rev[1:] = self.samples[:0:-1]
        odd = 0.5 * (self.samples - rev)
        return float(np.sqrt(self.period * np.mean(odd * odd)))

    # -- norms -----------------------------------------------------------------

    def lp_norm(self, p, oversample=4):
        """L^p(dx) norm of the trig interpolant, mass-`period` measure."""
        f = self.oversampled(oversample).samples if oversample > 1 else self.samples
        if p == np.inf:
            return float(np.max(np.abs(f)))
        if p < 1:
            raise InvalidSpecError("L^p norm needs p >= 1")
        return float((self.period * np.mean(np.abs(f) ** p)) ** (1.0 / p))

    def __repr__(self):
        return "ScalarField(n=%d, period=%.6g%s)" % (
            self.n,
            self.period,
            ", units=%r" % self.units if self.units else "",
        )


class VectorField:
    """Planar vector samples on the parameter grid; thin wrapper over (N,2)."""

    __slots__ = ("xy", "period", "units")

    def __init__(self, xy, period=TWO_PI, units=""):
        xy = np.asarray(xy, dtype=float)
        if xy.ndim != 2 or xy.shape[1] != 2:
            raise InvalidSpecError("vector field needs an (N, 2) array")
        self.xy = xy
        self.period = float(period)
        self.units = units

    @property
    def n(self):
        return self.xy.shape[0]

    @property
    def x(self):
        return ScalarField(self.xy[:, 0], self.period, self.units)

    @property
    def y(self):
        return ScalarField(self.xy[:, 1], self.period, self.units)

    def dot(self, other):
        oxy = other.xy if isinstance(other, VectorField) else np.asarray(other)
        return ScalarField(np.sum(self.xy * oxy, axis=1), self.period)

    def pointwise_norm(self):
        return ScalarField(np.hypot(self.xy[:, 0], self.xy[:, 1]), self.period)

    def perp(self):
        """x -> x^perp = (-x2, x1) (counterclockwise quarter turn)."""
        out = np.empty_like(self.xy)
        out[:, 0] = -self.xy[:, 1]
        out[:, 1] = self.xy[:, 0]
        return VectorField(out, self.period, self.units)

    def __repr__(self):
        return "VectorField(n=%d, period=%.6g)" % (self.n, self.period)


def dot_rows(a, b):
    """Row-wise dot product of two (N,2) arrays."""
    return a[:, 0] * b[:, 0] + a[:, 1] * b[:, 1]


def perp_rows(a):
    """Row-wise counterclockwise quarter turn of an (N,2) array."""
    out = np.empty_like(a)
    out[:, 0] = -a[:, 1]
    out[:, 1] = a[:, 0]
    return out
