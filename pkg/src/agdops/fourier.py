"""Truncated real Fourier series on the unit circle (period 1).

``PeriodicFunction`` is the scalar field underlying every coefficient in the
library: differentiation is exact on the represented band, products grow the
band exactly (N1 + N2), and truncation is always an explicit separate call.
The angular convention is theta in [0, 1) with basis cos(2*pi*k*theta),
sin(2*pi*k*theta).
"""

from __future__ import annotations

import numpy as np

TAU = 2.0 * np.pi

#: Default band limit for re-projections that have no natural band.
DEFAULT_BAND = 32


def _as_array(x, n):
    if x is None:
        return np.zeros(n)
    out = np.asarray(x, dtype=float).copy()
    if out.shape != (n,):
        raise ValueError(f"expected shape ({n},), got {out.shape}")
    return out


class PeriodicFunction:
    """Real trigonometric polynomial  mean + sum_k c_k cos(2 pi k t) + s_k sin(2 pi k t).

    Immutable after construction; all operations return new instances.
    ``band_limit`` is the declared band N (k runs over 1..N); trailing zero
    amplitudes are kept so band bookkeeping stays structural.
    """

    __slots__ = ("mean", "cos", "sin")

    def __init__(self, mean=0.0, cos=None, sin=None):
        n = 0
        if cos is not None:
            n = len(cos)
        elif sin is not None:
            n = len(sin)
        if cos is not None and sin is not None and len(cos) != len(sin):
            raise ValueError("cos and sin amplitude arrays must have equal length")
        self.mean = float(mean)
        self.cos = _as_array(cos, n)
        self.sin = _as_array(sin, n)
        self.cos.flags.writeable = False
        self.sin.flags.writeable = False

    # ------------------------------------------------------------------ #
    # constructors

    @classmethod
    def zero(cls):
        return cls(0.0)

    @classmethod
    def constant(cls, value):
        return cls(float(value))

    @classmethod
    def harmonic(cls, k, cos_amp=0.0, sin_amp=0.0):
        """Single-frequency term cos_amp*cos(2 pi k t) + sin_amp*sin(2 pi k t)."""
        if k < 1:
            raise ValueError("harmonic frequency must be >= 1")
        c = np.zeros(k)
        s = np.zeros(k)
        c[k - 1] = cos_amp
        s[k - 1] = sin_amp
        return cls(0.0, c, s)

    @classmethod
    def from_coeffs(cls, flat):
        """Inverse of :meth:`to_coeffs`: flat layout [mean, c1, s1, ..., cN, sN]."""
        flat = np.asarray(flat, dtype=float)
        if flat.ndim != 1 or flat.size % 2 != 1:
            raise ValueError("flat coefficient list must have odd length 2N+1")
        return cls(flat[0], flat[1::2], flat[2::2])

    @classmethod
    def from_samples(cls, values, band):
        """Project samples on the uniform grid t_j = j/m (j = 0..m-1) to band N."""
        values = np.asarray(values, dtype=float)
        m = values.size
        if band > m // 2:
            raise ValueError(f"band {band} not resolvable from {m} samples")
        spec = np.fft.rfft(values) / m
        cos = 2.0 * spec[1:band + 1].real
        sin = -2.0 * spec[1:band + 1].imag
        return cls(spec[0].real, cos, sin)

    # ------------------------------------------------------------------ #
    # structure

    @property
    def band_limit(self):
        return len(self.cos)

    def to_coeffs(self):
        """Flat layout [mean, c1, s1, ..., cN, sN] (the serialization schema)."""
        out = np.empty(1 + 2 * self.band_limit)
        out[0] = self.mean
        out[1::2] = self.cos
        out[2::2] = self.sin
        return out

    def padded(self, band):
        """Same function, declared at a band >= the current one."""
        if band < self.band_limit:
            raise ValueError("padding cannot shrink the band; use truncated()")
        c = np.zeros(band)
        s = np.zeros(band)
        c[: self.band_limit] = self.cos
        s[: self.band_limit] = self.sin
        return PeriodicFunction(self.mean, c, s)

    def truncated(self, band):
        """Explicit truncation to the given band (the only lossy operation)."""
        if band >= self.band_limit:
            return self.padded(band)
        return PeriodicFunction(self.mean, self.cos[:band], self.sin[:band])

    def truncation_residual(self, band):
        """l2 norm of the coefficients dropped by ``truncated(band)``."""
        if band >= self.band_limit:
            return 0.0
        tail = np.concatenate([self.cos[band:], self.sin[band:]])
        return float(np.linalg.norm(tail))

    # ------------------------------------------------------------------ #
    # algebra

    def __add__(self, other):
        if np.isscalar(other):
            return PeriodicFunction(self.mean + other, self.cos, self.sin)
        band = max(self.band_limit, other.band_limit)
        a, b = self.padded(band), other.padded(band)
        return PeriodicFunction(a.mean + b.mean, a.cos + b.cos, a.sin + b.sin)

    __radd__ = __add__

    def __neg__(self):
        return PeriodicFunction(-self.mean, -self.cos, -self.sin)

    def __sub__(self, other):
        if np.isscalar(other):
            return self + (-other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if np.isscalar(other):
            return PeriodicFunction(self.mean * other, self.cos * other, self.sin * other)
        return self.multiply(other)

    __rmul__ = __mul__

    def multiply(self, other):
        """Exact product; the band is the sum of the operand bands."""
        fa = self._full_spectrum()
        fb = other._full_spectrum()
        prod = np.convolve(fa, fb)
        n = self.band_limit + other.band_limit
        center = n
        mean = prod[center].real
        cos = 2.0 * prod[center + 1:].real
        sin = -2.0 * prod[center + 1:].imag
        return PeriodicFunction(mean, cos, sin)

    def _full_spectrum(self):
        """Complex coefficients on orders -N..N (index k+N)."""
        n = self.band_limit
        spec = np.zeros(2 * n + 1, dtype=complex)
        spec[n] = self.mean
        if n:
            pos = 0.5 * (self.cos - 1j * self.sin)
            spec[n + 1:] = pos
            spec[:n] = np.conj(pos[::-1])
        return spec

    def derivative(self, order=1):
        """Exact Fourier differentiation; band limit preserved."""
        f = self
        for _ in range(order):
            k = np.arange(1, f.band_limit + 1)
            f = PeriodicFunction(0.0, TAU * k * f.sin, -TAU * k * f.cos)
        return f

    def integral(self):
        """Integral over one period: the mean-value coefficient."""
        return self.mean

    def antiderivative(self, mean_tol=1e-9):
        """The zero-mean primitive; defined for zero-mean input.

        A mean above ``mean_tol`` is rejected (the primitive would not be
        periodic); the tolerance absorbs rounding in computed residues.
        """
        if abs(self.mean) > mean_tol:
            raise ValueError(f"antiderivative of non-zero-mean function (mean={self.mean:.3e})")
        k = np.arange(1, self.band_limit + 1)
        return PeriodicFunction(0.0, -self.sin / (TAU * k), self.cos / (TAU * k))

    # ------------------------------------------------------------------ #
    # evaluation

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        if self.band_limit == 0:
            return np.full(theta.shape, self.mean) if theta.ndim else float(self.mean)
        k = np.arange(1, self.band_limit + 1)
        ang = TAU * np.multiply.outer(theta, k)
        out = self.mean + np.cos(ang) @ self.cos + np.sin(ang) @ self.sin
        return out if theta.ndim else float(out)

    def sample(self, m):
        """Values on the uniform grid j/m (j = 0..m-1), via inverse FFT.

        Exact for m >= 2N+1; smaller grids are refused to prevent silent
        aliasing.
        """
        n = self.band_limit
        if m < 2 * n + 1:
            raise ValueError(f"{m} samples alias a band-{n} series")
        spec = np.zeros(m // 2 + 1, dtype=complex)
        spec[0] = self.mean
        if n:
            spec[1:n + 1] = 0.5 * (self.cos - 1j * self.sin)
        return np.fft.irfft(spec * m, n=m)

    def inf_norm(self, oversample=4):
        """Max-abs on a dense grid (oversample * band points, at least 64)."""
        m = max(2 * self.band_limit + 1, oversample * max(self.band_limit, 1), 64)
        return float(np.max(np.abs(self.sample(m))))

    def coeff_norm(self):
        """l-infinity norm of the coefficient vector (mean and amplitudes)."""
        if self.band_limit == 0:
            return abs(self.mean)
        return float(max(abs(self.mean), np.max(np.abs(self.cos)), np.max(np.abs(self.sin))))

    def max_coeff_diff(self, other):
        """Sup over aligned coefficients of |self - other|; the test metric."""
        band = max(self.band_limit, other.band_limit)
        a, b = self.padded(band), other.padded(band)
        return (a - b).coeff_norm()

    def is_zero(self, tol=0.0):
        return self.coeff_norm() <= tol

    def __repr__(self):
        return f"PeriodicFunction(mean={self.mean:.6g}, band={self.band_limit})"


def grid(m):
    """Uniform circle grid t_j = j/m, j = 0..m-1."""
    return np.arange(m) / m


def oversampled_size(band, factor=8):
    """Power-of-two grid size >= factor * band (and >= 64)."""
    m = max(64, factor * max(band, 1))
    return 1 << (m - 1).bit_length()


def project(values, band):
    """Alias for :meth:`PeriodicFunction.from_samples` with argument order
    matching the 'evaluate on a grid, then re-project' idiom."""
    return PeriodicFunction.from_samples(values, band)
