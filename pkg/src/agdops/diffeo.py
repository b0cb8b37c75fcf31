"""Orientation-preserving circle diffeomorphisms and the density action.

A diffeomorphism is stored through its periodic displacement f, with
F(x) = x + f(x); this makes F(x+1) = F(x) + 1 structural.  Compositions,
inverses, pullbacks and the Schwarzian derivative leave the band-limited
class, so they are evaluated on an oversampled grid (8N points) and
re-projected.
"""

from __future__ import annotations

import numpy as np

from .fourier import PeriodicFunction, grid, oversampled_size, project


class OrientationError(ValueError):
    """Raised when 1 + f' fails to stay positive on the certificate grid."""


class CircleDiffeo:
    """F(x) = x + f(x) with f periodic and F' > 0 everywhere.

    The orientation certificate (min of F' over a grid of >= 8 * band_limit
    points) is computed at construction and construction fails when it is
    not positive.
    """

    __slots__ = ("displacement", "orientation_margin")

    def __init__(self, displacement: PeriodicFunction):
        self.displacement = displacement
        m = max(oversampled_size(displacement.band_limit), 8 * max(displacement.band_limit, 1))
        margin = float(np.min(1.0 + displacement.derivative()(grid(m))))
        if margin <= 0.0:
            raise OrientationError(f"diffeomorphism not orientation-preserving (min F' = {margin:.3g})")
        self.orientation_margin = margin

    @classmethod
    def identity(cls):
        return cls(PeriodicFunction.zero())

    @classmethod
    def rotation(cls, c):
        return cls(PeriodicFunction.constant(c))

    @property
    def band_limit(self):
        return self.displacement.band_limit

    def __call__(self, x):
        return np.asarray(x, dtype=float) + self.displacement(x)

    def deriv(self, x, order=1):
        """F^(order) evaluated pointwise; exact from the Fourier series."""
        d = self.displacement.derivative(order)(x)
        return d + 1.0 if order == 1 else d

    # ------------------------------------------------------------------ #

    def inverse(self, band=None):
        """Inverse diffeomorphism via per-gridpoint Newton iteration.

        F' > 0 guarantees convergence; tolerance 1e-12, 50-iteration cap.
        """
        band = band if band is not None else max(2 * self.band_limit, 16)
        m = oversampled_size(band)
        y = grid(m)
        x = self.solve(y)
        return CircleDiffeo(project(x - y, band))

    def solve(self, y, tol=1e-12, max_iter=50):
        """Solve F(x) = y pointwise (Newton); returns x with x - y periodic."""
        y = np.asarray(y, dtype=float)
        x = y - self.displacement(y)
        for _ in range(max_iter):
            res = x + self.displacement(x) - y
            if np.max(np.abs(res)) <= tol:
                return x
            x = x - res / (1.0 + self.displacement.derivative()(x))
        raise RuntimeError("diffeomorphism inversion did not converge")

    def compose(self, other: "CircleDiffeo", band=None):
        """(self o other)(x) = self(other(x)), re-projected."""
        band = band if band is not None else max(self.band_limit + other.band_limit, 16)
        m = oversampled_size(band)
        t = grid(m)
        vals = self(other(t)) - t
        return CircleDiffeo(project(vals, band))

    def schwarzian(self, band=None):
        """S(F) = F'''/F' - (3/2) (F''/F')^2 as a PeriodicFunction."""
        band = band if band is not None else max(2 * self.band_limit, 16)
        m = oversampled_size(band)
        t = grid(m)
        d1 = self.deriv(t, 1)
        d2 = self.deriv(t, 2)
        d3 = self.deriv(t, 3)
        return project(d3 / d1 - 1.5 * (d2 / d1) ** 2, band)

    def pullback_density(self, f: PeriodicFunction, r, band=None):
        """Pullback of the r-density f |dx|^r:  (F')^r * (f o F)."""
        band = band if band is not None else max(f.band_limit + 2 * self.band_limit, 16)
        m = oversampled_size(band)
        t = grid(m)
        vals = self.deriv(t) ** float(r) * f(self(t))
        return project(vals, band)


def schwarzian(F: CircleDiffeo, band=None):
    return F.schwarzian(band)


def pullback_density(F: CircleDiffeo, f: PeriodicFunction, r, band=None):
    return F.pullback_density(f, r, band)
