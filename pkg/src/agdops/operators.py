"""nth-order differential operators between density bundles on the circle.

Operators are written with functions on the left, L = sum_i a_i(theta) D^i,
acting from (1-n)/2- to (1+n)/2-densities when monic.  Composition and the
formal adjoint are exact Leibniz expansions over PeriodicFunction
coefficients; nothing here touches a grid except the diffeomorphism action.
"""

from __future__ import annotations

from enum import Enum
from math import comb

import numpy as np

from .diffeo import CircleDiffeo
from .fourier import TAU, PeriodicFunction, grid, oversampled_size, project


class GroupClass(Enum):
    PSL = "psl"
    PSP = "psp"
    PSO = "pso"


class ParityError(ValueError):
    """Group class incompatible with the operator order (PSp needs even n,
    PSO odd n)."""


class WeightError(ValueError):
    """Density-weight mismatch in a composition."""


def _as_pf(c):
    return c if isinstance(c, PeriodicFunction) else PeriodicFunction.constant(c)


class DifferentialOperator:
    """L = sum_{i=0}^{n} a_i(theta) d^i/dtheta^i.

    ``weights`` is (weight_in, weight_out) for operators between density
    bundles, or None for weight-agnostic internal arithmetic.  Monic class
    operators carry weights ((1-n)/2, (1+n)/2).
    """

    __slots__ = ("coeffs", "weights")

    def __init__(self, coeffs, weights=None):
        coeffs = tuple(_as_pf(c) for c in coeffs)
        if not coeffs:
            coeffs = (PeriodicFunction.zero(),)
        self.coeffs = coeffs
        self.weights = weights

    @classmethod
    def monic(cls, lower_coeffs, n=None):
        """Monic order-n operator from coefficients a_0..a_{n-1} (a_n = 1)."""
        lower = [_as_pf(c) for c in lower_coeffs]
        n = n if n is not None else len(lower)
        if len(lower) < n:
            lower += [PeriodicFunction.zero()] * (n - len(lower))
        elif len(lower) > n:
            raise ValueError("more lower coefficients than the declared order")
        coeffs = lower + [PeriodicFunction.constant(1.0)]
        return cls(coeffs, weights=((1 - n) / 2, (1 + n) / 2))

    @classmethod
    def d_power(cls, n):
        """The operator D^n on the class density bundles."""
        return cls.monic([0.0] * n, n)

    @classmethod
    def multiplication(cls, f):
        return cls([f])

    # ------------------------------------------------------------------ #

    @property
    def order(self):
        return len(self.coeffs) - 1

    @property
    def is_monic(self):
        lead = self.coeffs[-1]
        return lead.mean == 1.0 and not lead.cos.any() and not lead.sin.any()

    def coefficient(self, i):
        """a_i, zero beyond the stored order."""
        return self.coeffs[i] if i <= self.order else PeriodicFunction.zero()

    def apply(self, u: PeriodicFunction):
        """L(u) = sum a_i u^(i), exact."""
        out = PeriodicFunction.zero()
        du = u
        for i, a in enumerate(self.coeffs):
            if i > 0:
                du = du.derivative()
            out = out + a * du
        return out

    def compose(self, other: "DifferentialOperator"):
        """Exact Leibniz composition self o other (apply ``other`` first)."""
        if self.weights is not None and other.weights is not None:
            if other.weights[1] != self.weights[0]:
                raise WeightError(
                    f"cannot compose: output weight {other.weights[1]} != input weight {self.weights[0]}")
            weights = (other.weights[0], self.weights[1])
        else:
            weights = None
        out = [PeriodicFunction.zero() for _ in range(self.order + other.order + 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if b.is_zero():
                    continue
                db = b
                for k in range(i + 1):
                    if k > 0:
                        db = db.derivative()
                    out[i + j - k] = out[i + j - k] + comb(i, k) * a * db
        return DifferentialOperator(out, weights=weights)

    def __matmul__(self, other):
        return self.compose(other)

    def __add__(self, other):
        if not isinstance(other, DifferentialOperator):
            return NotImplemented
        n = max(self.order, other.order)
        coeffs = [self.coefficient(i) + other.coefficient(i) for i in range(n + 1)]
        return DifferentialOperator(coeffs)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return DifferentialOperator([scalar * c for c in self.coeffs], weights=self.weights)

    __rmul__ = __mul__

    def trimmed(self, order=None, tol=0.0):
        """Drop leading coefficients that vanish (within tol), or cut to ``order``."""
        coeffs = list(self.coeffs)
        if order is not None:
            coeffs = coeffs[:order + 1]
        while len(coeffs) > 1 and coeffs[-1].coeff_norm() <= tol:
            coeffs.pop()
        return DifferentialOperator(coeffs, weights=self.weights)

    # ------------------------------------------------------------------ #

    def formal_adjoint(self):
        """L* with coefficients from expanding sum_i (-1)^i D^i (a_i . )."""
        n = self.order
        out = [PeriodicFunction.zero() for _ in range(n + 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            da = a
            for k in range(i + 1):
                if k > 0:
                    da = da.derivative()
                # D^i (a u) contributes comb(i, k) a^(k) u^(i-k)
                out[i - k] = out[i - k] + ((-1) ** i) * comb(i, k) * da
        weights = None
        if self.weights is not None:
            weights = (1 - self.weights[1], 1 - self.weights[0])
        return DifferentialOperator(out, weights=weights)

    def subprincipal_symbol(self):
        """sigma_{n-1} of (L - (-1)^n L*)/2 for monic L."""
        n = self.order
        half = 0.5 * (self - ((-1) ** n) * self.formal_adjoint())
        return half.coefficient(n - 1)

    def adjoint_residual(self, sign):
        """Sup-norm coefficient residual of L - sign * L*."""
        diff = self - sign * self.formal_adjoint()
        return max(c.inf_norm() for c in diff.coeffs)

    def max_coeff_diff(self, other):
        n = max(self.order, other.order)
        return max(self.coefficient(i).max_coeff_diff(other.coefficient(i)) for i in range(n + 1))


class ClassCheck:
    """Boolean class-membership verdict plus the measured residual."""

    __slots__ = ("group", "ok", "residual", "tol")

    def __init__(self, group, ok, residual, tol):
        self.group = group
        self.ok = bool(ok)
        self.residual = float(residual)
        self.tol = float(tol)

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return f"ClassCheck({self.group.value}, ok={self.ok}, residual={self.residual:.3e})"


def is_in_class(L: DifferentialOperator, group: GroupClass, tol=1e-10):
    """Membership in R_n^G with residual report.

    PSL: sup-norm of the subprincipal symbol; PSp (even n): self-adjointness
    residual; PSO (odd n): skew-adjointness residual.  A parity mismatch is a
    structured rejection, not a residual.
    """
    if not L.is_monic:
        raise ValueError("class membership is defined for monic operators")
    n = L.order
    if group is GroupClass.PSP and n % 2 != 0:
        raise ParityError(f"PSp requires even order, got n={n}")
    if group is GroupClass.PSO and n % 2 != 1:
        raise ParityError(f"PSO requires odd order, got n={n}")
    if group is GroupClass.PSL:
        residual = L.subprincipal_symbol().inf_norm()
    elif group is GroupClass.PSP:
        residual = L.adjoint_residual(+1.0)
    else:
        residual = L.adjoint_residual(-1.0)
    return ClassCheck(group, residual <= tol, residual, tol)


# ---------------------------------------------------------------------- #
# Diffeomorphism action


def diffeo_act(F: CircleDiffeo, L: DifferentialOperator, band=None):
    """Action of the circle diffeomorphism F on a monic class operator.

    Realizes the conjugation by weighted pullbacks at weights (1-n)/2 and
    (1+n)/2, in the direction fixed by the transformation rules: for n=2 the
    result satisfies  a0~ = F*a0 + S(F),  so a rotation x -> x+c sends
    a0 to a0(.+c).  The inverse direction is ``diffeo_act(F.inverse(), L)``.

    Coefficients of the result are re-extracted by applying the conjugated
    operator to the n+1 probes e^{2 pi i p theta} (p = 0..n, handled as
    cos/sin pairs) and solving the constant Vandermonde system pointwise.
    """
    if not L.is_monic:
        raise ValueError("diffeo_act is defined for monic class operators")
    n = L.order
    r1 = (1 - n) / 2
    r2 = (1 + n) / 2
    cband = max(c.band_limit for c in L.coeffs)
    band = band if band is not None else max(cband, 16) + 2 * F.band_limit + 8

    m = oversampled_size(band)
    t = grid(m)

    # Conjugation pipeline, one projection only: T u = (F')^{r2} (L w)(F(.))
    # with w = (G')^{r1} (u o G), G = F^{-1}.
    x = F.solve(t)                # G(t_j) on the uniform grid
    fp_x = F.deriv(x)             # F'(G(t_j)); G'(t_j) = 1/F'(G(t_j))
    z = F(t)                      # F(t_j), evaluation points of L w
    fp_t = F.deriv(t)

    coeff_vals = [a(z) for a in L.coeffs]
    gp_pow = fp_x ** (-float(r1))
    fp_pow = fp_t ** float(r2)

    def conjugated(u_vals_at_x):
        w = gp_pow * u_vals_at_x
        wf = PeriodicFunction.from_samples(w, m // 2 - 1)
        acc = np.zeros(m)
        dwf = wf
        for i in range(n + 1):
            if i > 0:
                dwf = dwf.derivative()
            acc = acc + coeff_vals[i] * dwf(z)
        return fp_pow * acc

    # probes cos/sin(2 pi p .), assembled into complex exponentials
    rhs = np.empty((n + 1, m), dtype=complex)
    for p in range(n + 1):
        ang = TAU * p * x
        tc = conjugated(np.cos(ang))
        ts = conjugated(np.sin(ang)) if p > 0 else np.zeros(m)
        rhs[p] = np.exp(-1j * TAU * p * t) * (tc + 1j * ts)

    nodes = 1j * TAU * np.arange(n + 1)
    vand = np.vander(nodes, n + 1, increasing=True)
    sol = np.linalg.solve(vand, rhs)

    lead_err = np.max(np.abs(sol[n] - 1.0))
    if lead_err > 1e-6:
        raise RuntimeError(f"probe extraction lost monicity (|a_n - 1| = {lead_err:.3e})")

    lower = [project(sol[i].real, band) for i in range(n)]
    return DifferentialOperator.monic(lower, n)
