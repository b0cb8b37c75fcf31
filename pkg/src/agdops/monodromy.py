"""Floquet analysis of class operators: fundamental solutions, monodromy,
the Liouville equation, the bilinear concomitant, and group certification.

The jet system Phi' = C(theta) Phi is integrated with fixed-step RK4 on the
half-step coefficient grid; Phi(0) = I, columns are solution jets
(u, u', ..., u^(n-1)).  The monodromy emitted here is Phi(1); the solution
row vector transforms with its transpose, which is what curves use.
"""

from __future__ import annotations

from math import comb

import numpy as np

from ._core import propagate
from .fourier import PeriodicFunction
from .operators import DifferentialOperator, GroupClass

DEFAULT_STEPS = 4096
MIN_STEPS = 256


class ConcomitantError(ValueError):
    """Concomitant requested for an operator that is neither self- nor
    skew-adjoint within tolerance."""


def jet_system(L: DifferentialOperator):
    """Companion matrix C(theta) of the jet flow: superdiagonal ones, last
    row (-a_0, ..., -a_{n-1})."""
    if not L.is_monic:
        raise ValueError("jet system defined for monic operators")
    n = L.order
    rows = [[PeriodicFunction.zero() for _ in range(n)] for _ in range(n)]
    for i in range(n - 1):
        rows[i][i + 1] = PeriodicFunction.constant(1.0)
    for j in range(n):
        rows[n - 1][j] = -1.0 * L.coefficient(j)
    return rows


def sample_matrix(rows, theta):
    """Evaluate a matrix of PeriodicFunctions on a grid: (len(theta), n, n)."""
    n = len(rows)
    out = np.empty((len(theta), n, n))
    for i in range(n):
        for j in range(n):
            out[:, i, j] = rows[i][j](theta)
    return out


def half_step_grid(steps):
    return np.arange(2 * steps + 1) / (2.0 * steps)


class FundamentalSolution:
    """Normalized fundamental system of L on [0, 1].

    frames[j] is Phi(t_j) with Phi(0) = I; columns are jets of the
    fundamental solutions.  ``error_estimate`` compares against a half-
    resolution integration and ``accurate`` records whether it met the
    1e-6 target (the caller may raise the step count).
    """

    __slots__ = ("n", "steps", "grid", "frames", "error_estimate", "accurate")

    def __init__(self, n, steps, grid, frames, error_estimate):
        self.n = n
        self.steps = steps
        self.grid = grid
        self.frames = frames
        self.error_estimate = float(error_estimate)
        self.accurate = self.error_estimate <= 1e-6

    @property
    def monodromy(self):
        return self.frames[-1]

    def determinants(self):
        return np.linalg.det(self.frames)


def integrate_fundamental(L: DifferentialOperator, steps=DEFAULT_STEPS):
    """RK4 integration of the jet system from the identity.

    ``steps`` must be at least 256; the attached error estimate is the
    max-abs difference of Phi(1) against the integration at half resolution
    (whose coefficient samples are the even-index half-step samples).
    """
    if steps < MIN_STEPS:
        raise ValueError(f"steps must be >= {MIN_STEPS}, got {steps}")
    if steps % 2 != 0:
        raise ValueError("steps must be even (half-resolution error estimate)")
    rows = jet_system(L)
    samples = sample_matrix(rows, half_step_grid(steps))
    path = propagate(samples[None], 1.0 / steps, store_path=True)[0]
    coarse = propagate(samples[None, ::2], 2.0 / steps, store_path=False)[0]
    err = float(np.max(np.abs(path[-1] - coarse)))
    return FundamentalSolution(L.order, steps, np.arange(steps + 1) / steps, path, err)


def monodromy(L: DifferentialOperator, steps=DEFAULT_STEPS):
    """Phi(1) for the jet flow of L."""
    return integrate_fundamental(L, steps).monodromy


def wronskian(fund: FundamentalSolution):
    """det Phi(t) sampled on the integration grid.

    Returned as samples (not a PeriodicFunction): the Wronskian is periodic
    only when det M = 1, e.g. it is e^(-c t) for L = D^2 + c D.
    """
    return fund.determinants()


def _fd_derivative(values, dt, growth):
    """8th-order centered first derivative of samples on [0, 1] whose
    extension satisfies f(t + 1) = growth * f(t) (multiplicative Floquet
    extension; growth = 1 recovers periodicity)."""
    v = np.asarray(values, dtype=float)
    core = v[:-1]
    ext = np.concatenate([core[-4:] / growth, core, core[:4] * growth])
    w = np.array([1 / 280, -4 / 105, 1 / 5, -4 / 5, 0.0, 4 / 5, -1 / 5, 4 / 105, -1 / 280])
    dv = np.convolve(ext, w[::-1], mode="valid") / dt
    return np.concatenate([dv, dv[:1] * growth])


def liouville_residual(L: DifferentialOperator, fund: FundamentalSolution):
    """max_t |W' + a_{n-1} W| with W = det Phi (Abel/Liouville equation);
    W' by high-order finite differences on the Floquet-extended samples."""
    w = fund.determinants()
    growth = w[-1] / w[0]
    dw = _fd_derivative(w, 1.0 / fund.steps, growth)
    an1 = L.coefficient(L.order - 1)(fund.grid)
    return float(np.max(np.abs(dw + an1 * w)))


# ---------------------------------------------------------------------- #
# Bilinear concomitant


def concomitant_functions(L: DifferentialOperator):
    """Matrix of PeriodicFunctions B(theta) of the Lagrange concomitant

        B[u, v] = sum_i sum_{k<i} (-1)^k u^(i-1-k) (a_i v)^(k)

    expressed in the jet coordinates (u, ..., u^(n-1)) x (v, ..., v^(n-1)).
    """
    n = L.order
    mat = [[PeriodicFunction.zero() for _ in range(n)] for _ in range(n)]
    for i in range(1, n + 1):
        a = L.coefficient(i)
        for k in range(i):
            da = a
            for j in range(k + 1):
                if j > 0:
                    da = da.derivative()
                p = i - 1 - k
                q = k - j
                mat[p][q] = mat[p][q] + ((-1) ** k) * comb(k, j) * da
    return mat


class ConcomitantForm:
    """The concomitant in jet coordinates at t = 0, with its symmetry type."""

    __slots__ = ("n", "matrix", "functions", "kind", "symmetry_residual")

    def __init__(self, n, matrix, functions, kind, symmetry_residual):
        self.n = n
        self.matrix = matrix
        self.functions = functions
        self.kind = kind  # "antisymmetric" (self-adjoint L) | "symmetric" (skew)
        self.symmetry_residual = float(symmetry_residual)

    def matrix_at(self, theta):
        return sample_matrix(self.functions, np.atleast_1d(theta))

    def constancy_residual(self, fund: FundamentalSolution):
        """max_t || Phi(t)^T B(t) Phi(t) - B(0) ||_inf on solutions."""
        bt = sample_matrix(self.functions, fund.grid)
        s = np.einsum("tji,tjk,tkl->til", fund.frames, bt, fund.frames)
        return float(np.max(np.abs(s - s[0])))


def concomitant(L: DifferentialOperator, adjoint_tol=1e-8):
    """Concomitant form of a self- or skew-adjoint operator.

    The expected symmetry (antisymmetric for L* = L with even n, symmetric
    for L* = -L with odd n) is checked on the computed matrix, not assumed.
    """
    n = L.order
    self_res = L.adjoint_residual(+1.0)
    skew_res = L.adjoint_residual(-1.0)
    if min(self_res, skew_res) > adjoint_tol:
        raise ConcomitantError(
            f"operator is neither self-adjoint ({self_res:.3e}) nor skew-adjoint ({skew_res:.3e})")
    functions = concomitant_functions(L)
    b0 = sample_matrix(functions, np.zeros(1))[0]
    if self_res <= skew_res:
        kind = "antisymmetric"
        sym_res = float(np.max(np.abs(b0 + b0.T)))
    else:
        kind = "symmetric"
        sym_res = float(np.max(np.abs(b0 - b0.T)))
    return ConcomitantForm(n, b0, functions, kind, sym_res)


# ---------------------------------------------------------------------- #
# Group certification


class GroupCertificate:
    """Monodromy-level certificate for membership in G, with residuals."""

    __slots__ = ("group", "monodromy", "residuals", "tol", "passed")

    def __init__(self, group, monodromy_matrix, residuals, tol):
        self.group = group
        self.monodromy = monodromy_matrix
        self.residuals = residuals
        self.tol = float(tol)
        self.passed = all(r <= tol for r in residuals.values())

    def __bool__(self):
        return self.passed

    def __repr__(self):
        res = ", ".join(f"{k}={v:.2e}" for k, v in self.residuals.items())
        return f"GroupCertificate({self.group.value}, passed={self.passed}, {res})"


def certify_group(L: DifferentialOperator, group: GroupClass, steps=DEFAULT_STEPS,
                  tol=1e-6, class_tol=1e-8):
    """Certify the monodromy against the invariant structure of the class.

    PSL: |det M - 1|.  PSp: the concomitant is antisymmetric and
    ||M^T B M - B||.  PSO: symmetric concomitant preservation plus
    |det M - 1|.  The symmetric form may be indefinite; preservation of the
    computed form is what is certified (no compactness assertion).
    """
    from .operators import is_in_class

    check = is_in_class(L, group, tol=class_tol)
    if not check.ok:
        raise ValueError(f"operator not in class {group.value}: residual {check.residual:.3e}")
    m = monodromy(L, steps)
    residuals = {}
    if group is GroupClass.PSL:
        residuals["det"] = abs(float(np.linalg.det(m)) - 1.0)
    else:
        form = concomitant(L)
        expected = "antisymmetric" if group is GroupClass.PSP else "symmetric"
        if form.kind != expected:
            raise ValueError(f"concomitant is {form.kind}, expected {expected} for {group.value}")
        residuals["form_symmetry"] = form.symmetry_residual
        residuals["form_preservation"] = float(np.max(np.abs(m.T @ form.matrix @ m - form.matrix)))
        if group is GroupClass.PSO:
            residuals["det"] = abs(float(np.linalg.det(m)) - 1.0)
    return GroupCertificate(group, m, residuals, tol)
