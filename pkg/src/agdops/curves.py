"""Quasi-periodic non-degenerate curves and the curve <-> operator dictionary.

A curve is stored as a discretized lift t_j -> Gamma(t_j) in R^n together
with its jets (derivatives up to a configurable order) and the monodromy h
with Gamma(t + 1) = h Gamma(t).  Jets are carried explicitly so that
Wronskian renormalization, dual curves, and operator extraction are pure jet
arithmetic with no numerical differentiation of samples.
"""

from __future__ import annotations

import numpy as np
from scipy.interpolate import make_interp_spline

from . import _jets
from .diffeo import CircleDiffeo
from .fourier import PeriodicFunction
from .monodromy import DEFAULT_STEPS, integrate_fundamental
from .operators import DifferentialOperator

DEFAULT_COEFF_BAND = 32


class DegenerateCurveError(ValueError):
    """Curve fails non-degeneracy; carries the offending sample index."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ProjectiveCurve:
    """Discretized lift of a quasi-periodic non-degenerate curve.

    jets[j, d, :] is the d-th derivative of the lift at t_j = j/M for
    d = 0..jet_order; the grid includes both endpoints of [0, 1].
    """

    __slots__ = ("n", "grid", "jets", "monodromy", "nondegeneracy_margin")

    def __init__(self, jets, monodromy_matrix, check_tol=1e-8):
        jets = np.asarray(jets, dtype=float)
        if jets.ndim != 3:
            raise ValueError("jets must have shape (M+1, jet_order+1, n)")
        self.n = jets.shape[2]
        if jets.shape[1] < self.n:
            raise ValueError(f"need jets at least to order n-1 = {self.n - 1}")
        self.jets = jets
        self.grid = np.arange(jets.shape[0]) / (jets.shape[0] - 1)
        self.monodromy = np.asarray(monodromy_matrix, dtype=float)

        dets = np.linalg.det(jets[:, : self.n, :])
        bad = np.abs(dets) < 1e-12
        if bad.any():
            idx = int(np.argmax(bad))
            raise DegenerateCurveError(
                f"curve degenerate at sample {idx} (|det| = {abs(dets[idx]):.3e})", idx)
        self.nondegeneracy_margin = float(np.min(np.abs(dets)))

        qp = np.max(np.abs(self.jets[-1, 0] - self.monodromy @ self.jets[0, 0]))
        scale = max(1.0, float(np.max(np.abs(self.jets[0, 0]))))
        if qp > check_tol * scale:
            raise ValueError(f"quasi-periodicity residual {qp:.3e} exceeds {check_tol:.1e}")

    @property
    def steps(self):
        return len(self.grid) - 1

    @property
    def jet_order(self):
        return self.jets.shape[1] - 1

    @property
    def values(self):
        return self.jets[:, 0, :]

    def wronskian_values(self):
        """det(Gamma, Gamma', ..., Gamma^(n-1)) per sample."""
        return np.linalg.det(self.jets[:, : self.n, :])


def required_jet_order(n):
    """Jet order stored by default: enough for operator extraction of the
    dual curve (2n - 1 plus the n - 2 annihilator rows)."""
    return 3 * n - 3


def curve_of_operator(L: DifferentialOperator, steps=DEFAULT_STEPS, jet_order=None):
    """Solution curve of L: first jet row of the fundamental frames, with
    higher jets extended through the scalar ODE.

    The curve monodromy is Phi(1)^T: the solution row vector u(t) satisfies
    u(t + 1) = Phi(1)^T u(t).
    """
    n = L.order
    jet_order = required_jet_order(n) if jet_order is None else jet_order
    fund = integrate_fundamental(L, steps)
    m = fund.steps
    jets = np.empty((m + 1, jet_order + 1, n))
    jets[:, : n, :] = fund.frames
    if jet_order >= n:
        coeff_derivs = np.empty((n, jet_order - n + 1, m + 1))
        for i in range(n):
            a = L.coefficient(i)
            for r in range(jet_order - n + 1):
                coeff_derivs[i, r] = a(fund.grid)
                a = a.derivative()
        from math import comb
        for e in range(n, jet_order + 1):
            r_total = e - n
            acc = np.zeros((m + 1, n))
            for i in range(n):
                for r in range(r_total + 1):
                    acc += comb(r_total, r) * coeff_derivs[i, r][:, None] * jets[:, i + r_total - r, :]
            jets[:, e, :] = -acc
    return ProjectiveCurve(jets, fund.monodromy.T)


def operator_of_curve(curve: ProjectiveCurve, band=DEFAULT_COEFF_BAND):
    """Monic operator annihilating the Wronskian-renormalized lift.

    The lift is scaled pointwise by |W|^(-1/n) (continuous branch; curves
    whose Wronskian changes sign are rejected), the coefficients come from
    cofactor expansion of the order-(n+1) Wronskian along the u-column, and
    each coefficient is projected onto a Fourier series of the given band.
    """
    n = curve.n
    need = 2 * n - 1
    if curve.jet_order < need:
        raise ValueError(f"operator extraction needs jets to order {need}, have {curve.jet_order}")
    raw = curve.jets

    # entry (r, c): jet of u_c^(r) to order n (normalized per slice)
    w = _jets.det([[_jets.from_derivatives(raw[:, r : r + n + 1, c]) for c in range(n)]
                   for r in range(n)])
    w0 = w[..., 0]
    if np.min(w0) * np.max(w0) <= 0.0:
        idx = int(np.argmin(np.abs(w0)))
        raise DegenerateCurveError("Wronskian changes sign along the curve", idx)
    sign = 1.0 if w0[0] > 0 else -1.0
    lam = _jets.power(sign * w, -1.0 / n)
    if sign < 0 and n % 2 == 1:
        lam = -lam

    # jets of the renormalized lift components lambda * u_c, to order n
    scaled = np.empty((raw.shape[0], n + 1, n))
    for c in range(n):
        prod = _jets.mul(lam, _jets.from_derivatives(raw[:, :, c]))
        scaled[:, :, c] = _jets.to_derivatives(prod)[:, : n + 1]

    minors = np.empty((raw.shape[0], n + 1))
    for d in range(n + 1):
        rows = [r for r in range(n + 1) if r != d]
        minors[:, d] = np.linalg.det(scaled[:, rows, :])

    lead = minors[:, n]
    coeff_samples = minors / lead[:, None]
    signs = np.array([(-1.0) ** (n + d) for d in range(n + 1)])
    coeff_samples = coeff_samples * signs

    lower = [PeriodicFunction.from_samples(coeff_samples[:-1, d], band) for d in range(n)]
    return DifferentialOperator.monic(lower, n)


# ---------------------------------------------------------------------- #
# Dual curve


def _annihilator_jets(raw_jets, n, out_order):
    """Jets of the kernel vector of the rows (Gamma, ..., Gamma^(n-2)):
    component i is (-1)^i times the minor with column i deleted."""
    m = raw_jets.shape[0]
    out = np.zeros((m, out_order + 1, n))
    for i in range(n):
        cols = [c for c in range(n) if c != i]
        mat = [[_jets.from_derivatives(raw_jets[:, r : r + out_order + 1, c]) for c in cols]
               for r in range(n - 1)]
        d = _jets.det(mat) if n > 1 else np.ones((m, out_order + 1))
        out[:, :, i] = ((-1.0) ** i) * d
    return out


def dual_curve(curve: ProjectiveCurve):
    """Annihilator of the osculating flag F_{n-2}, as a curve.

    The cofactor construction is a continuous formula, so sign continuity
    along the grid is automatic; the lift monodromy is det(h) h^(-T).
    """
    n = curve.n
    out_order = curve.jet_order - (n - 2)
    if out_order < n - 1:
        raise ValueError("insufficient jet order for the dual curve")
    ann = _annihilator_jets(curve.jets, n, out_order)
    h = curve.monodromy
    h_dual = float(np.linalg.det(h)) * np.linalg.inv(h).T
    return ProjectiveCurve(_jets.to_derivatives(ann, axis=1), h_dual)


def projective_distance(curve_a: ProjectiveCurve, curve_b: ProjectiveCurve):
    """max over samples of the distance between unit representatives in
    RP^(n-1) (sign-insensitive)."""
    va = curve_a.values
    vb = curve_b.values
    ua = va / np.linalg.norm(va, axis=1, keepdims=True)
    ub = vb / np.linalg.norm(vb, axis=1, keepdims=True)
    d = np.minimum(np.linalg.norm(ua - ub, axis=1), np.linalg.norm(ua + ub, axis=1))
    return float(np.max(d))


def frame_transform(source: ProjectiveCurve, target: ProjectiveCurve):
    """The constant g with target = g . source when both are solution curves
    of one operator (matched through the jet frames at t = 0)."""
    a0 = source.jets[0, : source.n, :]
    b0 = target.jets[0, : target.n, :]
    return b0.T @ np.linalg.inv(a0.T)


def group_orbit_distance(curve_a: ProjectiveCurve, curve_b: ProjectiveCurve):
    """Pointwise residual of curve_b = g . curve_a for the frame-matched g,
    relative to the sample scale.  Zero when the curves are G-equivalent
    (e.g. self-duality of skew-adjoint solution curves, where the invariant
    bilinear form supplies the identification of the dual lift)."""
    g = frame_transform(curve_a, curve_b)
    moved = curve_a.values @ g.T
    scale = max(1.0, float(np.max(np.abs(curve_b.values))))
    return float(np.max(np.abs(moved - curve_b.values))) / scale


# ---------------------------------------------------------------------- #
# Group and diffeomorphism actions


def act_group(g, curve: ProjectiveCurve):
    """(g . Gamma)(t) = g Gamma(t); the monodromy conjugates, h -> g h g^-1."""
    g = np.asarray(g, dtype=float)
    jets = np.einsum("ik,jdk->jdi", g, curve.jets)
    h = g @ curve.monodromy @ np.linalg.inv(g)
    return ProjectiveCurve(jets, h)


def act_diffeo(F: CircleDiffeo, curve: ProjectiveCurve):
    """Reparametrization (Gamma o F)(t), the diffeomorphism action matching
    ``operators.diffeo_act``; the monodromy is unchanged.

    Old jets are interpolated at F(t_j) with a quintic spline on the
    Floquet-extended grid and recombined by Taylor composition with the
    (exact) jet of F.
    """
    n = curve.n
    m = curve.steps
    korder = curve.jet_order
    t = curve.grid
    y = F(t)

    h = curve.monodromy
    hinv = np.linalg.inv(h)
    ext = np.concatenate([
        np.einsum("ik,jdk->jdi", hinv, curve.jets[:-1]),
        curve.jets,
        np.einsum("ik,jdk->jdi", h, curve.jets[1:]),
    ])
    ext_grid = np.concatenate([t[:-1] - 1.0, t, t[1:] + 1.0])

    interp = np.empty((len(t), korder + 1, n))
    for d in range(korder + 1):
        for c in range(n):
            spl = make_interp_spline(ext_grid, ext[:, d, c], k=5)
            interp[:, d, c] = spl(y)

    f_jet = np.empty((len(t), korder + 1))
    f_jet[:, 0] = 0.0
    disp = F.displacement
    f_jet[:, 1] = 1.0 + disp.derivative()(t)
    dd = disp.derivative()
    fact = 1.0
    for d in range(2, korder + 1):
        dd = dd.derivative()
        fact *= d
        f_jet[:, d] = dd(t) / fact

    outer = _jets.from_derivatives(interp, axis=1)
    new_jets = np.empty_like(interp)
    for c in range(n):
        new_jets[:, :, c] = _jets.compose(outer[:, :, c], f_jet)
    return ProjectiveCurve(_jets.to_derivatives(new_jets, axis=1), h)


# ---------------------------------------------------------------------- #
# Universal-cover data for n = 2


class WindingLift:
    """Monodromy plus the accumulated half-turn count of the planar lift:
    the class of the curve in the universal cover of SL(2, R)."""

    __slots__ = ("monodromy", "half_turns", "winding")

    def __init__(self, monodromy_matrix, half_turns):
        self.monodromy = monodromy_matrix
        self.half_turns = float(half_turns)
        self.winding = int(round(half_turns))


def winding_lift_n2(curve: ProjectiveCurve):
    """Accumulated rotation angle of the planar lift over one period,
    counted in half-turns.  Only defined for n = 2."""
    if curve.n != 2:
        raise ValueError("winding lift implemented for n = 2 only")
    v = curve.values
    cross = v[:-1, 0] * v[1:, 1] - v[:-1, 1] * v[1:, 0]
    dot = np.einsum("ij,ij->i", v[:-1], v[1:])
    total = float(np.sum(np.arctan2(cross, dot)))
    return WindingLift(curve.monodromy, total / np.pi)
