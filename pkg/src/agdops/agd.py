"""Pseudodifferential symbols and the Adler-Gelfand-Dikii Poisson structure.

Symbols are finite Laurent expansions in D = d/dtheta with PeriodicFunction
coefficients.  Products use the Leibniz expansion

    D^m (a .) = sum_j binom(m, j) a^(j) D^(m-j)

with the generalized binomial for negative m, carried exactly down to a
requested floor order.  The extension of D^-1 past a coefficient,
D^-1 (a .) = a D^-1 - a' D^-2 + a'' D^-3 - ..., is the j-th term rule above
with binom(-1, j) = (-1)^j.
"""

from __future__ import annotations

from math import comb

import numpy as np

from .fourier import PeriodicFunction
from .operators import DifferentialOperator, GroupClass, is_in_class


class OrderContractError(RuntimeError):
    """The Hamiltonian field failed its order contract (indicates a bug in
    the computation, not bad input)."""


def _gen_binom(m, j):
    """Generalized binomial coefficient binom(m, j) for integer m (possibly
    negative) and j >= 0."""
    if m >= 0:
        return comb(m, j) if j <= m else 0
    num = 1
    for t in range(j):
        num *= (m - t)
    den = 1
    for t in range(1, j + 1):
        den *= t
    return num // den


class PseudoDifferentialSymbol:
    """Finite sum  X = sum_m p_m(theta) D^m  over integer orders m."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for m, f in terms.items():
                f = f if isinstance(f, PeriodicFunction) else PeriodicFunction.constant(f)
                if not f.is_zero():
                    clean[int(m)] = f
        self.terms = clean

    @classmethod
    def zero(cls):
        return cls({})

    @classmethod
    def single(cls, order, coeff):
        return cls({order: coeff})

    @classmethod
    def from_operator(cls, L: DifferentialOperator):
        return cls({i: c for i, c in enumerate(L.coeffs)})

    @property
    def max_order(self):
        return max(self.terms) if self.terms else None

    @property
    def min_order(self):
        return min(self.terms) if self.terms else None

    def coefficient(self, m):
        return self.terms.get(m, PeriodicFunction.zero())

    def __add__(self, other):
        terms = dict(self.terms)
        for m, f in other.terms.items():
            terms[m] = terms[m] + f if m in terms else f
        return PseudoDifferentialSymbol(terms)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return PseudoDifferentialSymbol({m: scalar * f for m, f in self.terms.items()})

    __rmul__ = __mul__

    def multiply(self, other: "PseudoDifferentialSymbol", floor):
        """Symbol product with every coefficient of order >= floor exact.

        Nonnegative-order factors compose with the finite binomial Leibniz
        rule; negative orders expand until the produced order drops below
        ``floor``.
        """
        out = {}
        for m, f in self.terms.items():
            for k, g in other.terms.items():
                jmax = m if m >= 0 else m + k - floor
                if jmax < 0:
                    continue
                dg = g
                for j in range(jmax + 1):
                    if j > 0:
                        dg = dg.derivative()
                    order = m + k - j
                    if order < floor:
                        break
                    c = _gen_binom(m, j)
                    if c == 0:
                        continue
                    term = c * f * dg
                    out[order] = out[order] + term if order in out else term
        return PseudoDifferentialSymbol(out)

    def plus_part(self):
        """Discard strictly negative orders; result as a (general, possibly
        non-monic) DifferentialOperator."""
        top = max((m for m in self.terms if m >= 0), default=0)
        coeffs = [self.coefficient(i) for i in range(top + 1)]
        return DifferentialOperator(coeffs)

    def residue(self):
        """Coefficient of D^-1."""
        return self.coefficient(-1)

    def coeff_norm(self):
        if not self.terms:
            return 0.0
        return max(f.coeff_norm() for f in self.terms.values())

    def __repr__(self):
        orders = sorted(self.terms)
        return f"PseudoDifferentialSymbol(orders={orders})"


def pdo_multiply(X, Y, floor):
    return X.multiply(Y, floor)


class AGDFunctional:
    """Linear functional ell_X(L) = res(X L) integrated over the circle,
    with X supported on orders [-n, -1]."""

    __slots__ = ("symbol",)

    def __init__(self, symbol: PseudoDifferentialSymbol):
        if symbol.terms and symbol.max_order > -1:
            raise ValueError("AGD functionals use symbols of strictly negative order")
        self.symbol = symbol

    def __call__(self, L):
        return ell_eval(self, L)


def _check_orders(X: PseudoDifferentialSymbol, n):
    if X.terms and (X.max_order > -1 or X.min_order < -n):
        raise ValueError(f"symbol orders {sorted(X.terms)} outside [-{n}, -1]")


def ell_eval(functional, L: DifferentialOperator, floor=-1):
    """ell_X(L) = integral of the D^-1 coefficient of X * L.

    The required Leibniz depth is bounded by the operator order, so the
    result with floor -1 is exact; lower floors reproduce it (depth
    stability).
    """
    X = functional.symbol if isinstance(functional, AGDFunctional) else functional
    prod = X.multiply(PseudoDifferentialSymbol.from_operator(L), floor)
    return prod.residue().integral()


def canonical_symbol(X: PseudoDifferentialSymbol, L: DifferentialOperator):
    """Adjust the D^-n component of X so that V_X(L) is tangent to R_n.

    The D^(n-1) coefficient of the raw field is res(LX) - res(XL), a total
    derivative; the functional ell_X on R_n does not see the D^-n component
    of X (it pairs with a_{n-1} = 0), so that component is the gauge freedom
    used to cancel it.  The correction is the unique zero-mean solution of
    n * X_n' = -(res(LX) - res(XL)).
    """
    n = L.order
    Lsym = PseudoDifferentialSymbol.from_operator(L)
    rho = Lsym.multiply(X, floor=-1).residue() - X.multiply(Lsym, floor=-1).residue()
    correction = (-1.0 / n) * rho.antiderivative()
    return X + PseudoDifferentialSymbol.single(-n, correction)


def hamiltonian_field(X: PseudoDifferentialSymbol, L: DifferentialOperator,
                      order_tol=1e-10):
    """V_X(L) = L (X~ L)_+ - (L X~)_+ L with X~ the canonical representative
    of X; an operator of order n-2, tangent to R_n.

    X is completed by :func:`canonical_symbol` before the Adler formula is
    applied; the completion does not change the functional ell_X on R_n.
    After it, the coefficients of D^n and D^(n-1) (and all higher
    cancellations) vanish identically; a residual beyond ``order_tol``
    raises OrderContractError since it indicates a computational failure
    rather than bad input.
    """
    if not L.is_monic:
        raise ValueError("the Hamiltonian field is defined on monic class operators")
    n = L.order
    _check_orders(X, n)
    full = _hamiltonian_field_full(canonical_symbol(X, L), L)
    residual = order_contract_residual_of(full, n)
    if residual > order_tol:
        raise OrderContractError(
            f"V_X(L) order contract violated: residual {residual:.3e} > {order_tol:.1e}")
    return full.trimmed(order=max(n - 2, 0))


def _hamiltonian_field_full(X, L):
    Lsym = PseudoDifferentialSymbol.from_operator(L)
    xl_plus = X.multiply(Lsym, floor=0).plus_part()
    lx_plus = Lsym.multiply(X, floor=0).plus_part()
    return L.compose(xl_plus) - lx_plus.compose(L)


def order_contract_residual_of(full: DifferentialOperator, n):
    """Sup coefficient norm of the D^(n-1) and higher parts of a raw V_X."""
    if full.order < n - 1:
        return 0.0
    return max(full.coefficient(i).inf_norm() for i in range(n - 1, full.order + 1))


def order_contract_residual(X, L):
    """Diagnostic: the order-contract residual of V_X(L) before trimming."""
    full = _hamiltonian_field_full(canonical_symbol(X, L), L)
    return order_contract_residual_of(full, L.order)


def poisson_bracket(X, Y, L: DifferentialOperator):
    """{ell_X, ell_Y}(L) := ell_Y(V_X(L)).

    The sign convention is fixed here; antisymmetry is verified numerically
    by the test suites rather than assumed.
    """
    X = X.symbol if isinstance(X, AGDFunctional) else X
    Y = Y.symbol if isinstance(Y, AGDFunctional) else Y
    V = hamiltonian_field(X, L)
    prod = Y.multiply(PseudoDifferentialSymbol.from_operator(V), floor=-1)
    return prod.residue().integral()


def bracket_directional(X, G, L: DifferentialOperator, step=1e-4):
    """{ell_X, G}(L) for a general functional G: L -> R, via a central
    difference of G along the Hamiltonian field V_X(L)."""
    X = X.symbol if isinstance(X, AGDFunctional) else X
    V = hamiltonian_field(X, L)
    n = L.order
    plus = DifferentialOperator.monic(
        [L.coefficient(i) + step * V.coefficient(i) for i in range(n)], n)
    minus = DifferentialOperator.monic(
        [L.coefficient(i) - step * V.coefficient(i) for i in range(n)], n)
    return (G(plus) - G(minus)) / (2.0 * step)


def jacobi_defect(X, Y, Z, L: DifferentialOperator, step=1e-4):
    """Cyclic sum of {ell_X, {ell_Y, ell_Z}}(L) with the outer bracket taken
    as a finite difference along V-fields (documented as such)."""
    def inner(A, B):
        return lambda M: poisson_bracket(A, B, M)

    total = bracket_directional(X, inner(Y, Z), L, step)
    total += bracket_directional(Y, inner(Z, X), L, step)
    total += bracket_directional(Z, inner(X, Y), L, step)
    return total


def class_tangency_check(X: PseudoDifferentialSymbol, L: DifferentialOperator,
                         group: GroupClass, tol=1e-10):
    """Whether D^n + V_X(L) stays in the class R_n^G; returns the membership
    check with its residual."""
    n = L.order
    V = hamiltonian_field(X, L)
    shifted = DifferentialOperator.monic([V.coefficient(i) for i in range(n)], n)
    return is_in_class(shifted, group, tol)
