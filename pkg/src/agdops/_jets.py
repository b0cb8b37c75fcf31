"""Vectorized truncated-Taylor (jet) arithmetic.

A jet of order K is the array of normalized Taylor coefficients
[f, f'/1!, f''/2!, ..., f^(K)/K!] stored along the LAST axis; leading axes
broadcast, so a field of jets over a sample grid is just an (M, K+1) array.
Used by the curve dictionary for Wronskian renormalization, dual curves, and
composition under diffeomorphisms.
"""

from __future__ import annotations

import math

import numpy as np


def _factorials(k, axis, ndim):
    fact = np.array([math.factorial(d) for d in range(k)])
    shape = [1] * ndim
    shape[axis] = k
    return fact.reshape(shape)


def from_derivatives(derivs, axis=-1):
    """Normalized jet from raw derivative values f^(d) along ``axis``."""
    derivs = np.asarray(derivs, dtype=float)
    return derivs / _factorials(derivs.shape[axis], axis, derivs.ndim)


def to_derivatives(jet, axis=-1):
    """Raw derivative values f^(d) from a normalized jet."""
    jet = np.asarray(jet, dtype=float)
    return jet * _factorials(jet.shape[axis], axis, jet.ndim)


def mul(a, b):
    """Cauchy product truncated to the shorter jet order."""
    a = np.asarray(a)
    b = np.asarray(b)
    k = min(a.shape[-1], b.shape[-1])
    out = np.zeros(np.broadcast_shapes(a.shape[:-1], b.shape[:-1]) + (k,))
    for i in range(k):
        for j in range(k - i):
            out[..., i + j] += a[..., i] * b[..., j]
    return out


def power(a, p):
    """a**p for a jet with strictly positive constant term (real exponent p).

    Recurrence for y = x^p:  i y_i x_0 = sum_{j=1..i} (j(p+1) - i) x_j y_{i-j}.
    Sign branches for negative bases are the caller's policy.
    """
    a = np.asarray(a, dtype=float)
    k = a.shape[-1]
    if np.any(a[..., 0] <= 0.0):
        raise ValueError("jet power requires a positive constant term")
    out = np.zeros_like(a)
    out[..., 0] = a[..., 0] ** p
    for i in range(1, k):
        acc = np.zeros(a.shape[:-1])
        for j in range(1, i + 1):
            acc += (j * (p + 1) - i) * a[..., j] * out[..., i - j]
        out[..., i] = acc / (i * a[..., 0])
    return out


def det(mat):
    """Determinant of a small matrix of jets.

    ``mat`` is a nested list (rows of columns) of jet arrays with a common
    broadcastable shape; expansion by minors along the first row, exact in
    jet arithmetic.
    """
    size = len(mat)
    if size == 1:
        return np.asarray(mat[0][0])
    if size == 2:
        return mul(mat[0][0], mat[1][1]) - mul(mat[0][1], mat[1][0])
    out = None
    for c in range(size):
        minor = [[row[cc] for cc in range(size) if cc != c] for row in mat[1:]]
        term = mul(mat[0][c], det(minor))
        if c % 2 == 1:
            term = -term
        out = term if out is None else out + term
    return out


def compose(outer, inner):
    """Jet of (outer o inner) where ``inner`` has zero constant term.

    Both jets are normalized Taylor coefficient arrays of equal order; the
    composition is the truncated Horner evaluation of outer at inner.
    """
    outer = np.asarray(outer)
    inner = np.asarray(inner)
    k = outer.shape[-1]
    if np.max(np.abs(inner[..., 0])) > 0.0:
        raise ValueError("inner jet must have zero constant term")
    out = np.zeros(np.broadcast_shapes(outer.shape[:-1], inner.shape[:-1]) + (k,))
    out[..., 0] = outer[..., k - 1]
    for i in range(k - 2, -1, -1):
        out = mul(out, inner)
        out[..., 0] += outer[..., i]
    return out
