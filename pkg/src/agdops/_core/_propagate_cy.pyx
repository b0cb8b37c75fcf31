# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled RK4 propagation of linear matrix ODEs Phi' = C(t) Phi.

Hot kernel behind monodromy and holonomy computations; semantics match
``_propagate_py.propagate`` exactly (same arithmetic, same order).
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"


cdef inline void _matmul(double[:, ::1] out, double[:, :, ::1] c, Py_ssize_t k,
                         double[:, ::1] x, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j, m
    cdef double acc
    for i in range(n):
        for j in range(n):
            acc = 0.0
            for m in range(n):
                acc += c[k, i, m] * x[m, j]
            out[i, j] = acc


def propagate(samples, double h, bint store_path=False):
    """Batched RK4 for Phi' = C(t) Phi from Phi(0) = I.

    ``samples`` has shape (B, 2M+1, n, n): C on the half-step grid.  Returns
    the full path (B, M+1, n, n) when ``store_path`` else the final frames
    (B, n, n).
    """
    samples = np.ascontiguousarray(samples, dtype=np.float64)
    if samples.ndim != 4 or samples.shape[2] != samples.shape[3]:
        raise ValueError(f"expected samples of shape (B, 2M+1, n, n), got {samples.shape}")
    if samples.shape[1] % 2 != 1:
        raise ValueError("half-step grid must have odd length 2M+1")

    cdef Py_ssize_t batch = samples.shape[0]
    cdef Py_ssize_t n = samples.shape[2]
    cdef Py_ssize_t steps = (samples.shape[1] - 1) // 2
    cdef double[:, :, :, ::1] c_all = samples

    out_path = np.empty((batch, steps + 1, n, n)) if store_path else None
    out_final = None if store_path else np.empty((batch, n, n))
    cdef double[:, :, :, ::1] path_v = out_path if store_path else None
    cdef double[:, :, ::1] final_v = out_final if out_final is not None else None

    phi_arr = np.empty((n, n))
    k1_arr = np.empty((n, n))
    k2_arr = np.empty((n, n))
    k3_arr = np.empty((n, n))
    k4_arr = np.empty((n, n))
    tmp_arr = np.empty((n, n))
    cdef double[:, ::1] phi = phi_arr
    cdef double[:, ::1] k1 = k1_arr
    cdef double[:, ::1] k2 = k2_arr
    cdef double[:, ::1] k3 = k3_arr
    cdef double[:, ::1] k4 = k4_arr
    cdef double[:, ::1] tmp = tmp_arr

    cdef double half = 0.5 * h
    cdef double sixth = h / 6.0
    cdef Py_ssize_t b, j, i, q
    cdef double[:, :, ::1] c_b

    with nogil:
        for b in range(batch):
            c_b = c_all[b]
            for i in range(n):
                for q in range(n):
                    phi[i, q] = 1.0 if i == q else 0.0
            if store_path:
                for i in range(n):
                    for q in range(n):
                        path_v[b, 0, i, q] = phi[i, q]
            for j in range(steps):
                _matmul(k1, c_b, 2 * j, phi, n)
                for i in range(n):
                    for q in range(n):
                        tmp[i, q] = phi[i, q] + half * k1[i, q]
                _matmul(k2, c_b, 2 * j + 1, tmp, n)
                for i in range(n):
                    for q in range(n):
                        tmp[i, q] = phi[i, q] + half * k2[i, q]
                _matmul(k3, c_b, 2 * j + 1, tmp, n)
                for i in range(n):
                    for q in range(n):
                        tmp[i, q] = phi[i, q] + h * k3[i, q]
                _matmul(k4, c_b, 2 * j + 2, tmp, n)
                for i in range(n):
                    for q in range(n):
                        phi[i, q] = phi[i, q] + sixth * (
                            k1[i, q] + 2.0 * (k2[i, q] + k3[i, q]) + k4[i, q])
                if store_path:
                    for i in range(n):
                        for q in range(n):
                            path_v[b, j + 1, i, q] = phi[i, q]
            if not store_path:
                for i in range(n):
                    for q in range(n):
                        final_v[b, i, q] = phi[i, q]

    return out_path if store_path else out_final
