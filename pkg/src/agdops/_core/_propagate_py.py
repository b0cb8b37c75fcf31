"""Pure-numpy RK4 propagation of linear matrix ODEs Phi' = C(t) Phi.

Reference backend for the compiled kernel in ``_propagate_cy``.  Batched over
instances so the Python-level loop runs once per time step, not per instance.
"""

import numpy as np

BACKEND = "numpy"


def propagate(samples, h, store_path=False):
    """Integrate Phi' = C(t) Phi with classical RK4 from Phi(0) = I.

    Parameters
    ----------
    samples : ndarray, shape (B, 2M+1, n, n)
        Coefficient matrix C evaluated on the half-step grid t_k = k*h/2.
    h : float
        Step size; the integration covers M = (samples.shape[1]-1)//2 steps.
    store_path : bool
        If True return the full path, shape (B, M+1, n, n); otherwise only
        the final frame, shape (B, n, n).
    """
    samples = np.ascontiguousarray(samples, dtype=np.float64)
    if samples.ndim != 4 or samples.shape[2] != samples.shape[3]:
        raise ValueError(f"expected samples of shape (B, 2M+1, n, n), got {samples.shape}")
    nhalf = samples.shape[1]
    if nhalf % 2 != 1:
        raise ValueError("half-step grid must have odd length 2M+1")
    batch, _, n, _ = samples.shape
    steps = (nhalf - 1) // 2

    phi = np.broadcast_to(np.eye(n), (batch, n, n)).copy()
    path = None
    if store_path:
        path = np.empty((batch, steps + 1, n, n))
        path[:, 0] = phi

    half = 0.5 * h
    sixth = h / 6.0
    for j in range(steps):
        a0 = samples[:, 2 * j]
        a1 = samples[:, 2 * j + 1]
        a2 = samples[:, 2 * j + 2]
        k1 = a0 @ phi
        k2 = a1 @ (phi + half * k1)
        k3 = a1 @ (phi + half * k2)
        k4 = a2 @ (phi + h * k3)
        phi = phi + sixth * (k1 + 2.0 * (k2 + k3) + k4)
        if store_path:
            path[:, j + 1] = phi

    return path if store_path else phi
