"""Pure-Python/numpy implementations of the hot kernels.

Same signatures and results as the compiled ``_ckernels`` module.
"""

import numpy as np

BACKEND = "python"


def _lie_indices(n):
    a, b, s = [], [], []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            a.append(i)
            b.append(j)
            s.append(1.0)
    for i in range(1, n + 1):
        a.append(0)
        b.append(i)
        s.append(-1.0)
    return np.array(a), np.array(b), np.array(s)


def commutator_images(L, alpha, R):
    """Rows ``vec(L (X alpha - alpha X) R)`` for X over the so(n,1) basis.

    Basis elements are ``E_ab - s E_ba`` (rotations s=+1, boosts s=-1).
    Uses ``L X A - B X R`` with ``A = alpha R`` and ``B = L alpha``; each
    term is a sum of two outer products.
    """
    L = np.ascontiguousarray(L, dtype=float)
    alpha = np.ascontiguousarray(alpha, dtype=float)
    R = np.ascontiguousarray(R, dtype=float)
    N = alpha.shape[0]
    a, b, s = _lie_indices(N - 1)
    A = alpha @ R
    B = L @ alpha
    out = (
        np.einsum("it,tj->tij", L[:, a], A[b])
        - s[:, None, None] * np.einsum("it,tj->tij", L[:, b], A[a])
        - np.einsum("it,tj->tij", B[:, a], R[b])
        + s[:, None, None] * np.einsum("it,tj->tij", B[:, b], R[a])
    )
    return out.reshape(len(a), N * N)


def count_length_two(n):
    """Number of k in 1..n-1 with n(n+1) <= 4k(n-k+1)."""
    k = np.arange(1, n, dtype=np.int64)
    return int(np.count_nonzero(4 * k * (n - k + 1) >= n * (n + 1)))


def count_length_two_table(n_max):
    """Array c with c[n] = count_length_two(n) for 2 <= n <= n_max."""
    out = np.zeros(n_max + 1, dtype=np.int64)
    for n in range(2, n_max + 1):
        out[n] = count_length_two(n)
    return out
