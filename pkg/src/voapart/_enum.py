"""Fincke-Pohst short-vector enumeration kernels.

Pruning uses a floating-point Cholesky form with half-unit slack; the norm of
every candidate is recomputed exactly in int64 from the integer Gram matrix,
so returned coordinates and norms are exact.
"""
import math

import numpy as np
from numba import njit


@njit(cache=True)
def _walk(q, G, maxnorm, top_lo, top_hi, counts, out, cap):
    """Depth-first walk; histogram exact norms into counts[norm // 2] and,
    when cap > 0, store up to cap vectors in out.  Returns #vectors found."""
    n = q.shape[0]
    x = np.zeros(n, np.int64)
    ub = np.zeros(n, np.int64)
    T = np.zeros(n)
    U = np.zeros(n)
    P = np.zeros(n + 1, np.int64)   # exact partial norms of coordinates i..n-1
    W = np.zeros(n, np.int64)       # sum_{j>i} G[i, j] x_j
    bound = maxnorm + 0.5
    found = 0

    i = n - 1
    T[i] = bound
    U[i] = 0.0
    W[i] = 0
    Z = math.sqrt(T[i] / q[i, i])
    ub[i] = min(int(math.floor(Z - U[i])), top_hi)
    x[i] = max(int(math.ceil(-Z - U[i])), top_lo) - 1
    while True:
        x[i] += 1
        if x[i] > ub[i]:
            i += 1
            if i >= n:
                break
            continue
        xi = x[i]
        P[i] = P[i + 1] + G[i, i] * xi * xi + 2 * xi * W[i]
        if i == 0:
            nrm = P[0]
            if nrm <= maxnorm:
                counts[nrm // 2] += 1
                if found < cap:
                    for j in range(n):
                        out[found, j] = x[j]
                found += 1
            continue
        t = xi + U[i]
        rem = T[i] - q[i, i] * t * t
        if rem < 0:
            continue
        i -= 1
        T[i] = rem
        s = 0.0
        w = 0
        for j in range(i + 1, n):
            s += q[i, j] * x[j]
            w += G[i, j] * x[j]
        U[i] = s
        W[i] = w
        Z = math.sqrt(T[i] / q[i, i])
        ub[i] = int(math.floor(Z - U[i]))
        x[i] = int(math.ceil(-Z - U[i])) - 1
    return found


def quadratic_form(G: np.ndarray) -> np.ndarray:
    """Upper-triangular q with Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2."""
    n = G.shape[0]
    A = np.array(G, dtype=float)
    q = np.zeros((n, n))
    for i in range(n):
        q[i, i] = A[i, i] - sum(q[k, k] * q[k, i] ** 2 for k in range(i))
        for j in range(i + 1, n):
            q[i, j] = (A[i, j] - sum(q[k, k] * q[k, i] * q[k, j] for k in range(i))) / q[i, i]
    return q


def top_range(q: np.ndarray, maxnorm: int) -> tuple[int, int]:
    n = q.shape[0]
    Z = math.sqrt((maxnorm + 0.5) / q[n - 1, n - 1])
    return int(math.ceil(-Z)), int(math.floor(Z))


def walk(q, G, maxnorm, top_lo, top_hi, cap=0):
    counts = np.zeros(maxnorm // 2 + 1, np.int64)
    n = q.shape[0]
    out = np.zeros((max(cap, 1), n), np.int64)
    found = _walk(q, G, maxnorm, top_lo, top_hi, counts, out, cap)
    return counts, out[: min(found, cap)], found
