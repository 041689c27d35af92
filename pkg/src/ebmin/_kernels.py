"""Compiled inner loops for the O(k^2) gain sums.

All loops run in a fixed order so results are bit-for-bit reproducible.
The gain law ``min(gbar, r**-alpha)`` is evaluated from the squared
distance; common exponents get a pow-free path.
"""

import numba
import numpy as np


@numba.njit(inline="always", error_model="numpy")
def _gain_from_sq(r2, alpha, gbar):
    if alpha == 4.0:
        g = 1.0 / (r2 * r2)
    elif alpha == 3.0:
        g = 1.0 / (r2 * np.sqrt(r2))
    elif alpha == 6.0:
        g = 1.0 / (r2 * r2 * r2)
    else:
        g = r2 ** (-0.5 * alpha)
    if g > gbar:
        g = gbar
    return g


@numba.njit(cache=True, error_model="numpy")
def source_gain_sums(x, y, dst, alpha, gbar):
    """For every node i, the sum of gains to the nodes in ``dst`` other than i."""
    k = x.shape[0]
    out = np.zeros(k)
    for i in range(k):
        xi = x[i]
        yi = y[i]
        s = 0.0
        for t in range(dst.shape[0]):
            j = dst[t]
            if j == i:
                continue
            dx = xi - x[j]
            dy = yi - y[j]
            s += _gain_from_sq(dx * dx + dy * dy, alpha, gbar)
        out[i] = s
    return out


@numba.njit(cache=True, error_model="numpy")
def received_energy(x, y, tx, energy, rx, alpha, gbar):
    """Energy landing on each node of ``rx`` from transmitters ``tx``.

    Transmitters are summed in the order given.
    """
    out = np.zeros(rx.shape[0])
    for t in range(rx.shape[0]):
        j = rx[t]
        xj = x[j]
        yj = y[j]
        s = 0.0
        for u in range(tx.shape[0]):
            i = tx[u]
            dx = x[i] - xj
            dy = y[i] - yj
            s += energy[u] * _gain_from_sq(dx * dx + dy * dy, alpha, gbar)
        out[t] = s
    return out
