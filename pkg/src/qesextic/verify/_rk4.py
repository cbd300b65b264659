"""Fixed-step RK4 for ``u'' = q(x) u`` written as products of 2x2 transfer matrices.

Because the ODE is linear, one RK4 step is a matrix acting on ``(u, u')``.
Building all step matrices at once lets numpy do the work, and the full
propagator is formed by a pairwise tree product.  Every partial product
is rescaled by an exact power of two whose exponent is carried
separately, so ``exp(x^4/4)`` growth never overflows and no rounding is
introduced by the rescaling.
"""
from __future__ import annotations

import numpy as np


def step_matrices(q0, qh, q1, h):
    """RK4 transfer matrices for ``y' = [[0, 1], [q, 0]] y``.

    ``q0, qh, q1`` hold ``q`` at the start, midpoint and end of each step
    (any leading batch shape).  Returns an array of shape ``q0.shape + (2, 2)``.
    """
    q0, qh, q1 = (np.asarray(a, dtype=complex) for a in (q0, qh, q1))
    shape = q0.shape
    one = np.ones(shape, dtype=complex)
    zero = np.zeros(shape, dtype=complex)

    def amul(q, m):
        # [[0,1],[q,0]] @ m
        return (m[2], m[3], q * m[0], q * m[1])

    def ipl(c, m):
        # I + c * m
        return (1 + c * m[0], c * m[1], c * m[2], 1 + c * m[3])

    k1 = (zero, one, q0, zero)
    k2 = amul(qh, ipl(h / 2, k1))
    k3 = amul(qh, ipl(h / 2, k2))
    k4 = amul(q1, ipl(h, k3))
    out = np.empty(shape + (2, 2), dtype=complex)
    for idx, (a, b, c, d) in enumerate(zip(k1, k2, k3, k4)):
        val = (a + 2 * b + 2 * c + d) * (h / 6)
        out[..., idx // 2, idx % 2] = val + (1.0 if idx in (0, 3) else 0.0)
    return out


def _rescale(m):
    peak = np.max(np.abs(m), axis=(-2, -1))
    _, e = np.frexp(np.where(peak > 0, peak, 1.0))
    return np.ldexp(m.real, -e[..., None, None]) + 1j * np.ldexp(m.imag, -e[..., None, None]), e


def chain_product(T):
    """Ordered product ``T[N-1] @ ... @ T[0]`` over the step axis (-3).

    Returns ``(mantissa, exponent)`` with ``product = mantissa * 2**exponent``.
    """
    T = np.asarray(T, dtype=complex)
    exps = np.zeros(T.shape[:-2], dtype=np.int64)
    while T.shape[-3] > 1:
        if T.shape[-3] % 2:
            eye = np.broadcast_to(np.eye(2, dtype=complex), T.shape[:-3] + (1, 2, 2))
            T = np.concatenate([T, eye], axis=-3)
            exps = np.concatenate([exps, np.zeros(exps.shape[:-1] + (1,), np.int64)], axis=-1)
        T = T[..., 1::2, :, :] @ T[..., 0::2, :, :]
        exps = exps[..., 1::2] + exps[..., 0::2]
        T, e = _rescale(T)
        exps = exps + e
    return T[..., 0, :, :], exps[..., 0]


def propagate(T, y0):
    """Sequential propagation returning the state after every step (no rescaling)."""
    n = T.shape[0]
    ys = np.empty((n + 1, 2), dtype=complex)
    ys[0] = y0
    y = np.asarray(y0, dtype=complex)
    for i in range(n):
        y = T[i] @ y
        ys[i + 1] = y
    return ys
