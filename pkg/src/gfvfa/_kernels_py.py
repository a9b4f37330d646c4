"""Pure numpy implementations of the hot kernels.

Same signatures and semantics as the compiled ``_ckernels`` module. The
compiled versions sum in a fixed order per output entry; these delegate to
BLAS, so results agree to rounding but not bit-for-bit.
"""

import numpy as np


def bilinear_contract(c, phi):
    """``G[n, k] = sum_p sum_q c[n, p] * conj(c[n, q]) * phi[p, k, q]``."""
    c = np.ascontiguousarray(c, dtype=complex)
    phi = np.ascontiguousarray(phi, dtype=float)
    n, m = c.shape
    outer = (c[:, :, None] * c.conj()[:, None, :]).reshape(n, m * m)
    return outer @ phi.transpose(0, 2, 1).reshape(m * m, -1)


def choi_williams_table(lam, gamma, tol):
    """``phi[p, k, q]`` of the normalised Choi-Williams kernel.

    Where ``|lam[p] - lam[q]| <= tol`` (including ``p == q``) the slice
    collapses to ``delta(k - q)``.
    """
    lam = np.asarray(lam, dtype=float)
    n = lam.size
    dpq = np.abs(lam[:, None] - lam[None, :])  # [p, q]
    dkq = np.abs(lam[:, None] - lam[None, :])  # [k, q]
    degenerate = dpq <= tol
    safe = np.where(degenerate, 1.0, dpq)
    ratio = dkq[None, :, :] / safe[:, None, :]
    table = np.exp(-gamma * ratio)
    table /= table.sum(axis=1, keepdims=True)
    eye = np.eye(n)
    p_idx, q_idx = np.nonzero(degenerate)
    table[p_idx, :, q_idx] = eye[q_idx]
    return table


def gfed_hat_moments(x, noise, fa, ua_conj, uh):
    """Sums over noise draws of ``Ehat_y``, ``|Ehat_y|**2`` and ``|Ehat_y|**4``.

    For each draw ``y = x + noise[d]``: ``E[i, k] = y[i] conj(yhat_a[k])
    ua_conj[i, k]`` with ``yhat_a = fa @ y``, and ``Ehat = uh @ E``.
    """
    x = np.asarray(x, dtype=complex)
    noise = np.asarray(noise, dtype=complex)
    n = x.size
    s1 = np.zeros((n, n), dtype=complex)
    s2 = np.zeros((n, n))
    s4 = np.zeros((n, n))
    chunk = max(1, 2**20 // (n * n))
    for start in range(0, noise.shape[0], chunk):
        y = x[None, :] + noise[start:start + chunk]
        yh = y @ fa.T
        e = y[:, :, None] * yh.conj()[:, None, :] * ua_conj[None]
        eh = np.matmul(uh[None], e)
        a2 = eh.real**2 + eh.imag**2
        s1 += eh.sum(axis=0)
        s2 += a2.sum(axis=0)
        s4 += (a2 * a2).sum(axis=0)
    return s1, s2, s4
