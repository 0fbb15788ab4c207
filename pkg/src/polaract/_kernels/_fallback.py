"""Pure numpy implementation of the hot kernels.

Decoding is vectorized across the batch (trial) axis; the recursion over
the code tree runs in Python.  Interface mirrors ``_core.pyx``.
"""

import numpy as np

def polar_transform(x: np.ndarray) -> int:
    """In-place ``x <- G_2^{(x)k} x`` over GF(2) along the last axis.

    Returns the number of XORs applied to one row.
    """
    n = x.shape[-1]
    if n & (n - 1):
        raise ValueError(f"length {n} is not a power of two")
    rows = x.reshape(-1, n)
    xors = 0
    h = 1
    while h < n:
        view = rows.reshape(rows.shape[0], n // (2 * h), 2, h)
        view[:, :, 0, :] ^= view[:, :, 1, :]
        xors += n // 2
        h *= 2
    return xors


def llr_bad(a, b):
    """LLR form of (1 + l1 l2) / (l1 + l2), exact (no min-sum)."""
    with np.errstate(invalid="ignore", over="ignore"):
        sign = np.sign(a) * np.sign(b)
        mag = np.minimum(np.abs(a), np.abs(b))
        corr = np.log1p(np.exp(-np.abs(a + b))) - np.log1p(np.exp(-np.abs(a - b)))
        corr = np.where(np.isnan(corr), 0.0, corr)
        out = sign * mag + corr
    return np.where(np.isnan(out), 0.0, out)


def llr_good(a, b, u):
    """LLR form of l1 l2 (u = 0) or l2 / l1 (u = 1); inf - inf resolves to 0."""
    with np.errstate(invalid="ignore"):
        out = b + (1.0 - 2.0 * u) * a
    return np.where(np.isnan(out), 0.0, out)


def _decode(llr, frozen, fvals, u_out, dec_out):
    """Returns the re-encoded (natural-order) codeword of this subtree."""
    m = llr.shape[1]
    if m == 1:
        dec_out[:, 0] = llr[:, 0]
        if frozen[0]:
            u_out[:, 0] = fvals[0]
        else:
            u_out[:, 0] = llr[:, 0] < 0
        return u_out[:, :1].copy()
    h = m // 2
    top, bot = llr[:, :h], llr[:, h:]
    va = _decode(llr_bad(top, bot), frozen[:h], fvals[:h], u_out[:, :h], dec_out[:, :h])
    vb = _decode(llr_good(top, bot, va), frozen[h:], fvals[h:], u_out[:, h:], dec_out[:, h:])
    return np.concatenate([va ^ vb, vb], axis=1)


def sc_decode_batch(llr, frozen, frozen_values):
    """Successive cancellation on natural-order LLRs, one row per trial.

    Returns ``(u_hat, x_hat, decision_llrs)``; ``x_hat`` is the natural-order
    codeword estimate.
    """
    llr = np.ascontiguousarray(llr, dtype=np.float64)
    trials, n = llr.shape
    frozen = np.asarray(frozen, dtype=bool)
    fvals = np.asarray(frozen_values, dtype=np.uint8)
    u_out = np.empty((trials, n), dtype=np.uint8)
    dec_out = np.empty((trials, n), dtype=np.float64)
    x_hat = _decode(llr, frozen, fvals, u_out, dec_out)
    return u_out, x_hat.astype(np.uint8), dec_out
