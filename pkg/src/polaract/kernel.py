"""Polar transform, bit reversal and the partial-distance exponent.

Conventions: codewords are column vectors, ``A = G_n M`` over GF(2), with
``G_2 = [[1, 1], [0, 1]]`` and

    G_n = (I_{n/2} (x) G_2) R_n (I_2 (x) G_{n/2})

where ``R_n`` is the perfect shuffle, ``(R_n x)[2j] = x[j]`` and
``(R_n x)[2j+1] = x[n/2 + j]``.  The recursion closes to
``G_n = B_n G_2^{(x)k}`` with ``B_n`` the bit-reversal permutation, which is
how :func:`polar_encode` evaluates it (butterfly, then bit reversal).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from . import _kernels

MAX_MATRIX_LEVEL = 12
MAX_COSET_LEVEL = 8
_BRUTE_FORCE_MAX_ROWS = 22

G2 = np.array([[1, 1], [0, 1]], dtype=np.uint8)


class SizeCapError(ValueError):
    """Requested size exceeds a hard materialization cap."""


def _check_level(k: int, cap: int, minimum: int = 0) -> int:
    if int(k) != k or k < minimum:
        raise ValueError(f"level k must be an integer >= {minimum}, got {k!r}")
    if k > cap:
        raise SizeCapError(f"level k={k} exceeds the cap of {cap}")
    return int(k)


def bit_reversal(index: int, k: int) -> int:
    """Reverse the k-bit binary expansion of ``index``."""
    if not 0 <= index < (1 << k):
        raise ValueError(f"index {index} out of range for k={k}")
    out = 0
    for _ in range(k):
        out = (out << 1) | (index & 1)
        index >>= 1
    return out


@lru_cache(maxsize=None)
def _bit_reversal_permutation(k: int) -> np.ndarray:
    perm = np.zeros(1, dtype=np.int64)
    for _ in range(k):
        perm = np.concatenate([2 * perm, 2 * perm + 1])
    perm.setflags(write=False)
    return perm


def bit_reversal_permutation(k: int) -> np.ndarray:
    """Array ``perm`` with ``perm[i] == bit_reversal(i, k)``."""
    return _bit_reversal_permutation(int(k))


def perfect_shuffle(n: int) -> np.ndarray:
    """Permutation matrix R_n interleaving the two halves of a vector."""
    half = n // 2
    r = np.zeros((n, n), dtype=np.uint8)
    r[2 * np.arange(half), np.arange(half)] = 1
    r[2 * np.arange(half) + 1, half + np.arange(half)] = 1
    return r


def generator_matrix(k: int) -> np.ndarray:
    """G_n for n = 2**k, built with the (I (x) G_2) R (I (x) G) recursion.

    The products are evaluated as row operations rather than dense matrix
    multiplications, so k up to 12 stays cheap.
    """
    k = _check_level(k, MAX_MATRIX_LEVEL, minimum=1)
    g = G2.copy()
    for level in range(2, k + 1):
        n = 1 << level
        half = n // 2
        block = np.zeros((n, n), dtype=np.uint8)  # I_2 (x) G_{n/2}
        block[:half, :half] = g
        block[half:, half:] = g
        shuffled = np.empty_like(block)  # R_n @ block
        shuffled[0::2] = block[:half]
        shuffled[1::2] = block[half:]
        g = shuffled  # (I_{n/2} (x) G_2) @ shuffled
        g[0::2] ^= g[1::2]
    return g


def polar_encode(message, k: int) -> np.ndarray:
    """Return ``G_n @ message`` over GF(2) via the XOR butterfly."""
    k = _check_level(k, 30)
    bits = np.ascontiguousarray(message, dtype=np.uint8)
    if bits.shape != (1 << k,):
        raise ValueError(f"message length {bits.shape} does not match n = 2**{k}")
    if np.any(bits > 1):
        raise ValueError("message entries must be bits")
    work = bits.copy()
    _kernels.polar_transform(work)
    return work[bit_reversal_permutation(k)]


def polar_encode_batch(messages: np.ndarray, k: int) -> np.ndarray:
    """Row-wise :func:`polar_encode` for a (trials, n) bit array."""
    work = np.array(messages, dtype=np.uint8, order="C", copy=True)
    if work.ndim != 2 or work.shape[1] != 1 << k:
        raise ValueError(f"expected shape (trials, {1 << k}), got {work.shape}")
    _kernels.polar_transform(work)
    return work[:, bit_reversal_permutation(k)]


def butterfly_xor_count(k: int) -> int:
    """Number of XORs the butterfly performs on one length-2**k block."""
    work = np.zeros(1 << k, dtype=np.uint8)
    return _kernels.polar_transform(work)


# ---------------------------------------------------------------------------
# Partial distances
# ---------------------------------------------------------------------------


def _row_ints(g: np.ndarray) -> list[int]:
    """Rows as Python ints, coordinate j stored at bit j."""
    weights = 1 << np.arange(g.shape[1], dtype=object)
    return [int(np.dot(row.astype(object), weights)) for row in g]


def _coset_min_brute(leader: int, others: list[int]) -> int:
    if len(others) > _BRUTE_FORCE_MAX_ROWS:
        raise SizeCapError(f"coset of dimension {len(others)} is too large to enumerate")
    best = leader.bit_count()
    span = [0]
    for row in others:
        span += [v ^ row for v in span]
    for v in span:
        w = (leader ^ v).bit_count()
        if w < best:
            best = w
    return best


def _coset_min(leader: int, others: list[int], length: int) -> int:
    """Exact minimum weight of ``leader + span(others)``.

    Small cosets are enumerated.  Larger ones are split into halves
    (left | right): when every row is either doubled (L == R) or right-only
    (L == 0) the vector reads (a | a + b), whose weight wt(a) + wt(a + b) is
    bounded below by the coset minimum of the leader's component.  The bound
    is attained, so the recursion is exact whenever its containment
    condition is met; otherwise it falls back to enumeration.
    """
    if len(others) <= 16 or length == 1:
        return _coset_min_brute(leader, others)
    half = length // 2
    mask = (1 << half) - 1

    def split(v):
        return v & mask, v >> half

    lead_l, lead_r = split(leader)
    doubled, right_only = [], []
    for row in others:
        lo, hi = split(row)
        if lo == hi:
            doubled.append(lo)
        elif lo == 0:
            right_only.append(hi)
        else:
            return _coset_min_brute(leader, others)

    if lead_l == 0:
        # wt(a) + wt(a + b) >= wt(b), equality at a = 0
        return _coset_min(lead_r, right_only, half)
    if lead_l == lead_r:
        # a + b stays in lead + span(doubled) when right-only halves lie in it
        doubled_set = set(doubled)
        if all(h in doubled_set for h in right_only):
            return 2 * _coset_min(lead_l, doubled, half)
    return _coset_min_brute(leader, others)


def partial_distance_order(k: int) -> list[int]:
    """Row indices of G_n sorted by (row weight, index)."""
    g = generator_matrix(k) if k >= 1 else np.ones((1, 1), dtype=np.uint8)
    weights = g.sum(axis=1)
    return sorted(range(len(weights)), key=lambda i: (int(weights[i]), i))


def partial_distances(k: int, method: str = "auto") -> np.ndarray:
    """Partial distances d_i of the rows of G_n.

    Rows are processed in ascending weight (ties by index); ``d_i`` is the
    distance from row ``g_i`` to the span of every row processed after it.
    The returned array is in processing order.  ``method="brute"`` forces
    full enumeration of every coset.
    """
    k = _check_level(k, MAX_COSET_LEVEL, minimum=1)
    g = generator_matrix(k)
    rows = _row_ints(g)
    order = partial_distance_order(k)
    n = 1 << k
    out = np.empty(n, dtype=np.int64)
    for pos, i in enumerate(order):
        later = [rows[j] for j in order[pos + 1:]]
        if method == "brute":
            out[pos] = _coset_min_brute(rows[i], later)
        elif method == "auto":
            out[pos] = _coset_min(rows[i], later, n)
        else:
            raise ValueError(f"unknown method {method!r}")
    return out


def polarization_exponent(k: int) -> float:
    """(1/n) sum_i log_n d_i over the partial distances of G_n."""
    d = partial_distances(k)
    n = 1 << k
    return float(np.sum(np.log2(d)) / (n * k))

