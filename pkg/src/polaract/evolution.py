"""Reliability evolution across polarization levels and index selection.

``evolve`` applies ``z- = 2z - z**2`` and ``z+ = z**2`` level by level.  This
is exact for erasure channels and an upper bound on the Bhattacharyya
parameter of the synthesized channels for every other binary-input
symmetric channel.

Index convention: index ``i`` of a level-k profile follows the branch
sequence of its k-bit binary expansion, most significant bit first, with
0 the minus ("bad") branch and 1 the plus ("good") branch.  This matches
the ordering of the input bits ``M`` in :func:`polaract.kernel.polar_encode`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _csvio
from .channels import BEC, BSC, ChannelModel, channel_capacity, channel_reliability_seed
from .kernel import polar_encode_batch

DEFAULT_BETA = 0.45
MAX_EVOLVE_LEVEL = 25
UNDERFLOW = 1e-300


class MemoryBudgetError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ReliabilityProfile:
    k: int
    z: np.ndarray
    seed: float
    beta: float = DEFAULT_BETA
    underflow_count: int = 0

    @property
    def n(self) -> int:
        return 1 << self.k

    def with_beta(self, beta: float) -> "ReliabilityProfile":
        return ReliabilityProfile(self.k, self.z, self.seed, beta, self.underflow_count)

    def complemented(self) -> "ReliabilityProfile":
        """Profile re-indexed by bitwise complement (``i -> n - 1 - i``)."""
        z = self.z[::-1].copy()
        z.setflags(write=False)
        return ReliabilityProfile(self.k, z, self.seed, self.beta, self.underflow_count)


@dataclass(frozen=True, eq=False)
class IndexSelection:
    mask: np.ndarray = field(repr=False)
    mode: str

    @property
    def n(self) -> int:
        return len(self.mask)

    @property
    def good(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    @property
    def bad(self) -> np.ndarray:
        return np.flatnonzero(~self.mask)

    @property
    def good_fraction(self) -> float:
        return float(np.count_nonzero(self.mask)) / self.n


def evolve(seed: float, k: int, beta: float = DEFAULT_BETA) -> ReliabilityProfile:
    """Reliability profile of the 2**k synthesized channels of a base channel."""
    seed = float(seed)
    if not 0.0 <= seed <= 1.0:
        raise ValueError(f"seed must lie in [0, 1], got {seed}")
    if int(k) != k or k < 0:
        raise ValueError(f"k must be a non-negative integer, got {k!r}")
    if k > MAX_EVOLVE_LEVEL:
        raise MemoryBudgetError(f"k={k} exceeds the supported maximum {MAX_EVOLVE_LEVEL}")
    z = np.array([seed])
    for _ in range(int(k)):
        nxt = np.empty(2 * z.size)
        sq = z * z
        sq[sq < UNDERFLOW] = 0.0
        nxt[0::2] = 2.0 * z - sq
        nxt[1::2] = sq
        z = nxt
    underflow = int(np.count_nonzero(z == 0.0)) if seed > 0 else 0
    z.setflags(write=False)
    return ReliabilityProfile(int(k), z, seed, float(beta), underflow)


def threshold_cutoff_log2(n: int, beta: float) -> float:
    """log2 of the good-channel cutoff 2**(-n**beta)."""
    return -float(n) ** beta


def select_indices(profile: ReliabilityProfile, mode: str = "threshold", rate: float | None = None,
                   beta: float | None = None) -> IndexSelection:
    """Split indices into good and bad.

    ``threshold``: good iff ``z_i < 2**(-n**beta)``, compared in the log
    domain so cutoffs below the float range still work (z == 0 is good).
    ``rate``: the ``floor(rate * n)`` smallest z, ties to the lower index.
    """
    n = profile.n
    if mode == "threshold":
        beta = profile.beta if beta is None else beta
        if not 0.0 < beta < 0.5:
            raise ValueError(f"beta must lie in (0, 0.5), got {beta}")
        with np.errstate(divide="ignore"):
            mask = np.log2(profile.z) < threshold_cutoff_log2(n, beta)
    elif mode in ("rate", "rate-target"):
        if rate is None or not 0.0 <= rate <= 1.0:
            raise ValueError(f"rate must lie in [0, 1], got {rate}")
        count = int(np.floor(rate * n + 1e-12))
        mask = np.zeros(n, dtype=bool)
        mask[np.argsort(profile.z, kind="stable")[:count]] = True
        mode = "rate"
    else:
        raise ValueError(f"unknown selection mode {mode!r}")
    mask.setflags(write=False)
    return IndexSelection(mask, mode)


def profile_csv(profile: ReliabilityProfile, selection: IndexSelection | None = None) -> str:
    if selection is None:
        selection = select_indices(profile)
    meta = {"kind": "profile", "seed": profile.seed, "k": profile.k, "beta": profile.beta,
            "mode": selection.mode, "underflow": profile.underflow_count}
    rows = zip(range(profile.n), profile.z.tolist(), selection.mask.astype(int).tolist())
    return _csvio.render_csv(meta, ["index", "z", "good"], rows)


def write_profile_csv(path, profile: ReliabilityProfile, selection: IndexSelection | None = None):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(profile_csv(profile, selection), encoding="utf-8")
    return path


# ---------------------------------------------------------------------------
# Exact small-n synthesis
# ---------------------------------------------------------------------------

MAX_EXACT_LEVEL = 3


@dataclass(frozen=True, eq=False)
class SynthesizedChannelTable:
    k: int
    mutual_information: np.ndarray
    bhattacharyya: np.ndarray


def _transition_matrix(model: ChannelModel) -> np.ndarray:
    """W[x, y] for the finite-output classical channels."""
    if isinstance(model, BEC):
        p = model.p
        return np.array([[1 - p, 0.0, p], [0.0, 1 - p, p]])
    if isinstance(model, BSC):
        p = model.p
        return np.array([[1 - p, p], [p, 1 - p]])
    raise TypeError(f"exact synthesis supports BEC and BSC only, got {type(model).__name__}")


def _joint_table(model: ChannelModel, k: int) -> np.ndarray:
    """P(y | u) with shape (2,)*n + (|Y|**n,), u axes in index order."""
    w = _transition_matrix(model)
    n = 1 << k
    us = ((np.arange(1 << n)[:, None] >> (n - 1 - np.arange(n))) & 1).astype(np.uint8)
    xs = polar_encode_batch(us, k)
    table = np.ones((1 << n, 1))
    for j in range(n):
        table = (table[:, :, None] * w[xs[:, j]][:, None, :]).reshape(1 << n, -1)
    return table.reshape((2,) * n + (-1,))


def synthesize_exact(model: ChannelModel, k: int) -> SynthesizedChannelTable:
    """Exact mutual information and Bhattacharyya parameter of every synthesized channel.

    Enumerates every input word and output sequence; the i-th channel sees
    the outputs and the earlier inputs ``u_0 .. u_{i-1}`` with later inputs
    uniform.
    """
    if int(k) != k or not 0 <= k <= MAX_EXACT_LEVEL:
        raise ValueError(f"k must lie in [0, {MAX_EXACT_LEVEL}], got {k!r}")
    n = 1 << k
    table = _joint_table(model, k)
    info = np.empty(n)
    bhat = np.empty(n)
    for i in range(n):
        marg = table.sum(axis=tuple(range(i + 1, n))) / 2.0 ** (n - 1)
        w0 = np.take(marg, 0, axis=i).ravel()
        w1 = np.take(marg, 1, axis=i).ravel()
        bhat[i] = np.sum(np.sqrt(w0 * w1))
        tot = w0 + w1
        mi = 0.0
        for wb in (w0, w1):
            nz = wb > 0
            mi += np.sum(wb[nz] / 2 * np.log2(2 * wb[nz] / tot[nz]))
        info[i] = mi
    return SynthesizedChannelTable(int(k), np.clip(info, 0.0, 1.0), np.clip(bhat, 0.0, 1.0))


def chain_rule_check(model: ChannelModel, tol: float = 1e-9) -> tuple[float, float, float]:
    """Mutual informations (minus, plus, base) of the first polarization step."""
    table = synthesize_exact(model, 1)
    i_minus, i_plus = (float(v) for v in table.mutual_information)
    i_base = channel_capacity(model)
    if abs(i_minus + i_plus - 2 * i_base) > tol:
        raise ArithmeticError(f"chain rule violated: {i_minus} + {i_plus} != 2 * {i_base}")
    if not (i_minus <= i_base + tol and i_base <= i_plus + tol):
        raise ArithmeticError(f"ordering violated: {i_minus} <= {i_base} <= {i_plus}")
    return i_minus, i_plus, i_base


def evolve_channel(model: ChannelModel, k: int, beta: float = DEFAULT_BETA) -> ReliabilityProfile:
    return evolve(channel_reliability_seed(model), k, beta)
