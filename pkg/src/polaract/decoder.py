"""Successive-cancellation decoding and Monte Carlo block error rates.

Likelihoods are carried internally as log-likelihood ratios
``log(N(y|0) / N(y|1))``; erasures and certain bits use exact 0 and +-inf.
Converting back to ratios saturates finite LLRs at +-700 so the
exponential cannot overflow.  A bit is decided 0 iff its ratio is
at least 1 (LLR >= 0).

Reproducibility: trial ``t`` of a run seeded with ``seed`` draws from
``numpy.random.PCG64(s_t)``, where ``s_t`` is output ``t + 1`` of the
SplitMix64 sequence started at ``seed``::

    x = (seed + (t + 1) * 0x9E3779B97F4A7C15) mod 2**64
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9 mod 2**64
    x = (x ^ (x >> 27)) * 0x94D049BB133111EB mod 2**64
    s_t = x ^ (x >> 31)

Each trial draws its message bits first (``integers(0, 2, l)``), then
``n`` uniforms for the channel noise.  Results therefore do not depend on
chunking, worker count or backend.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import _csvio, _kernels
from .channels import BEC, BSC, ChannelModel, channel_reliability_seed
from .evolution import ReliabilityProfile, evolve, select_indices
from .kernel import bit_reversal_permutation, polar_encode_batch

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
MAX_DECODE_LEVEL = 12
CHUNK_TRIALS = 512


class UnsupportedModelError(TypeError):
    pass


def splitmix64(seed: int, index: int) -> int:
    """Output ``index`` (1-based) of the SplitMix64 stream started at ``seed``."""
    x = (seed + index * _GOLDEN) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(splitmix64(seed & _MASK64, trial + 1)))


# ---------------------------------------------------------------------------
# Likelihood-ratio combiners
# ---------------------------------------------------------------------------


def _to_llr(lr):
    lr = np.asarray(lr, dtype=float)
    if np.any(lr < 0) or np.any(np.isnan(lr)):
        raise ValueError("likelihood ratios must be non-negative")
    with np.errstate(divide="ignore"):
        return np.log(lr)


def _from_llr(llr):
    out = np.exp(np.where(np.isinf(llr), llr, np.clip(llr, -700.0, 700.0)))
    return float(out) if np.ndim(out) == 0 else out


def lr_combine_bad(l1, l2):
    """(1 + l1 l2) / (l1 + l2), evaluated in the log domain."""
    return _from_llr(_kernels._fallback.llr_bad(_to_llr(l1), _to_llr(l2)))


def lr_combine_good(l1, l2, u1: int):
    """l1 l2 when u1 = 0, l2 / l1 when u1 = 1.  0*inf and inf/inf give 1."""
    if u1 not in (0, 1):
        raise ValueError(f"u1 must be a bit, got {u1!r}")
    return _from_llr(_kernels._fallback.llr_good(_to_llr(l1), _to_llr(l2), u1))


# ---------------------------------------------------------------------------
# Codes and observations
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PolarCode:
    k: int
    frozen_mask: np.ndarray
    frozen_values: np.ndarray = None

    def __post_init__(self):
        n = 1 << self.k
        mask = np.asarray(self.frozen_mask, dtype=bool)
        if mask.shape != (n,):
            raise ValueError(f"frozen mask of shape {mask.shape}, expected ({n},)")
        vals = np.zeros(n, dtype=np.uint8) if self.frozen_values is None else np.asarray(self.frozen_values, dtype=np.uint8)
        if vals.shape != (n,):
            raise ValueError(f"frozen values of shape {vals.shape}, expected ({n},)")
        vals = np.where(mask, vals, 0).astype(np.uint8)
        mask.setflags(write=False)
        vals.setflags(write=False)
        object.__setattr__(self, "frozen_mask", mask)
        object.__setattr__(self, "frozen_values", vals)

    @property
    def n(self) -> int:
        return 1 << self.k

    @property
    def info_indices(self) -> np.ndarray:
        return np.flatnonzero(~self.frozen_mask)

    @property
    def l(self) -> int:
        return int(np.count_nonzero(~self.frozen_mask))

    @property
    def rate(self) -> float:
        return self.l / self.n

    @classmethod
    def from_info_set(cls, k: int, info, frozen_values=None) -> "PolarCode":
        mask = np.ones(1 << k, dtype=bool)
        mask[np.asarray(list(info), dtype=np.int64)] = False
        return cls(k, mask, frozen_values)

    @classmethod
    def from_profile(cls, profile: ReliabilityProfile, rate: float) -> "PolarCode":
        """Information set = the floor(rate n) most reliable indices."""
        sel = select_indices(profile, "rate", rate=rate)
        return cls(profile.k, ~sel.mask)

    def place(self, messages: np.ndarray) -> np.ndarray:
        """Full input words with messages on the information set."""
        messages = np.atleast_2d(messages)
        u = np.tile(self.frozen_values, (messages.shape[0], 1))
        u[:, self.info_indices] = messages
        return u


@dataclass(frozen=True, eq=False)
class ChannelObservation:
    """Per-position likelihood ratios N(y|0)/N(y|1) in transmission order."""

    lr: np.ndarray

    @classmethod
    def from_llr(cls, llr) -> "ChannelObservation":
        return cls(np.exp(np.asarray(llr, dtype=float)))

    @property
    def llr(self) -> np.ndarray:
        return _to_llr(self.lr)


def channel_llrs(received: np.ndarray, model: ChannelModel) -> np.ndarray:
    """Channel LLRs for received symbols (BEC: 0, 1 or -1 for erasure)."""
    received = np.asarray(received)
    if isinstance(model, BEC):
        out = np.where(received == 0, np.inf, -np.inf)
        return np.where(received < 0, 0.0, out)
    if isinstance(model, BSC):
        p = model.p
        with np.errstate(divide="ignore"):
            mag = np.log(1 - p) - np.log(p) if 0 < p < 1 else (np.inf if p == 0 else -np.inf)
        return np.where(received == 0, mag, -mag).astype(float)
    raise UnsupportedModelError(f"simulation supports BEC and BSC, got {type(model).__name__}")


def transmit(codewords: np.ndarray, model: ChannelModel, uniforms: np.ndarray) -> np.ndarray:
    """Apply channel noise given per-position uniforms in [0, 1)."""
    hit = uniforms < model.p
    if isinstance(model, BEC):
        return np.where(hit, -1, codewords).astype(np.int8)
    if isinstance(model, BSC):
        return (codewords ^ hit).astype(np.int8)
    raise UnsupportedModelError(f"simulation supports BEC and BSC, got {type(model).__name__}")


# ---------------------------------------------------------------------------
# Decoding
# ---------------------------------------------------------------------------


def _decode_llr_batch(code: PolarCode, llr: np.ndarray, backend=None):
    impl = _kernels if backend is None else _kernels.get_backend(backend)
    perm = bit_reversal_permutation(code.k)
    u, x_nat, dec = impl.sc_decode_batch(llr[:, perm], code.frozen_mask, code.frozen_values)
    return u, x_nat[:, perm], dec


def sc_decode(code: PolarCode, obs: ChannelObservation, return_llrs: bool = False, backend=None):
    """Successive-cancellation decode one block.

    Returns ``(message_estimate, codeword_estimate)``; with
    ``return_llrs=True`` also the per-index decision LLRs.
    """
    llr = np.asarray(obs.llr, dtype=float)
    if llr.shape != (code.n,):
        raise ValueError(f"observation length {llr.shape} does not match n = {code.n}")
    u, x, dec = _decode_llr_batch(code, llr[None, :], backend)
    msg = u[0, code.info_indices]
    if return_llrs:
        return msg, x[0], dec[0]
    return msg, x[0]


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SimReport:
    trials: int
    block_errors: int
    bler: float
    union_bound: float
    seed: int
    n: int = 0
    rate: float = 0.0
    channel: str = ""
    p: float = 0.0
    wall_clock: float = field(default=0.0, compare=False)

    CSV_COLUMNS = ("n", "rate", "channel", "p", "trials", "errors", "bler", "union_bound", "seed")

    def csv_row(self) -> tuple:
        return (self.n, self.rate, self.channel, self.p, self.trials, self.block_errors,
                self.bler, self.union_bound, self.seed)

    def sigma(self) -> float:
        return float(np.sqrt(self.bler * (1 - self.bler) / self.trials))

    def to_dict(self, include_timing: bool = False) -> dict:
        d = asdict(self)
        if not include_timing:
            d.pop("wall_clock")
        return d

    def to_json(self, include_timing: bool = False) -> str:
        return _csvio.dumps_json(self.to_dict(include_timing))


def union_bound(code: PolarCode, profile: ReliabilityProfile) -> float:
    """Sum of reliability parameters over the information set."""
    return float(np.sum(profile.z[code.info_indices]))


def _run_chunk(code, model, seed, start, stop, backend):
    n, l = code.n, code.l
    count = stop - start
    msgs = np.empty((count, l), dtype=np.uint8)
    unif = np.empty((count, n))
    for row, t in enumerate(range(start, stop)):
        rng = trial_rng(seed, t)
        msgs[row] = rng.integers(0, 2, size=l, dtype=np.uint8)
        unif[row] = rng.random(n)
    codewords = polar_encode_batch(code.place(msgs), code.k)
    llr = channel_llrs(transmit(codewords, model, unif), model)
    u, _, _ = _decode_llr_batch(code, llr, backend)
    errs = np.any(u[:, code.info_indices] != msgs, axis=1)
    return int(np.count_nonzero(errs))


def simulate_bler(code: PolarCode, model: ChannelModel, trials: int, seed: int,
                  workers: int = 1, backend=None, chunk: int = CHUNK_TRIALS,
                  max_k: int = MAX_DECODE_LEVEL) -> SimReport:
    """Monte Carlo block error rate of ``code`` over ``model`` (BEC or BSC)."""
    if not isinstance(model, (BEC, BSC)):
        raise UnsupportedModelError(f"simulation supports BEC and BSC, got {type(model).__name__}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if code.k > max_k:
        raise ValueError(f"k={code.k} exceeds the decoding cap {max_k}")
    seed = int(seed) & _MASK64
    profile = evolve(channel_reliability_seed(model), code.k)
    start_time = time.perf_counter()
    bounds = [(s, min(s + chunk, trials)) for s in range(0, trials, chunk)]
    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(lambda b: _run_chunk(code, model, seed, b[0], b[1], backend), bounds))
    else:
        counts = [_run_chunk(code, model, seed, a, b, backend) for a, b in bounds]
    errors = sum(counts)
    return SimReport(
        trials=int(trials),
        block_errors=errors,
        bler=errors / trials,
        union_bound=union_bound(code, profile),
        seed=seed,
        n=code.n,
        rate=code.rate,
        channel=type(model).__name__,
        p=float(model.p),
        wall_clock=time.perf_counter() - start_time,
    )
