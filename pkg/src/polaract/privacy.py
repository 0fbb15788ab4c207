"""Codeword-set algebra over amplitude/phase partitions and private rates.

Cells of an :class:`IndexPartition` over ``[n]``:

* ``s_in`` good for amplitude and phase: carries private bits
* ``p1``   good for amplitude only: carries the (frozen) classical part
* ``p2``   good for phase only: unused
* ``b``    good for neither: useless

Derived: ``C = p1 | s_in`` (equal to the amplitude-good set) and
``S_bad = p1 | p2 | b``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _csvio
from .evolution import (
    DEFAULT_BETA,
    IndexSelection,
    ReliabilityProfile,
    select_indices,
    threshold_cutoff_log2,
)

CELLS = ("S_in", "P1", "P2", "B")
_CODES = {name: code for code, name in enumerate(CELLS)}


def _as_mask(indices, n: int) -> np.ndarray:
    if isinstance(indices, IndexSelection):
        if indices.n != n:
            raise ValueError(f"selection over {indices.n} indices, expected {n}")
        return np.asarray(indices.mask, dtype=bool)
    arr = np.asarray(indices)
    if arr.dtype == bool:
        if arr.shape != (n,):
            raise ValueError(f"mask of shape {arr.shape}, expected ({n},)")
        return arr
    idx = np.fromiter(indices, dtype=np.int64) if not isinstance(indices, np.ndarray) else arr.astype(np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise ValueError(f"indices out of range for n={n}")
    mask = np.zeros(n, dtype=bool)
    mask[idx] = True
    return mask


@dataclass(frozen=True, eq=False)
class IndexPartition:
    """Cell label per index: 0=S_in, 1=P1, 2=P2, 3=B."""

    labels: np.ndarray

    @property
    def n(self) -> int:
        return len(self.labels)

    def _cell(self, name: str) -> frozenset:
        return frozenset(np.flatnonzero(self.labels == _CODES[name]).tolist())

    @property
    def s_in(self) -> frozenset:
        return self._cell("S_in")

    @property
    def p1(self) -> frozenset:
        return self._cell("P1")

    @property
    def p2(self) -> frozenset:
        return self._cell("P2")

    @property
    def b(self) -> frozenset:
        return self._cell("B")

    @property
    def c(self) -> frozenset:
        return self.p1 | self.s_in

    @property
    def s_bad(self) -> frozenset:
        return self.p1 | self.p2 | self.b

    def counts(self) -> dict[str, int]:
        tally = np.bincount(self.labels, minlength=4)
        return {name: int(tally[code]) for name, code in _CODES.items()}

    def fractions(self) -> dict[str, float]:
        return {name: count / self.n for name, count in self.counts().items()}


def partition(good_amp, good_phase, n: int) -> IndexPartition:
    """Split ``[n]`` by membership in the amplitude- and phase-good sets.

    Either argument may be an iterable of indices, a boolean mask or an
    :class:`~polaract.evolution.IndexSelection`.
    """
    amp = _as_mask(good_amp, n)
    phase = _as_mask(good_phase, n)
    labels = np.full(n, _CODES["B"], dtype=np.int8)
    labels[amp & phase] = _CODES["S_in"]
    labels[amp & ~phase] = _CODES["P1"]
    labels[~amp & phase] = _CODES["P2"]
    labels.setflags(write=False)
    return IndexPartition(labels)


def align_phase(phase_mask: np.ndarray, convention: str = "complement") -> np.ndarray:
    """Map a phase-subchannel good mask onto amplitude indices.

    ``complement``: phase index ``i`` sits at amplitude index ``n - 1 - i``
    (plus/minus roles swapped).  ``aligned``: identity.
    """
    mask = np.asarray(phase_mask, dtype=bool)
    if convention == "complement":
        return mask[::-1].copy()
    if convention == "aligned":
        return mask.copy()
    raise ValueError(f"unknown phase convention {convention!r}")


def subchannel_partition(profile_amp: ReliabilityProfile, profile_phase: ReliabilityProfile,
                         mode: str = "threshold", rate_amp: float | None = None,
                         rate_phase: float | None = None, beta: float | None = None,
                         convention: str = "complement") -> IndexPartition:
    """Partition built from the two subchannel reliability profiles."""
    if profile_amp.n != profile_phase.n:
        raise ValueError("amplitude and phase profiles differ in length")
    amp = select_indices(profile_amp, mode, rate=rate_amp, beta=beta)
    phase = select_indices(profile_phase, mode, rate=rate_phase, beta=beta)
    return partition(amp.mask, align_phase(phase.mask, convention), profile_amp.n)


def private_rate(p: IndexPartition, degraded: bool = True) -> float:
    """|S_in|/n for a degraded eavesdropper, max(0, (|S_in| - |B|)/n) otherwise."""
    counts = p.counts()
    if degraded:
        return counts["S_in"] / p.n
    return max(0.0, (counts["S_in"] - counts["B"]) / p.n)


def inclusion_exclusion_rate(g_amp: int, g_phase: int, n: int) -> float:
    """max(0, (|G_amp| + |G_phase|)/n - 1)."""
    if n <= 0:
        raise ValueError("n must be positive")
    for name, g in (("g_amp", g_amp), ("g_phase", g_phase)):
        if not 0 <= g <= n:
            raise ValueError(f"{name}={g} must lie in [0, {n}]")
    return max(0.0, (g_amp + g_phase) / n - 1.0)


# ---------------------------------------------------------------------------
# Polaractivation condition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PolaractivationStatus:
    c_sym: float
    c_low: float
    c_sym_star: float
    activatable: bool
    private_capable: bool
    delta_min: float
    delta_max: float

    @property
    def blocked(self) -> bool:
        return not self.private_capable

    @property
    def window_nonempty(self) -> bool:
        return self.activatable and self.delta_min <= self.delta_max

    def to_dict(self) -> dict:
        return {
            "c_sym": self.c_sym,
            "c_low": self.c_low,
            "c_sym_star": self.c_sym_star,
            "activatable": self.activatable,
            "state": "private-capable" if self.private_capable else "blocked",
            "delta_min": self.delta_min,
            "delta_max": self.delta_max,
        }


def polaractivation_check(c_sym: float, c_low: float, c_sym_star: float) -> PolaractivationStatus:
    """Evaluate whether the hidden private region can be opened.

    Blocked when ``c_sym < c_low`` (no private rate yet); activatable when
    ``c_low <= c_sym_star``.  The rate increment must fall in
    ``[max(0, c_low - c_sym), c_sym_star - c_sym]``.
    """
    if c_low < 0:
        raise ValueError(f"c_low must be non-negative, got {c_low}")
    if not 0 <= c_sym <= c_sym_star:
        raise ValueError(f"need 0 <= c_sym <= c_sym_star, got c_sym={c_sym}, c_sym_star={c_sym_star}")
    return PolaractivationStatus(
        c_sym=c_sym,
        c_low=c_low,
        c_sym_star=c_sym_star,
        activatable=c_low <= c_sym_star,
        private_capable=c_sym >= c_low,
        delta_min=max(0.0, c_low - c_sym),
        delta_max=c_sym_star - c_sym,
    )


# ---------------------------------------------------------------------------
# Wiretap sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class WiretapSets:
    """Four cells over [n] from Bob-good and Eve-bad membership."""

    bob_good: np.ndarray
    eve_bad: np.ndarray

    @property
    def n(self) -> int:
        return len(self.bob_good)

    @property
    def s_secret(self) -> np.ndarray:
        return np.flatnonzero(self.bob_good & self.eve_bad)

    @property
    def s_bob_only(self) -> np.ndarray:
        """Good for Bob, but Eve is not confused: leaks."""
        return np.flatnonzero(self.bob_good & ~self.eve_bad)

    @property
    def s_eve_risky(self) -> np.ndarray:
        """Bad for Bob and readable by Eve."""
        return np.flatnonzero(~self.bob_good & ~self.eve_bad)

    @property
    def s_useless(self) -> np.ndarray:
        return np.flatnonzero(~self.bob_good & self.eve_bad)

    @property
    def secret_rate(self) -> float:
        return float(np.count_nonzero(self.bob_good & self.eve_bad)) / self.n


def wiretap_sets(profile_bob: ReliabilityProfile, profile_eve: ReliabilityProfile,
                 beta: float = DEFAULT_BETA) -> WiretapSets:
    """Bob-good: z < 2**(-n**beta).  Eve-bad: z >= 1 - 2**(-n**beta)."""
    if profile_bob.n != profile_eve.n:
        raise ValueError(f"profile sizes differ: {profile_bob.n} vs {profile_eve.n}")
    if not 0.0 < beta < 0.5:
        raise ValueError(f"beta must lie in (0, 0.5), got {beta}")
    log_cut = threshold_cutoff_log2(profile_bob.n, beta)
    with np.errstate(divide="ignore"):
        bob_good = np.log2(profile_bob.z) < log_cut
        # 1 - z >= 1 - (1 - cut) compared without cancellation
        eve_bad = np.log2(np.clip(1.0 - profile_eve.z, 0.0, None)) <= log_cut
    return WiretapSets(bob_good, eve_bad)


def degradedness(p_bob: float, p_eve: float) -> str:
    """``"degraded"`` when Eve's error probability is at least Bob's."""
    for name, p in (("p_bob", p_bob), ("p_eve", p_eve)):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1], got {p}")
    return "degraded" if p_eve >= p_bob else "non-degraded"


def partition_csv(p: IndexPartition, meta: dict | None = None) -> str:
    head = {"kind": "partition", "n": p.n}
    head.update(meta or {})
    rows = ((i, CELLS[c]) for i, c in enumerate(p.labels.tolist()))
    return _csvio.render_csv(head, ["index", "cell"], rows)


def partition_summary(p: IndexPartition) -> dict:
    counts = p.counts()
    return {
        "n": p.n,
        "counts": counts,
        "C": counts["P1"] + counts["S_in"],
        "S_bad": p.n - counts["S_in"],
        "private_rate_degraded": private_rate(p, True),
        "private_rate_non_degraded": private_rate(p, False),
    }
