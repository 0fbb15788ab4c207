"""Channel models, capacity formulas and qubit fidelity utilities.

Every channel here is a symmetric binary-input channel.  The quantum ones
(:class:`PauliSub`, :class:`CQBinary`) are handled through their induced
classical description: a pair of output states, or the pair of
independent bit-flip subchannels a Pauli channel splits into.

Naming note: :class:`PauliSub` keeps the convention in which ``p_z`` is the
*amplitude* error probability and ``p_x`` the *phase* error probability.
This is the reverse of the usual X/Z reading; use :func:`pauli_to_sub` to
convert a general ``(p_x, p_y, p_z)`` Pauli channel.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.optimize import brentq

TOL = 1e-12

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class DomainError(ValueError):
    """Raised when an argument lies outside the domain of a formula."""


def _check_probability(name: str, p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0 or np.isnan(p):
        raise DomainError(f"{name} must lie in [0, 1], got {p!r}")
    return p


def binary_entropy(p: float) -> float:
    """h2(p) in bits, with 0 log 0 = 0."""
    p = _check_probability("p", p)
    if p in (0.0, 1.0):
        return 0.0
    return float(-p * np.log2(p) - (1 - p) * np.log2(1 - p))


def _shannon_bits(probs) -> float:
    probs = np.asarray(probs, dtype=float)
    probs = probs[probs > 0]
    return float(-np.sum(probs * np.log2(probs)))


# ---------------------------------------------------------------------------
# Density matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DensityMatrix2:
    """A validated 2x2 density matrix (Hermitian, PSD, unit trace)."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.shape != (2, 2):
            raise DomainError(f"expected a 2x2 matrix, got shape {m.shape}")
        if not np.allclose(m, m.conj().T, atol=TOL, rtol=0):
            raise DomainError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1) > TOL:
            raise DomainError(f"density matrix trace is {np.trace(m).real}, not 1")
        m = (m + m.conj().T) / 2
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)
        if self.eigenvalues()[0] < -TOL:
            raise DomainError("density matrix is not positive semidefinite")

    @classmethod
    def pure(cls, ket) -> "DensityMatrix2":
        v = np.asarray(ket, dtype=complex).reshape(2)
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()))

    @classmethod
    def maximally_mixed(cls) -> "DensityMatrix2":
        return cls(np.eye(2) / 2)

    @classmethod
    def from_bloch(cls, r) -> "DensityMatrix2":
        x, y, z = r
        return cls((np.eye(2) + x * PAULI_X + y * PAULI_Y + z * PAULI_Z) / 2)

    def eigenvalues(self) -> np.ndarray:
        """Ascending eigenvalues from the trace/determinant closed form."""
        a, b = self.entries[0, 0].real, self.entries[1, 1].real
        off = abs(self.entries[0, 1])
        half_gap = np.hypot((a - b) / 2, off)
        mid = (a + b) / 2
        return np.array([mid - half_gap, mid + half_gap])

    def __eq__(self, other):
        if not isinstance(other, DensityMatrix2):
            return NotImplemented
        return bool(np.allclose(self.entries, other.entries, atol=TOL, rtol=0))

    def __hash__(self):
        return hash(tuple(np.round(self.entries, 12).ravel()))


def _as_matrix(rho) -> np.ndarray:
    if isinstance(rho, DensityMatrix2):
        return rho.entries
    return np.asarray(rho, dtype=complex)


def von_neumann_entropy(rho: DensityMatrix2) -> float:
    """S(rho) in bits."""
    lam = np.clip(rho.eigenvalues(), 0.0, 1.0)
    return _shannon_bits(lam)


def holevo_symmetric(sigma0: DensityMatrix2, sigma1: DensityMatrix2) -> float:
    """Uniform-input Holevo quantity of the output pair, in bits.

    S((s0 + s1)/2) - S(s0)/2 - S(s1)/2.
    """
    avg = DensityMatrix2((sigma0.entries + sigma1.entries) / 2)
    chi = von_neumann_entropy(avg) - von_neumann_entropy(sigma0) / 2 - von_neumann_entropy(sigma1) / 2
    return float(min(max(chi, 0.0), 1.0))


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    lam, vec = np.linalg.eigh(m)
    return (vec * np.sqrt(np.clip(lam, 0, None))) @ vec.conj().T


def fidelity(rho, sigma) -> float:
    """Uhlmann fidelity ``[Tr sqrt(sqrt(sigma) rho sqrt(sigma))]**2``.

    Accepts :class:`DensityMatrix2` or square arrays of any matching size.
    Qubit inputs use the closed form ``Tr(rho sigma) + 2 sqrt(det rho det sigma)``;
    larger inputs go through an eigendecomposition.
    """
    a, b = _as_matrix(rho), _as_matrix(sigma)
    if a.shape != b.shape:
        raise DomainError(f"shape mismatch {a.shape} vs {b.shape}")
    if a.shape == (2, 2):
        det_a = max(np.linalg.det(a).real, 0.0)
        det_b = max(np.linalg.det(b).real, 0.0)
        f = np.trace(a @ b).real + 2 * np.sqrt(det_a * det_b)
    else:
        sb = _psd_sqrt(b)
        lam = np.linalg.eigvalsh(sb @ a @ sb)
        f = np.sum(np.sqrt(np.clip(lam, 0, None))) ** 2
    return float(min(max(f, 0.0), 1.0))


def pauli_apply(p_x: float, p_y: float, p_z: float, rho: DensityMatrix2) -> DensityMatrix2:
    """Apply the Pauli channel with flip probabilities ``p_x, p_y, p_z``."""
    for name, p in (("p_x", p_x), ("p_y", p_y), ("p_z", p_z)):
        _check_probability(name, p)
    p_id = 1.0 - p_x - p_y - p_z
    if p_id < -TOL:
        raise DomainError(f"p_x + p_y + p_z = {1 - p_id} exceeds 1")
    m = rho.entries
    out = max(p_id, 0.0) * m
    for p, op in ((p_x, PAULI_X), (p_y, PAULI_Y), (p_z, PAULI_Z)):
        out = out + p * (op @ m @ op)
    return DensityMatrix2(out)


# ---------------------------------------------------------------------------
# Channel models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Erasure:
    """Quantum erasure channel on a ``d``-dimensional input."""

    p: float
    d: int = 2

    def __post_init__(self):
        _check_probability("p", self.p)
        if int(self.d) != self.d or self.d < 2:
            raise DomainError(f"input dimension d must be an integer >= 2, got {self.d!r}")


@dataclass(frozen=True)
class BEC:
    p: float

    def __post_init__(self):
        _check_probability("p", self.p)


@dataclass(frozen=True)
class BSC:
    p: float

    def __post_init__(self):
        _check_probability("p", self.p)


@dataclass(frozen=True)
class PauliSub:
    """The amplitude/phase pair of bit-flip subchannels of a Pauli channel.

    ``p_z`` is the amplitude error probability, ``p_x`` the phase error
    probability.  ``subchannel`` picks which one single-channel operations
    (seed, capacity) refer to.
    """

    p_z: float
    p_x: float = 0.0
    subchannel: str = "amplitude"

    def __post_init__(self):
        _check_probability("p_z", self.p_z)
        _check_probability("p_x", self.p_x)
        if self.subchannel not in ("amplitude", "phase"):
            raise DomainError(f"subchannel must be 'amplitude' or 'phase', got {self.subchannel!r}")

    @property
    def flip_probability(self) -> float:
        return self.p_z if self.subchannel == "amplitude" else self.p_x

    def select(self, subchannel: str) -> "PauliSub":
        return PauliSub(self.p_z, self.p_x, subchannel)


@dataclass(frozen=True)
class CQBinary:
    """Classical-quantum channel sending bit ``a`` to ``sigma_a``."""

    sigma0: DensityMatrix2
    sigma1: DensityMatrix2


ChannelModel = Union[Erasure, BEC, BSC, PauliSub, CQBinary]


def pauli_to_sub(p_x: float, p_y: float, p_z: float) -> PauliSub:
    """Split a general Pauli channel into its amplitude/phase subchannels.

    A Y error flips both, so amplitude = p_x + p_y and phase = p_z + p_y.
    """
    for name, p in (("p_x", p_x), ("p_y", p_y), ("p_z", p_z)):
        _check_probability(name, p)
    if p_x + p_y + p_z > 1 + TOL:
        raise DomainError("p_x + p_y + p_z exceeds 1")
    return PauliSub(p_z=min(p_x + p_y, 1.0), p_x=min(p_z + p_y, 1.0))


# ---------------------------------------------------------------------------
# Capacities and reliability
# ---------------------------------------------------------------------------


def erasure_capacities(p: float, d: int = 2) -> tuple[float, float]:
    """Symmetric classical and private capacity of the erasure channel.

    Returns ``((1 - p) log2 d, max(0, 1 - 2p) log2 d)``.
    """
    p = _check_probability("p", p)
    if int(d) != d or d < 2:
        raise DomainError(f"input dimension d must be an integer >= 2, got {d!r}")
    log_d = float(np.log2(d))
    return (1.0 - p) * log_d, max(0.0, 1.0 - 2.0 * p) * log_d


def bhattacharyya_flip(p: float) -> float:
    """2 sqrt(p (1 - p)): Bhattacharyya parameter of a bit flip with probability p."""
    p = _check_probability("p", p)
    return float(2.0 * np.sqrt(p * (1.0 - p)))


def pauli_subchannel_fidelities(p_z: float, p_x: float) -> tuple[float, float]:
    """Fidelity parameters (F_z, F_x) of the amplitude and phase subchannels."""
    return bhattacharyya_flip(p_z), bhattacharyya_flip(p_x)


def channel_reliability_seed(model: ChannelModel) -> float:
    """Bhattacharyya (or root-fidelity) parameter of the base channel."""
    if isinstance(model, (BEC, Erasure)):
        return float(model.p)
    if isinstance(model, BSC):
        return bhattacharyya_flip(model.p)
    if isinstance(model, PauliSub):
        return bhattacharyya_flip(model.flip_probability)
    if isinstance(model, CQBinary):
        return float(np.sqrt(fidelity(model.sigma0, model.sigma1)))
    raise TypeError(f"unsupported channel model {model!r}")


def channel_capacity(model: ChannelModel) -> float:
    """Symmetric (uniform-input) capacity in bits per use."""
    if isinstance(model, Erasure):
        return erasure_capacities(model.p, model.d)[0]
    if isinstance(model, BEC):
        return 1.0 - model.p
    if isinstance(model, BSC):
        return 1.0 - binary_entropy(model.p)
    if isinstance(model, PauliSub):
        return 1.0 - binary_entropy(model.flip_probability)
    if isinstance(model, CQBinary):
        return holevo_symmetric(model.sigma0, model.sigma1)
    raise TypeError(f"unsupported channel model {model!r}")


@dataclass(frozen=True)
class CapacityBounds:
    lower: float
    upper: float


def csym_bounds(f_z: float, f_x: float) -> CapacityBounds:
    """Bounds on the symmetric classical capacity from the two fidelities."""
    f_z = _check_probability("F_z", f_z)
    f_x = _check_probability("F_x", f_x)
    lower = np.log2(2.0 / (1.0 + f_z)) + np.log2(2.0 / (1.0 + f_x))
    upper = np.sqrt(1.0 + f_z**2) + np.sqrt(1.0 + f_x**2)
    return CapacityBounds(float(lower), float(upper))


def solve_fz_for_lower(target: float, f_x: float = 0.0, xtol: float = 1e-14) -> float:
    """F_z at which the lower capacity bound equals ``target`` for fixed F_x.

    Root-finds on [0, 1]; the lower bound is strictly decreasing in F_z.
    """
    f_x = _check_probability("F_x", f_x)
    hi, lo = csym_bounds(0.0, f_x).lower, csym_bounds(1.0, f_x).lower
    if not lo <= target <= hi:
        raise DomainError(f"target {target} outside attainable range [{lo}, {hi}]")
    return float(brentq(lambda f: csym_bounds(f, f_x).lower - target, 0.0, 1.0, xtol=xtol))


def frontier_point(f_z: float, f_x: float) -> tuple[float, float]:
    """Point on the line F_z + F_x = 1 along the ray through (f_z, f_x)."""
    s = f_z + f_x
    if s <= 0:
        raise DomainError("the ray through the origin has no direction")
    return f_z / s, f_x / s


def default_c_low(f_z: float, f_x: float) -> float:
    """Heuristic critical rate: the lower bound at the F_z + F_x = 1 frontier.

    The bound along the ray through (f_z, f_x) is evaluated where the ray
    crosses F_z + F_x = 1.  This is a heuristic, not a derived quantity.
    """
    return csym_bounds(*frontier_point(f_z, f_x)).lower
