"""Experiment sweeps producing schema-versioned CSV files and a summary JSON.

Each experiment writes ``<out>/<experiment>.csv`` (one row per grid point),
optional auxiliary CSVs, and ``<out>/<experiment>_summary.json``.  Nothing
time-dependent is written, so identical configs give identical bytes.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from . import _csvio
from .channels import BEC, csym_bounds, default_c_low, erasure_capacities
from .decoder import MAX_DECODE_LEVEL, PolarCode, SimReport, simulate_bler
from .evolution import DEFAULT_BETA, MAX_EVOLVE_LEVEL, evolve, select_indices
from .privacy import (
    CELLS,
    degradedness,
    inclusion_exclusion_rate,
    private_rate,
    subchannel_partition,
    wiretap_sets,
)

EXPERIMENTS = ("erasure", "polarize", "privacy", "eve", "fidelity-region", "bler")
STOCHASTIC = frozenset({"bler"})

EVOLVE_K_DEFAULT_CAP = 20
DECODE_K_DEFAULT_CAP = 12
DECODE_K_LARGE_CAP = 16
POLARIZE_EPS = 1e-9


class ConfigError(ValueError):
    """Invalid or incomplete sweep configuration."""


def _grid(start: float, stop: float, step: float) -> tuple[float, ...]:
    count = int(round((stop - start) / step)) + 1
    return tuple(round(start + i * step, 12) for i in range(count))


_DEFAULTS = {
    "erasure": {"p": _grid(0.0, 1.0, 0.01), "d": 2},
    "polarize": {"p": (0.5,), "k": tuple(range(1, 21)), "bins": 20},
    "privacy": {"p_amp": 0.2, "p_phase": 0.2, "k": tuple(range(1, 21)), "mode": "threshold",
                "convention": "complement", "index_max_k": 10},
    "eve": {"p_bob": 0.1, "p_eve": _grid(0.0, 1.0, 0.05), "k": (16,)},
    "fidelity-region": {"f_step": 0.05},
    "bler": {"p": (0.3,), "k": (6, 8, 10, 12), "rate": (0.45,), "trials": 10_000},
}


@dataclass(frozen=True)
class SweepConfig:
    experiment: str
    out: str = "results"
    seed: int | None = None
    p: tuple | None = None
    k: tuple | None = None
    beta: float = DEFAULT_BETA
    d: int | None = None
    rate: tuple | None = None
    trials: int | None = None
    mode: str | None = None
    convention: str | None = None
    p_amp: float | None = None
    p_phase: float | None = None
    p_bob: float | None = None
    p_eve: tuple | None = None
    f_step: float | None = None
    bins: int | None = None
    index_max_k: int | None = None
    workers: int = 1
    allow_large: bool = False

    @classmethod
    def from_mapping(cls, data: dict) -> "SweepConfig":
        known = {f.name for f in fields(cls)}
        clean = {}
        for key, value in data.items():
            name = key.replace("-", "_")
            if name not in known:
                raise ConfigError(f"unknown config key {key!r}")
            if isinstance(value, list):
                value = tuple(value)
            clean[name] = value
        if "experiment" not in clean:
            raise ConfigError("config needs an 'experiment'")
        return cls(**clean)

    def resolved(self) -> "SweepConfig":
        """Fill per-experiment defaults and validate."""
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; choose from {', '.join(EXPERIMENTS)}")
        filled = {name: value for name, value in _DEFAULTS[self.experiment].items()
                  if getattr(self, name) is None}
        cfg = replace(self, **filled)
        for name in ("p", "k", "rate", "p_eve"):
            value = getattr(cfg, name)
            if value is not None and not isinstance(value, tuple):
                cfg = replace(cfg, **{name: (value,)})
        cfg._validate()
        return cfg

    def _validate(self):
        for name in ("p", "k", "rate", "p_eve"):
            value = getattr(self, name)
            if value is not None and len(value) == 0:
                raise ConfigError(f"grid {name!r} is empty")
        for name in ("p", "p_eve", "rate"):
            for v in getattr(self, name) or ():
                if not 0.0 <= float(v) <= 1.0:
                    raise ConfigError(f"{name} value {v} outside [0, 1]")
        for name in ("p_amp", "p_phase", "p_bob"):
            v = getattr(self, name)
            if v is not None and not 0.0 <= float(v) <= 1.0:
                raise ConfigError(f"{name}={v} outside [0, 1]")
        if not 0.0 < self.beta < 0.5:
            raise ConfigError(f"beta must lie in (0, 0.5), got {self.beta}")
        if self.k is not None:
            if any(int(v) != v or v < 0 for v in self.k):
                raise ConfigError(f"k values must be non-negative integers, got {self.k}")
            decoding = self.experiment == "bler"
            if decoding:
                cap = DECODE_K_LARGE_CAP if self.allow_large else DECODE_K_DEFAULT_CAP
            else:
                cap = MAX_EVOLVE_LEVEL if self.allow_large else EVOLVE_K_DEFAULT_CAP
            if max(self.k) > cap:
                hint = "" if self.allow_large else " (pass --allow-large to raise it)"
                raise ConfigError(f"k={max(self.k)} exceeds the cap {cap} for {self.experiment}{hint}")
        if self.experiment in STOCHASTIC:
            if self.seed is None:
                raise ConfigError(f"experiment {self.experiment!r} is stochastic and needs --seed")
        if self.seed is not None and not 0 <= int(self.seed) < 2**64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.trials is not None and self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.d is not None and (int(self.d) != self.d or self.d < 2):
            raise ConfigError(f"d must be an integer >= 2, got {self.d}")
        if self.f_step is not None and not 0.0 < self.f_step <= 1.0:
            raise ConfigError(f"f_step must lie in (0, 1], got {self.f_step}")
        if self.mode is not None and self.mode not in ("threshold", "rate"):
            raise ConfigError(f"mode must be 'threshold' or 'rate', got {self.mode!r}")
        if self.convention is not None and self.convention not in ("complement", "aligned"):
            raise ConfigError(f"convention must be 'complement' or 'aligned', got {self.convention!r}")

    def to_dict(self) -> dict:
        d = asdict(self)
        return {key: list(v) if isinstance(v, tuple) else v for key, v in d.items() if v is not None}


@dataclass
class SweepResult:
    experiment: str
    files: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)


def _meta(cfg: SweepConfig, **extra) -> dict:
    meta = {"experiment": cfg.experiment}
    if cfg.seed is not None:
        meta["seed"] = int(cfg.seed)
    meta.update(extra)
    return meta


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------


def _sweep_erasure(cfg, out):
    rows = [(p, *erasure_capacities(p, cfg.d)) for p in cfg.p]
    path = _csvio.write_csv(out / "erasure.csv", _meta(cfg, d=cfg.d, units="bits/use"),
                            ["p", "c_sym_star", "p_private"], rows)
    return [path], {"rows": len(rows)}


def _sweep_polarize(cfg, out):
    rows, hist_rows = [], []
    top = max(cfg.k)
    edges = np.linspace(0.0, 1.0, cfg.bins + 1)
    for p in cfg.p:
        for k in cfg.k:
            prof = evolve(p, k, cfg.beta)
            good = select_indices(prof).good_fraction
            below = float(np.mean(prof.z < POLARIZE_EPS))
            above = float(np.mean(prof.z > 1.0 - POLARIZE_EPS))
            rows.append((p, k, prof.n, 1.0 - p, good, below, above, prof.underflow_count))
            if k == top:
                counts, _ = np.histogram(prof.z, bins=edges)
                for lo, hi, c in zip(edges[:-1], edges[1:], counts):
                    hist_rows.append((p, k, float(lo), float(hi), int(c), int(c) / prof.n))
    meta = _meta(cfg, channel="BEC", beta=cfg.beta, eps=POLARIZE_EPS)
    cols = ["p", "k", "n", "capacity", "good_fraction", "frac_below_eps", "frac_above_1m_eps", "underflow"]
    paths = [_csvio.write_csv(out / "polarize.csv", meta, cols, rows)]
    paths.append(_csvio.write_csv(out / "polarize_hist.csv", _meta(cfg, channel="BEC", k=top, bins=cfg.bins),
                                  ["p", "k", "z_lo", "z_hi", "count", "fraction"], hist_rows))
    return paths, {"rows": len(rows), "hist_rows": len(hist_rows)}


def _sweep_privacy(cfg, out):
    rate_amp = 1.0 - cfg.p_amp
    rate_phase = 1.0 - cfg.p_phase
    asymptote = max(0.0, rate_amp + rate_phase - 1.0)
    rows, counts_by_k, paths = [], {}, []
    for k in cfg.k:
        amp = evolve(cfg.p_amp, k, cfg.beta)
        phase = evolve(cfg.p_phase, k, cfg.beta)
        part = subchannel_partition(amp, phase, cfg.mode, rate_amp, rate_phase, cfg.beta, cfg.convention)
        counts = part.counts()
        fr = part.fractions()
        counts_by_k[str(k)] = counts
        rows.append((k, part.n, fr["S_in"], fr["P1"], fr["P2"], fr["B"],
                     private_rate(part, True), private_rate(part, False), asymptote))
        if k <= cfg.index_max_k:
            z_phase = phase.z[::-1] if cfg.convention == "complement" else phase.z
            onehot = [(part.labels == c).astype(int) for c in range(len(CELLS))]
            idx_rows = zip(range(part.n), amp.z.tolist(), z_phase.tolist(), *(o.tolist() for o in onehot))
            paths.append(_csvio.write_csv(
                out / f"privacy_index_k{k}.csv",
                _meta(cfg, k=k, mode=cfg.mode, convention=cfg.convention, beta=cfg.beta),
                ["index", "z_amp", "z_phase_aligned", *CELLS], idx_rows))
    meta = _meta(cfg, p_amp=cfg.p_amp, p_phase=cfg.p_phase, mode=cfg.mode, convention=cfg.convention,
                 beta=cfg.beta, units="fraction_of_n")
    cols = ["k", "n", "S_in", "P1", "P2", "B", "private_rate_degraded", "private_rate_non_degraded",
            "inclusion_exclusion_asymptote"]
    paths.insert(0, _csvio.write_csv(out / "privacy.csv", meta, cols, rows))
    return paths, {"rows": len(rows), "counts": counts_by_k, "asymptote": asymptote,
                   "inclusion_exclusion_rate": inclusion_exclusion_rate(
                       int(np.floor(rate_amp * 2**max(cfg.k))), int(np.floor(rate_phase * 2**max(cfg.k))),
                       2**max(cfg.k))}


def _sweep_eve(cfg, out):
    rows = []
    for k in cfg.k:
        bob = evolve(cfg.p_bob, k, cfg.beta)
        bob_good = select_indices(bob).good_fraction
        for p_eve in cfg.p_eve:
            sets = wiretap_sets(bob, evolve(p_eve, k, cfg.beta), cfg.beta)
            n = sets.n
            secret = sets.secret_rate
            risky = len(sets.s_eve_risky) / n
            regime = degradedness(cfg.p_bob, p_eve)
            rate = secret if regime == "degraded" else max(0.0, secret - risky)
            eve_valuable = 1.0 - float(np.mean(sets.eve_bad))
            rows.append((k, cfg.p_bob, p_eve, regime, bob_good, eve_valuable, secret,
                         len(sets.s_bob_only) / n, risky, len(sets.s_useless) / n, rate,
                         max(0.0, p_eve - cfg.p_bob)))
    cols = ["k", "p_bob", "p_eve", "regime", "bob_good_fraction", "eve_valuable_fraction", "secret_fraction",
            "bob_only_fraction", "eve_risky_fraction", "useless_fraction", "private_rate",
            "capacity_difference"]
    path = _csvio.write_csv(out / "eve.csv", _meta(cfg, channel="BEC", beta=cfg.beta, units="fraction_of_n"),
                            cols, rows)
    return [path], {"rows": len(rows)}


def _sweep_fidelity_region(cfg, out):
    axis = _grid(0.0, 1.0, cfg.f_step)
    rows = []
    for f_z in axis:
        for f_x in axis:
            b = csym_bounds(f_z, f_x)
            c_low = default_c_low(f_z, f_x) if f_z + f_x > 0 else b.lower
            rows.append((f_z, f_x, b.lower, b.upper, f_z + f_x < 1.0, c_low))
    path = _csvio.write_csv(out / "fidelity-region.csv", _meta(cfg, f_step=cfg.f_step, units="bits/use"),
                            ["f_z", "f_x", "lower", "upper", "sum_below_one", "frontier_lower"], rows)
    below = sum(1 for r in rows if r[4])
    return [path], {"rows": len(rows), "points_below_frontier": below}


def _sweep_bler(cfg, out):
    rows = []
    max_k = DECODE_K_LARGE_CAP if cfg.allow_large else MAX_DECODE_LEVEL
    for p in cfg.p:
        model = BEC(p)
        for rate in cfg.rate:
            for k in cfg.k:
                code = PolarCode.from_profile(evolve(p, k), rate)
                rep = simulate_bler(code, model, cfg.trials, cfg.seed, workers=cfg.workers, max_k=max_k)
                n = code.n
                scaling = n * 2.0 ** (-(n ** DEFAULT_BETA))
                rows.append((k, *rep.csv_row(), rep.sigma(), scaling))
    cols = ["k", *SimReport.CSV_COLUMNS, "sigma", "scaling_bound"]
    path = _csvio.write_csv(out / "bler.csv", _meta(cfg, channel="BEC", trials=cfg.trials), cols, rows)
    return [path], {"rows": len(rows), "block_errors": sum(r[6] for r in rows)}


_RUNNERS = {
    "erasure": _sweep_erasure,
    "polarize": _sweep_polarize,
    "privacy": _sweep_privacy,
    "eve": _sweep_eve,
    "fidelity-region": _sweep_fidelity_region,
    "bler": _sweep_bler,
}


def run_sweep(config: SweepConfig) -> SweepResult:
    """Run one experiment and write its CSVs and summary JSON under ``config.out``."""
    cfg = config.resolved()
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    paths, extra = _RUNNERS[cfg.experiment](cfg, out)
    summary = {
        "experiment": cfg.experiment,
        "schema": _csvio.SCHEMA_VERSION,
        "config": {key: v for key, v in cfg.to_dict().items() if key != "out"},
        "files": [p.name for p in paths],
    }
    summary.update(extra)
    summary_path = _csvio.write_json(out / f"{cfg.experiment}_summary.json", summary)
    return SweepResult(cfg.experiment, [*paths, summary_path], summary)
