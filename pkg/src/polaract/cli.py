"""Command-line entry point: ``polaract <command> [options]``.

Exit codes: 0 success, 2 configuration error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import _csvio
from .channels import (
    BEC,
    BSC,
    DomainError,
    Erasure,
    PauliSub,
    channel_capacity,
    channel_reliability_seed,
    csym_bounds,
    default_c_low,
    erasure_capacities,
    pauli_subchannel_fidelities,
)
from .decoder import MAX_DECODE_LEVEL, PolarCode, simulate_bler
from .evolution import DEFAULT_BETA, MAX_EVOLVE_LEVEL, evolve, profile_csv, select_indices
from .privacy import partition_csv, partition_summary, polaractivation_check, subchannel_partition
from .sweeps import (
    DECODE_K_LARGE_CAP,
    EVOLVE_K_DEFAULT_CAP,
    EXPERIMENTS,
    ConfigError,
    SweepConfig,
    run_sweep,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _u64(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 unsigned bits: {text}")
    return value


def _int_list(text: str) -> tuple[int, ...]:
    """``"6,8,10"`` or an inclusive range ``"1:20"`` (optionally ``"2:20:2"``)."""
    try:
        if ":" in text:
            parts = [int(v) for v in text.split(":")]
            start, stop = parts[0], parts[1]
            step = parts[2] if len(parts) > 2 else 1
            return tuple(range(start, stop + 1, step))
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers like '6,8,10' or '1:20', got {text!r}")


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _emit(text: str, out: str | None):
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _check_k(k: int, cap: int, allow_large: bool, hard_cap: int, what: str):
    limit = hard_cap if allow_large else cap
    if k < 0 or k > limit:
        hint = "" if allow_large else " (pass --allow-large to raise it)"
        raise ConfigError(f"k={k} outside [0, {limit}] for {what}{hint}")


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}")
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    return data


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

_SWEEP_FLAGS = ("out", "seed", "p", "k", "beta", "d", "rate", "trials", "mode", "convention",
                "p_amp", "p_phase", "p_bob", "p_eve", "f_step", "bins", "index_max_k", "workers")


def cmd_sweep(args) -> int:
    data = _load_config(args.config)
    if args.experiment:
        data["experiment"] = args.experiment
    for name in _SWEEP_FLAGS:
        value = getattr(args, name)
        if value is not None:
            data[name] = value
    if args.allow_large:
        data["allow_large"] = True
    try:
        cfg = SweepConfig.from_mapping(data)
    except TypeError as exc:
        raise ConfigError(str(exc))
    result = run_sweep(cfg)
    for path in result.files:
        print(path)
    return EXIT_OK


def cmd_evolve(args) -> int:
    _check_k(args.k, EVOLVE_K_DEFAULT_CAP, args.allow_large, MAX_EVOLVE_LEVEL, "evolve")
    model = _build_model(args)
    profile = evolve(channel_reliability_seed(model), args.k, args.beta)
    sel = select_indices(profile, args.mode, rate=args.rate)
    _emit(profile_csv(profile, sel), args.out)
    return EXIT_OK


def cmd_partition(args) -> int:
    _check_k(args.k, EVOLVE_K_DEFAULT_CAP, args.allow_large, MAX_EVOLVE_LEVEL, "partition")
    amp = evolve(args.p_amp, args.k, args.beta)
    phase = evolve(args.p_phase, args.k, args.beta)
    part = subchannel_partition(amp, phase, args.mode, 1.0 - args.p_amp, 1.0 - args.p_phase,
                                args.beta, args.convention)
    summary = partition_summary(part)
    if args.out:
        meta = {"p_amp": args.p_amp, "p_phase": args.p_phase, "k": args.k, "beta": args.beta,
                "mode": args.mode, "convention": args.convention}
        _emit(partition_csv(part, meta), args.out)
        _csvio.write_json(Path(args.out).with_suffix(".json"), summary)
    sys.stdout.write(_csvio.dumps_json(summary))
    return EXIT_OK


def _build_model(args):
    channel = args.channel
    if channel == "bec":
        return BEC(args.p)
    if channel == "bsc":
        return BSC(args.p)
    if channel == "erasure":
        return Erasure(args.p, args.d)
    if channel == "pauli":
        return PauliSub(args.p_z, args.p_x, args.subchannel)
    raise ConfigError(f"unknown channel {channel!r}")


def cmd_capacity(args) -> int:
    model = _build_model(args)
    report = {"channel": args.channel, "capacity": channel_capacity(model),
              "reliability_seed": channel_reliability_seed(model)}
    if args.channel == "erasure":
        c_star, p_priv = erasure_capacities(args.p, args.d)
        report.update({"c_sym_star": c_star, "p_private": p_priv})
    if args.channel == "pauli":
        f_z, f_x = pauli_subchannel_fidelities(args.p_z, args.p_x)
        bounds = csym_bounds(f_z, f_x)
        report.update({"f_z": f_z, "f_x": f_x, "csym_lower": bounds.lower, "csym_upper": bounds.upper,
                       "sum_below_one": f_z + f_x < 1.0})
    sys.stdout.write(_csvio.dumps_json(report))
    return EXIT_OK


def cmd_simulate(args) -> int:
    _check_k(args.k, MAX_DECODE_LEVEL, args.allow_large, DECODE_K_LARGE_CAP, "simulate")
    model = _build_model(args)
    if not isinstance(model, (BEC, BSC)):
        raise ConfigError("simulate supports --channel bec or bsc")
    code = PolarCode.from_profile(evolve(channel_reliability_seed(model), args.k), args.rate)
    report = simulate_bler(code, model, args.trials, args.seed, workers=args.workers,
                           max_k=DECODE_K_LARGE_CAP if args.allow_large else MAX_DECODE_LEVEL)
    if args.out:
        out = Path(args.out)
        _csvio.write_csv(out.with_suffix(".csv"), {"kind": "simulate", "seed": report.seed},
                         report.CSV_COLUMNS, [report.csv_row()])
        _csvio.write_json(out.with_suffix(".json"), report.to_dict())
    sys.stdout.write(report.to_json())
    return EXIT_OK


def cmd_check_polaractivation(args) -> int:
    c_low = args.c_low
    if c_low is None:
        if args.f_z is None or args.f_x is None:
            raise ConfigError("give --c-low or both --f-z and --f-x for the frontier heuristic")
        c_low = default_c_low(args.f_z, args.f_x)
    status = polaractivation_check(args.c_sym, c_low, args.c_sym_star)
    sys.stdout.write(_csvio.dumps_json(status.to_dict()))
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _add_channel_args(p, default="bec"):
    p.add_argument("--channel", choices=("bec", "bsc", "erasure", "pauli"), default=default)
    p.add_argument("--p", type=float, default=0.5, help="error/erasure probability")
    p.add_argument("--d", type=int, default=2, help="input dimension (erasure)")
    p.add_argument("--p-z", type=float, default=0.0, help="amplitude error probability (pauli)")
    p.add_argument("--p-x", type=float, default=0.0, help="phase error probability (pauli)")
    p.add_argument("--subchannel", choices=("amplitude", "phase"), default="amplitude")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="polaract", description="Polar-code construction and private-rate experiments.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("sweep", help="run an experiment sweep, writing CSV + summary JSON")
    sp.add_argument("experiment", nargs="?", choices=EXPERIMENTS)
    sp.add_argument("--config", help="JSON config file; flags override its values")
    sp.add_argument("--out")
    sp.add_argument("--seed", type=_u64)
    sp.add_argument("--p", type=_float_list)
    sp.add_argument("--k", type=_int_list)
    sp.add_argument("--beta", type=float)
    sp.add_argument("--d", type=int)
    sp.add_argument("--rate", type=_float_list)
    sp.add_argument("--trials", type=int)
    sp.add_argument("--mode", choices=("threshold", "rate"))
    sp.add_argument("--convention", choices=("complement", "aligned"))
    sp.add_argument("--p-amp", type=float)
    sp.add_argument("--p-phase", type=float)
    sp.add_argument("--p-bob", type=float)
    sp.add_argument("--p-eve", type=_float_list)
    sp.add_argument("--f-step", type=float)
    sp.add_argument("--bins", type=int)
    sp.add_argument("--index-max-k", type=int)
    sp.add_argument("--workers", type=int)
    sp.add_argument("--allow-large", action="store_true")
    sp.set_defaults(func=cmd_sweep)

    ev = sub.add_parser("evolve", help="reliability profile CSV for one channel")
    _add_channel_args(ev)
    ev.add_argument("--k", type=int, required=True)
    ev.add_argument("--beta", type=float, default=DEFAULT_BETA)
    ev.add_argument("--mode", choices=("threshold", "rate"), default="threshold")
    ev.add_argument("--rate", type=float)
    ev.add_argument("--out")
    ev.add_argument("--allow-large", action="store_true")
    ev.set_defaults(func=cmd_evolve)

    pa = sub.add_parser("partition", help="S_in/P1/P2/B partition of two erasure subchannels")
    pa.add_argument("--p-amp", type=float, required=True)
    pa.add_argument("--p-phase", type=float, required=True)
    pa.add_argument("--k", type=int, required=True)
    pa.add_argument("--beta", type=float, default=DEFAULT_BETA)
    pa.add_argument("--mode", choices=("threshold", "rate"), default="threshold")
    pa.add_argument("--convention", choices=("complement", "aligned"), default="complement")
    pa.add_argument("--out")
    pa.add_argument("--allow-large", action="store_true")
    pa.set_defaults(func=cmd_partition)

    ca = sub.add_parser("capacity", help="capacities and reliability seed of a channel")
    _add_channel_args(ca, default="erasure")
    ca.set_defaults(func=cmd_capacity)

    si = sub.add_parser("simulate", help="Monte Carlo block error rate of a polar code")
    _add_channel_args(si)
    si.add_argument("--k", type=int, required=True)
    si.add_argument("--rate", type=float, required=True)
    si.add_argument("--trials", type=int, default=10_000)
    si.add_argument("--seed", type=_u64, required=True)
    si.add_argument("--workers", type=int, default=1)
    si.add_argument("--out", help="path stem; writes <stem>.csv and <stem>.json")
    si.add_argument("--allow-large", action="store_true")
    si.set_defaults(func=cmd_simulate)

    cp = sub.add_parser("check-polaractivation", help="evaluate the activation window")
    cp.add_argument("--c-sym", type=float, required=True)
    cp.add_argument("--c-sym-star", type=float, required=True)
    cp.add_argument("--c-low", type=float)
    cp.add_argument("--f-z", type=float)
    cp.add_argument("--f-x", type=float)
    cp.set_defaults(func=cmd_check_polaractivation)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except ConfigError as exc:
        print(f"polaract: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DomainError, ValueError, TypeError) as exc:
        print(f"polaract: invalid input: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, ArithmeticError, MemoryError, RuntimeError) as exc:
        print(f"polaract: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
