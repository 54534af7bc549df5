"""Command-line interface: simulate, sweep, table and check workflows.

Flags mirror configuration keys and override values from ``--config``.  Exit
codes: 0 success; 2 configuration error; 3 numerical failure
(non-convergence, unitarity loss, singular controls, or a failing ``check``
suite); 4 I/O error.
"""
from __future__ import annotations

import argparse
import sys
from typing import Dict, List, Optional

import numpy as np

from . import __version__
from .channels import LengthMismatch, apply_errors
from .checks import run_checks
from .config import CONFIG_KEYS, ParseError, RunConfig, ValidationError, build_config, parse_kv
from .core import InvalidParameter, InvalidWaveform, sequence_area, transition_probability, unitarity_defect
from .integrator import NonConvergent, UnitarityViolation, propagate_sequence
from .protocols import PROTOCOL_KINDS, SingularControl, adiabaticity_margin, nominal_spec
from .serialize import IoError, write_result_file, write_table
from .sweep import comparison_table, sweep1d, sweep2d

__all__ = ["main"]

_CONFIG_ERRORS = (ParseError, ValidationError, InvalidParameter, LengthMismatch)
_NUMERICAL_ERRORS = (NonConvergent, UnitarityViolation, InvalidWaveform, SingularControl)


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH", help="run-configuration file (key = value lines)")
    for key, (tag, help_text) in CONFIG_KEYS.items():
        flag = "--" + key.replace("_", "-")
        parser.add_argument(flag, dest=f"cfg_{key}", metavar=tag.upper(), help=help_text)


def _collect_raw(args: argparse.Namespace) -> Dict[str, str]:
    raw: Dict[str, str] = {}
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise IoError(f"cannot read config {args.config!r}: {exc}") from exc
        raw = parse_kv(text)
    for key in CONFIG_KEYS:
        value = getattr(args, f"cfg_{key}", None)
        if value is not None:
            raw[key] = value
    return raw


def _cmd_simulate(args: argparse.Namespace) -> int:
    cfg = build_config(_collect_raw(args))
    seq = apply_errors(cfg.protocol, cfg.errors)
    u = propagate_sequence(seq, cfg.integrator)
    p = transition_probability(u)
    lines = [
        f"protocol = {cfg.protocol.kind}",
        f"pulses = {len(seq)}",
        f"P = {p!r}",
        f"infidelity = {1.0 - p!r}",
        f"total_area_over_pi = {sequence_area(seq) / np.pi:.6f}",
        f"unitarity_defect = {unitarity_defect(u):.3e}",
    ]
    first = seq.pulses[0]
    env = np.asarray(first.rabi(np.linspace(*first.window, 257)))
    if np.iscomplexobj(env) and np.max(np.abs(env.imag)) > 0.0:
        from .core import pulse_area

        main = sum(
            pulse_area(lambda t, w=w: np.real(np.asarray(w.rabi(t))), w.window) for w in seq.pulses
        )
        shortcut = sum(
            pulse_area(lambda t, w=w: np.imag(np.asarray(w.rabi(t))), w.window) for w in seq.pulses
        )
        lines.append(f"main_area_over_pi = {main / np.pi:.6f}")
        lines.append(f"shortcut_area_over_pi = {shortcut / np.pi:.6f}")
    else:
        lines.append(f"adiabaticity_margin = {adiabaticity_margin(first):.6f}")
    out = "\n".join(lines) + "\n"
    if cfg.output and cfg.output != "-":
        try:
            with open(cfg.output, "w", encoding="utf-8") as fh:
                fh.write(out)
        except OSError as exc:
            raise IoError(f"cannot write {cfg.output!r}: {exc}") from exc
    else:
        sys.stdout.write(out)
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    cfg = build_config(_collect_raw(args))
    if not cfg.axes:
        raise ValidationError("sweep requires sweep_channel/lo/hi/points")
    if len(cfg.axes) == 1:
        result = sweep1d(cfg.protocol, cfg.axes[0], cfg.errors, cfg.integrator, cfg.workers)
    else:
        result = sweep2d(cfg.protocol, cfg.axes[0], cfg.axes[1], cfg.errors, cfg.integrator, cfg.workers)
    write_result_file(result, cfg.output, cfg.fmt)
    if args.gnuplot:
        _write_gnuplot(args.gnuplot, cfg)
    return 0


def _write_gnuplot(path: str, cfg: RunConfig) -> None:
    data = cfg.output if cfg.output != "-" else "sweep.csv"
    lines = ["set datafile separator ','", "set key top right"]
    if len(cfg.axes) == 1:
        lines += [
            f"set xlabel '{cfg.axes[0].channel}'",
            "set ylabel 'P'",
            f"plot '{data}' skip 1 using 1:2 with lines title '{cfg.protocol.kind}'",
        ]
    else:
        lines += [
            f"set xlabel '{cfg.axes[1].channel}'",
            f"set ylabel '{cfg.axes[0].channel}'",
            f"set dgrid3d {cfg.axes[0].points},{cfg.axes[1].points}",
            "set pm3d map",
            f"splot '{data}' skip 1 using 2:1:3 with pm3d title '{cfg.protocol.kind}'",
        ]
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise IoError(f"cannot write {path!r}: {exc}") from exc


def _cmd_table(args: argparse.Namespace) -> int:
    raw = _collect_raw(args)
    raw.setdefault("protocol", "RE")  # table iterates protocols itself
    cfg = build_config(raw)
    kinds = [k.strip().upper() for k in (args.protocols or ",".join(PROTOCOL_KINDS)).split(",")]
    for kind in kinds:
        if kind not in PROTOCOL_KINDS:
            raise ValidationError(f"unknown protocol {kind!r} in --protocols")
    specs = [nominal_spec(kind, cfg.protocol.T) for kind in kinds]
    rows = comparison_table(
        specs, base_err=cfg.errors, cfg=cfg.integrator, workers=cfg.workers
    )
    if cfg.output and cfg.output != "-":
        try:
            with open(cfg.output, "wb") as fh:
                fh.write(write_table(rows, cfg.fmt))
        except OSError as exc:
            raise IoError(f"cannot write {cfg.output!r}: {exc}") from exc
    else:
        _print_table(rows)
    return 0


def _print_table(rows) -> None:
    print(f"{'channel':<16} {'protocol':<9} {'threshold':<10} {'half_width':<12} interval")
    for r in rows:
        if r.lo is None:
            interval = "below threshold at nominal"
        else:
            interval = f"[{r.lo:g}, {r.hi:g}]" + (" (censored)" if r.censored else "")
        print(f"{r.channel:<16} {r.protocol:<9} {r.threshold:<10g} {r.half_width:<12.4g} {interval}")


def _cmd_check(args: argparse.Namespace) -> int:
    results = run_checks(verbose=True)
    return 0 if all(r.ok for r in results) else 3


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="pulselab",
        description="Two-state coherent control techniques under experimental errors.",
    )
    parser.add_argument("--version", action="version", version=f"pulselab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="one protocol + error vector: P and diagnostics")
    _add_config_flags(p_sim)
    p_sim.set_defaults(fn=_cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="1-D/2-D error-channel grid to CSV/JSON")
    _add_config_flags(p_sweep)
    p_sweep.add_argument("--gnuplot", metavar="PATH", help="also emit a gnuplot script")
    p_sweep.set_defaults(fn=_cmd_sweep)

    p_table = sub.add_parser("table", help="half-width robustness summary across protocols")
    _add_config_flags(p_table)
    p_table.add_argument("--protocols", metavar="LIST", help="comma list, default all six")
    p_table.set_defaults(fn=_cmd_table)

    p_check = sub.add_parser("check", help="run the oracle/invariant suite")
    p_check.set_defaults(fn=_cmd_check)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except _CONFIG_ERRORS as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except IoError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    raise SystemExit(main())
