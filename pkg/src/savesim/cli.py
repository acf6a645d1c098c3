"""Command-line front end: `savesim run` and `savesim plotdata`."""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

from .core import ConfigError
from .report import load_experiment_config, run_experiment

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def _cmd_run(args) -> int:
    cfg = load_experiment_config(args.config)
    if args.seed is not None:
        cfg = replace(cfg, base_seed=args.seed)
    if args.reps is not None:
        cfg = replace(cfg, reps=args.reps)
    run_experiment(cfg, out_dir=args.out)
    print(f"wrote reports to {args.out}")
    return EXIT_OK


def _read_utilization(path: str) -> dict[int, dict[int, float]]:
    """Read a util_*.csv file into {slot: {pm_id: utilization}}."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != "slot,pm_id,utilization":
        raise ConfigError(f"{path}: expected a 'slot,pm_id,utilization' file")
    series: dict[int, dict[int, float]] = {}
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            slot_s, pm_s, u_s = line.split(",")
            series.setdefault(int(slot_s), {})[int(pm_s)] = float(u_s)
        except ValueError:
            raise ConfigError(f"{path}: bad row at line {line_no}: {line!r}") from None
    return series


def _suffix(path: str, index: int) -> str:
    root, ext = os.path.splitext(path)
    return f"{root}_{index + 1}{ext}"


def _cmd_plotdata(args) -> int:
    traces = [_read_utilization(p) for p in args.trace]
    max_slot = max((max(s) for s in traces if s), default=-1)
    for i, series in enumerate(traces):
        power_path = args.out if len(traces) == 1 else _suffix(args.out, i)
        util_path = args.util_out or _suffix_name(power_path)
        if len(traces) > 1 and args.util_out:
            util_path = _suffix(args.util_out, i)
        band = args.p_max - args.p_min
        with open(power_path, "w", newline="\n") as fh:
            fh.write("slot,total_power_w\n")
            for slot in range(max_slot + 1):
                total = sum((args.p_min + band * u for u in series.get(slot, {}).values()), 0.0)
                fh.write(f"{slot},{total!r}\n")
        pm_ids = sorted({pm for by_pm in series.values() for pm in by_pm})
        with open(util_path, "w", newline="\n") as fh:
            fh.write("slot," + ",".join(f"pm_{i}" for i in pm_ids) + "\n")
            for slot in range(max_slot + 1):
                by_pm = series.get(slot, {})
                cells = ["" if pm not in by_pm else repr(by_pm[pm]) for pm in pm_ids]
                fh.write(f"{slot}," + ",".join(cells) + "\n")
        print(f"wrote {power_path} and {util_path}")
    return EXIT_OK


def _suffix_name(power_path: str) -> str:
    root, ext = os.path.splitext(power_path)
    return f"{root}_util{ext}"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="savesim", description="Energy-aware VM consolidation simulator"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a policy-comparison experiment")
    p_run.add_argument("--config", required=True, help="experiment config file (INI)")
    p_run.add_argument("--out", required=True, help="output directory for reports")
    p_run.add_argument("--seed", type=int, default=None, help="override base seed")
    p_run.add_argument("--reps", type=int, default=None, help="override replication count")
    p_run.set_defaults(func=_cmd_run)

    p_plot = sub.add_parser("plotdata", help="derive plot-ready series from util traces")
    p_plot.add_argument(
        "--trace", required=True, nargs="+", help="one or more util_*.csv files from a run"
    )
    p_plot.add_argument("--out", required=True, help="output power-series CSV path")
    p_plot.add_argument("--util-out", default=None, help="output per-PM utilization CSV path")
    p_plot.add_argument("--p-min", type=float, default=110.0, help="idle power (W)")
    p_plot.add_argument("--p-max", type=float, default=205.0, help="full-load power (W)")
    p_plot.set_defaults(func=_cmd_plotdata)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as exc:  # pragma: no cover - defensive
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
