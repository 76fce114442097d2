"""Command-line entry point: ``cfda <experiment> [options]``."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import __version__
from .config import ConfigError, load_config
from .experiments import EXPERIMENTS, run_experiment
from .steering import Architecture

DEFAULT_ARCHS = {
    "mf-profile": ["pa", "fda-mimo", "c-fda"],
    "gain-sweep": ["c-fda"],
    "sinr-sweep": ["pa", "mimo", "fda-mimo", "c-fda"],
    "capon-map": ["fda-mimo", "c-fda"],
    "clutter-spectrum": ["fda-mimo", "c-fda"],
    "sdr-loss": ["fda-mimo", "c-fda"],
}


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"--delta-f expects comma-separated numbers, got {text!r}") from exc


def _arch_list(text: str) -> list[str]:
    out = []
    for a in text.split(","):
        try:
            out.append(Architecture.parse(a).value)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from exc
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cfda", description="Coherent FDA radar simulation experiments.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        s = sub.add_parser(name)
        s.add_argument("--scenario", type=Path, help="JSON config file (flat key/value, degrees for angles)")
        s.add_argument("--arch", type=_arch_list, help="comma-separated: pa, mimo, fda-mimo, c-fda")
        s.add_argument("--delta-f", type=_float_list, help="comma-separated frequency offsets in Hz")
        s.add_argument("--out", type=Path, required=True, help="output CSV path; a .json sidecar is written next to it")
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--trials", type=int, default=0, help="Monte-Carlo trials (0 = noise-free / closed form)")
        s.add_argument("--jobs", type=int, default=1, help="worker threads for sweep points")
        s.add_argument("--fig-scale", action="store_true", help="full-size parameters (f_s = 100 MHz, 8x8x8)")
    return p


def _fmt(v):
    if isinstance(v, float):
        return format(v, ".10g")
    return str(v)


def write_outputs(out: Path, header, rows, sidecar: dict) -> None:
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(v) for v in r])
    side = out.with_suffix(".json")
    side.write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.scenario, fig_scale=args.fig_scale)
    except (ConfigError, OSError) as exc:
        print(f"cfda: configuration error: {exc}", file=sys.stderr)
        return 2
    archs = args.arch or DEFAULT_ARCHS[args.experiment]
    if args.trials < 0 or args.seed < 0:
        print("cfda: --trials and --seed must be non-negative", file=sys.stderr)
        return 2
    try:
        header, rows = run_experiment(
            args.experiment, cfg, archs, args.delta_f, seed=args.seed, trials=args.trials, jobs=args.jobs
        )
    except ValueError as exc:
        print(f"cfda: {exc}", file=sys.stderr)
        return 2
    sidecar = {
        "experiment": args.experiment,
        "architectures": archs,
        "delta_f_Hz": args.delta_f,
        "seed": args.seed,
        "trials": args.trials,
        "fig_scale": args.fig_scale,
        "parameters": cfg.to_dict(),
        "version": __version__,
        "rows": len(rows),
    }
    write_outputs(args.out, header, rows, sidecar)
    return 0


if __name__ == "__main__":
    sys.exit(main())
