import argparse
from pathlib import Path

from cfda.cli import write_outputs
from cfda.config import load_config
from cfda.experiments import run_experiment


def parser(doc: str) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(description=doc)
    p.add_argument("--out-dir", type=Path, default=Path("results"))
    p.add_argument("--fig-scale", action="store_true", help="full-size parameters")
    p.add_argument("--scenario", type=Path, help="JSON config overriding defaults")
    return p


def run(args, name, archs, delta_fs=None, stem=None, **kw):
    cfg = load_config(args.scenario, fig_scale=args.fig_scale)
    header, rows = run_experiment(name, cfg, archs, delta_fs, **kw)
    out = args.out_dir / f"{stem or name}.csv"
    write_outputs(out, header, rows, {"experiment": name, "architectures": archs, "delta_f_Hz": delta_fs,
                                      "parameters": cfg.to_dict(), "fig_scale": args.fig_scale, **kw})
    return cfg, header, rows, out
