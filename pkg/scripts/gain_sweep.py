"""Amplitude coefficient E versus frequency offset, with Monte-Carlo array gains."""

import numpy as np

from _common import parser, run


def main():
    p = parser(__doc__)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    dfs = [0.0, 1e3, 5e3, 10e3, 50e3, 100e3]
    _, header, rows, out = run(args, "gain-sweep", ["c-fda"], dfs, trials=args.trials, seed=args.seed)
    print(" ".join(f"{h:>13}" for h in header))
    for r in rows:
        print(" ".join(f"{v:13.5g}" if isinstance(v, float) else f"{v:>13}" for v in r))
    print("wrote", out)


if __name__ == "__main__":
    main()
