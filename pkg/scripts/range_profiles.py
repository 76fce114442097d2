"""Single-target range profiles for each receiver, and the peak table."""

from collections import defaultdict

import numpy as np

from _common import parser, run

def main():
    args = parser(__doc__).parse_args()
    _, _, rows, out = run(args, "mf-profile", ["pa", "fda-mimo"], stem="profile_pa_fdamimo")
    _, _, rows_c, out_c = run(args, "mf-profile", ["c-fda"], [0.0, 10e3, 50e3, 100e3], stem="profile_cfda")
    peaks = defaultdict(lambda: (0.0, 0.0))
    for arch, df, _, _, _, r, mag, _ in rows + rows_c:
        if mag > peaks[(arch, df)][0]:
            peaks[(arch, df)] = (mag, r)
    print(f"{'architecture':>12} {'delta_f':>9} {'peak':>10} {'range_m':>9}")
    for (arch, df), (mag, r) in sorted(peaks.items()):
        print(f"{arch:>12} {df:9.0f} {mag:10.1f} {r:9.1f}")
    print("wrote", out, out_c)


if __name__ == "__main__":
    main()
