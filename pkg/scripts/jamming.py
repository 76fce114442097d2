"""Output SINR versus jammer range offset, and Capon range-azimuth maps."""

import numpy as np

from _common import parser, run


def main():
    args = parser(__doc__).parse_args()
    _, _, rows, out = run(args, "sinr-sweep", ["pa", "mimo", "fda-mimo"], [1e6], stem="sinr_fdamimo")
    _, _, rows_c, out_c = run(args, "sinr-sweep", ["c-fda"], [10e3, 50e3, 100e3], stem="sinr_cfda")
    for dr in (0.0, 150.0, 500.0, 600.0):
        vals = {(a, df): s for d, a, df, s in rows + rows_c if d == dr}
        print(f"dR={dr:6.0f} m  " + "  ".join(f"{a}@{df / 1e3:g}k={s:7.2f} dB" for (a, df), s in sorted(vals.items())))
    _, _, _, out_m = run(args, "capon-map", ["fda-mimo"], [1e6], stem="capon_fdamimo")
    _, _, _, out_m2 = run(args, "capon-map", ["c-fda"], [50e3], stem="capon_cfda")
    print("wrote", out, out_c, out_m, out_m2)


if __name__ == "__main__":
    main()
