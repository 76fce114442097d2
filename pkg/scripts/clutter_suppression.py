"""Clutter range-Doppler spectra and SDR-loss curves, with notch counts."""

from collections import defaultdict

import numpy as np

from cfda.clutter import count_notches

from _common import parser, run


def main():
    args = parser(__doc__).parse_args()
    run(args, "clutter-spectrum", ["fda-mimo"], [1e6], stem="clutter_spectrum_fdamimo")
    run(args, "clutter-spectrum", ["c-fda"], [50e3], stem="clutter_spectrum_cfda")
    _, _, rows, out = run(args, "sdr-loss", ["fda-mimo", "c-fda"], [1e6], stem="sdr_loss_1mhz")
    _, _, rows2, out2 = run(args, "sdr-loss", ["c-fda"], [2.5e3, 10e3, 50e3], stem="sdr_loss_cfda")
    curves = defaultdict(list)
    for arch, df, method, srdc, f, loss, _ in rows + rows2:
        curves[(arch, df, method, srdc)].append((f, loss))
    print(f"{'architecture':>12} {'delta_f':>8} {'method':>8} {'srdc':>4} {'notches':>7} {'min_dB':>8}")
    for key, pts in sorted(curves.items()):
        loss = np.array([v for _, v in sorted(pts)])
        arch, df, method, srdc = key
        print(f"{arch:>12} {df:8.0f} {method:>8} {srdc:4d} {count_notches(loss):7d} {loss.min():8.2f}")
    print("wrote", out, out2)


if __name__ == "__main__":
    main()
