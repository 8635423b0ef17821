#!/usr/bin/env python3
"""Feedback energy-gain ratio versus SNR for several transmitter
asymmetries (co-located receivers), with the high-SNR limits."""
import argparse
import math

import numpy as np

from gmac_seit import channel, region


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--asym", nargs="*", type=float, default=[1.0, 4.0, 16.0])
    ap.add_argument("--points", type=int, default=61)
    ap.add_argument("--out", default="ratio_sweep.csv")
    args = ap.parse_args()

    grid = np.logspace(-6, 6, args.points)
    with open(args.out, "w") as fh:
        fh.write("snr," + ",".join(f"ratio_eta{a:g}" for a in args.asym)
                 + "\n")
        for s in grid:
            vals = [region.feedback_gain_ratio(
                channel.from_snr(a * s, s, a * s, s)) for a in args.asym]
            fh.write(f"{s:.17g}," + ",".join(f"{v:.17g}" for v in vals)
                     + "\n")
    for a in args.asym:
        lim = 1.0 + 2.0 * math.sqrt(a) / (1.0 + a)
        print(f"eta = {a:g}: high-SNR limit {lim:.4f}")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
