#!/usr/bin/env python3
"""Sum capacity versus delivered energy rate, with and without feedback,
plus the time-sharing lower bound for comparison."""
import argparse

import numpy as np

from gmac_seit import channel, region


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--snr", nargs=4, type=float, default=[10, 10, 10, 10],
                    metavar=("S11", "S12", "S21", "S22"))
    ap.add_argument("--points", type=int, default=101)
    ap.add_argument("--out", default="sumcap.csv")
    args = ap.parse_args()

    cfg = channel.from_snr(*args.snr)
    bmax = channel.max_energy_rate(cfg)
    with open(args.out, "w") as fh:
        fh.write("b,rsum_fb,rsum_nf,rsum_timeshare\n")
        for b in np.linspace(0.0, bmax, args.points):
            fh.write(f"{b:.17g},{region.sum_capacity_fb(cfg, b):.17g},"
                     f"{region.sum_capacity_nf(cfg, b):.17g},"
                     f"{region.time_sharing_sum_rate(cfg, b, 51):.17g}\n")
    gamma, b_fb = region.b_fb_at_nf_sum_capacity(cfg)
    print(f"{args.out}: {args.points} points, b in [0, {bmax:.3f}]")
    print(f"feedback holds the no-feedback sum capacity up to b = {b_fb:.4f} "
          f"(gain ratio {region.feedback_gain_ratio(cfg):.4f})")


if __name__ == "__main__":
    main()
