#!/usr/bin/env python3
"""Dump Pareto-boundary samples of the information-energy region,
with and without feedback, for one SNR quadruple."""
import argparse

from gmac_seit import channel, region


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--snr", nargs=4, type=float, default=[10, 10, 10, 10],
                    metavar=("S11", "S12", "S21", "S22"))
    ap.add_argument("--res", type=int, default=32)
    ap.add_argument("--prefix", default="region")
    args = ap.parse_args()

    cfg = channel.from_snr(*args.snr)
    for feedback, tag in ((True, "fb"), (False, "nf")):
        records = region.sample_boundary_records(cfg, feedback=feedback,
                                                 resolution=args.res)
        path = f"{args.prefix}_{tag}.csv"
        with open(path, "w") as fh:
            region.records_to_csv(records, fh)
        print(f"{path}: {len(records)} boundary points "
              f"(b up to {max(r.b for r in records):.3f})")


if __name__ == "__main__":
    main()
