#!/usr/bin/env python3
"""Monte Carlo energy-outage fraction of the feedback scheme versus
blocklength, at a fixed target a little below the mean energy rate."""
import argparse
import math

from gmac_seit import channel, coder, mc


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--snr", nargs=4, type=float, default=[10, 10, 10, 10],
                    metavar=("S11", "S12", "S21", "S22"))
    ap.add_argument("--beta", nargs=2, type=float, default=[1.0, 1.0])
    ap.add_argument("--rate-frac", type=float, default=0.9)
    ap.add_argument("--margin", type=float, default=1.0,
                    help="target_b = mean energy rate minus this margin")
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n", nargs="*", type=int,
                    default=[250, 500, 1000, 2000, 4000, 8000])
    ap.add_argument("--out", default="outage.csv")
    args = ap.parse_args()

    cfg = channel.from_snr(*args.snr)
    b1, b2 = args.beta
    p0 = coder.SchemeParams(cfg=cfg, n=args.n[0], r1=0.0, r2=0.0,
                            beta1=b1, beta2=b2, seed=args.seed)
    rs = p0.rho_star()
    r1 = args.rate_frac * 0.5 * math.log2(1 + b1 * cfg.snr11 * (1 - rs * rs))
    r2 = args.rate_frac * 0.5 * math.log2(1 + b2 * cfg.snr12 * (1 - rs * rs))
    params = coder.SchemeParams(cfg=cfg, n=args.n[0], r1=r1, r2=r2,
                                beta1=b1, beta2=b2, seed=args.seed)
    target = coder.expected_energy_rate(params, rs) - args.margin
    base = mc.SimConfig(params=params, trials=args.trials, target_b=target,
                        epsilon=0.1)
    rows = mc.outage_estimate(base, args.n)
    with open(args.out, "w") as fh:
        mc.outage_table_to_csv(rows, fh)
    print(f"target_b = {target:.4f}")
    for n, out in rows:
        print(f"n = {n:>6d}: outage {out:.4f}")


if __name__ == "__main__":
    main()
