"""Command-line front end: emits region/capacity/ratio/simulation data files.

Exit codes: 0 success, 2 usage error, 3 infeasible energy rate, 4 I/O error.
The default simulation seed can be set via the GMAC_SEIT_SEED environment
variable; an explicit --seed flag wins.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import channel, coder, mc, region

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INFEASIBLE_B = 3
EXIT_IO = 4


def _parse_tuple(text: str, k: int, name: str) -> tuple[float, ...]:
    parts = text.split(",")
    if len(parts) != k:
        raise argparse.ArgumentTypeError(
            f"{name} needs {k} comma-separated values, got {text!r}")
    try:
        vals = tuple(float(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad {name}: {exc}") from None
    return vals


def _snr_quad(text: str):
    return _parse_tuple(text, 4, "--snr")


def _pair(text: str):
    return _parse_tuple(text, 2, "pair flag")


def _open_out(path):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="ascii"), True


def _write(path, emit) -> None:
    fh, close = _open_out(path)
    try:
        emit(fh)
    finally:
        if close:
            fh.close()


def cmd_region(args) -> int:
    cfg = channel.from_snr(*args.snr)
    records = region.sample_boundary_records(cfg, feedback=args.feedback,
                                             resolution=args.res)
    if args.format == "csv":
        _write(args.out, lambda fh: region.records_to_csv(records, fh))
    else:
        _write(args.out, lambda fh: region.records_to_json(records, fh))
    if args.verify_contains is not None:
        with open(args.verify_contains, "r", encoding="ascii") as fh:
            other = region.records_from_csv(fh)
        bad = [rec for rec in other
               if not region.contains(cfg, rec.triplet, feedback=args.feedback,
                                      grid_n=args.res)]
        if bad:
            print(f"verify-contains: {len(bad)} of {len(other)} triplets "
                  "not found in this region", file=sys.stderr)
            return 1
        print(f"verify-contains: all {len(other)} triplets contained",
              file=sys.stderr)
    return EXIT_OK


def cmd_sumcap(args) -> int:
    cfg = channel.from_snr(*args.snr)
    bmax = args.bmax if args.bmax is not None else channel.max_energy_rate(cfg)
    grid = np.linspace(0.0, bmax, args.points)
    rows = [(b, region.sum_capacity_fb(cfg, b), region.sum_capacity_nf(cfg, b))
            for b in grid]

    def emit(fh):
        if args.format == "csv":
            fh.write("b,rsum_fb,rsum_nf\n")
            for row in rows:
                fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
        else:
            json.dump([{"b": b, "rsum_fb": f, "rsum_nf": n}
                       for b, f, n in rows], fh, indent=1)
            fh.write("\n")

    _write(args.out, emit)
    return EXIT_OK


def cmd_ratio(args) -> int:
    # co-located sweep: transmitter i has the same SNR toward both receivers;
    # --asym k scales transmitter 1's SNR to k times transmitter 2's
    grid = np.logspace(math.log10(args.snr_min), math.log10(args.snr_max),
                       args.points)
    rows = []
    for s in grid:
        cfg = channel.from_snr(args.asym * s, s, args.asym * s, s)
        ratio = region.feedback_gain_ratio(cfg)
        limit = region.gain_ratio_limit_high_snr(
            region.AsymmetryRatios.from_config(cfg, i=1))
        rows.append((s, ratio, limit))

    def emit(fh):
        if args.format == "csv":
            fh.write("snr,ratio,limit_high_snr\n")
            for row in rows:
                fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
        else:
            json.dump([{"snr": s, "ratio": r, "limit_high_snr": l}
                       for s, r, l in rows], fh, indent=1)
            fh.write("\n")

    _write(args.out, emit)
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = channel.from_snr(*args.snr)
    beta1, beta2 = args.beta
    if (args.rate is None) == (args.rate_frac is None):
        print("simulate: give exactly one of --rate or --rate-frac",
              file=sys.stderr)
        return EXIT_USAGE
    if args.rate is not None:
        r1, r2 = args.rate
    else:
        params0 = coder.SchemeParams(cfg=cfg, n=args.n, r1=0.0, r2=0.0,
                                     beta1=beta1, beta2=beta2, seed=args.seed)
        rs = params0.rho_star()
        om = 1.0 - rs * rs
        r1 = args.rate_frac * 0.5 * math.log2(1.0 + beta1 * cfg.snr11 * om)
        r2 = args.rate_frac * 0.5 * math.log2(1.0 + beta2 * cfg.snr12 * om)
    params = coder.SchemeParams(cfg=cfg, n=args.n, r1=r1, r2=r2,
                                beta1=beta1, beta2=beta2, seed=args.seed)
    bmax = channel.max_energy_rate(cfg)
    if args.target_b > bmax + 1e-9 * max(1.0, bmax):
        raise region.InfeasibleEnergyRateError(
            f"target_b {args.target_b} exceeds {bmax}")
    sc = mc.SimConfig(params=params, trials=args.trials,
                      target_b=args.target_b, epsilon=args.epsilon)
    report = mc.run(sc)
    _write(args.out, report.to_json)
    print(f"p_error_hat={report.p_error_hat:.6g} "
          f"mean_b={report.mean_b:.6g} outage_hat={report.outage_hat:.6g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gmac-seit",
        description="Information-energy capacity regions of the two-user "
                    "Gaussian MAC with feedback, and a Monte Carlo simulator "
                    "of the feedback coding scheme.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("region", help="sample the Pareto boundary of the "
                                      "information-energy region")
    p.add_argument("--snr", type=_snr_quad, required=True,
                   metavar="S11,S12,S21,S22")
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--feedback", dest="feedback", action="store_true",
                     default=True)
    grp.add_argument("--no-feedback", dest="feedback", action="store_false")
    p.add_argument("--res", type=int, default=32)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--verify-contains", metavar="CSV", default=None,
                   help="check every triplet of this boundary CSV for "
                        "membership in the region being sampled")
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("sumcap", help="sum-capacity vs energy rate, with "
                                      "and without feedback")
    p.add_argument("--snr", type=_snr_quad, required=True,
                   metavar="S11,S12,S21,S22")
    p.add_argument("--bmax", type=float, default=None)
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_sumcap)

    p = sub.add_parser("ratio", help="feedback energy-gain ratio sweep "
                                     "(co-located receivers)")
    p.add_argument("--snr-min", type=float, default=1e-6)
    p.add_argument("--snr-max", type=float, default=1e6)
    p.add_argument("--points", type=int, default=61)
    p.add_argument("--asym", type=float, default=1.0,
                   help="transmitter-1 SNR as a multiple of transmitter-2 SNR")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_ratio)

    p = sub.add_parser("simulate", help="Monte Carlo run of the feedback "
                                        "coding scheme")
    p.add_argument("--snr", type=_snr_quad, required=True,
                   metavar="S11,S12,S21,S22")
    p.add_argument("--beta", type=_pair, required=True, metavar="B1,B2")
    p.add_argument("--rate", type=_pair, default=None, metavar="R1,R2")
    p.add_argument("--rate-frac", type=float, default=None,
                   help="per-user rate as a fraction of the scheme's "
                        "large-n rate limit")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int,
                   default=int(os.environ.get("GMAC_SEIT_SEED", "0")))
    p.add_argument("--target-b", type=float, default=0.0)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except argparse.ArgumentTypeError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except region.InfeasibleEnergyRateError as exc:
        print(f"infeasible energy rate: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE_B
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"invalid arguments: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
