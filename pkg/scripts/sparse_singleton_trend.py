#!/usr/bin/env python3
"""Track how often externally sparse sets below the threshold size m*
actually occur as the network grows, next to the closed-form per-set
ceiling exp(-n**(1 - alpha*m*log_b(c)) / 2) and its union bound.

At b = c the observed existence frequency of sparse singletons rises with
the tree height (isolated vertices proliferate), so this script is the
quickest way to see the measured curve against the analytic ceiling.

Example:
    python scripts/sparse_singleton_trend.py --h-from 4 --h-to 10 --trials 500
"""

import argparse

from cga.experiments import ExperimentConfig, trend_csv, trend_sparse_below_mstar


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--b", type=int, default=2)
    ap.add_argument("--c", type=float, default=2.0)
    ap.add_argument("--h-from", type=int, default=4, dest="h_from")
    ap.add_argument("--h-to", type=int, default=10, dest="h_to")
    ap.add_argument("--alpha", default="0.5")
    ap.add_argument("--beta", default="0.5")
    ap.add_argument("--trials", type=int, default=500)
    ap.add_argument("--seed", type=int, default=606)
    ap.add_argument("--candidates", type=int, default=200)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    cfg = ExperimentConfig(
        b=args.b,
        c=args.c,
        h_from=args.h_from,
        h_to=args.h_to,
        alpha=args.alpha,
        beta=args.beta,
        trials=args.trials,
        seed=args.seed,
        heights=(),
        candidates=args.candidates,
    )
    points = trend_sparse_below_mstar(cfg)
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(trend_csv(cfg, points))
        print(f"wrote {args.out}")
    print("H,n,m,exist_freq,candidate_freq,per_set_bound,union_bound,exhaustive")
    for pt in points:
        print(
            f"{pt.tree_height},{pt.n},{pt.size},{pt.exist_freq:.4f},"
            f"{pt.candidate_freq:.6f},{pt.per_set_bound:.4e},"
            f"{pt.union_bound:.4e},{int(pt.exhaustive)}"
        )


if __name__ == "__main__":
    main()
