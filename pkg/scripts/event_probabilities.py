#!/usr/bin/env python3
"""Estimate the density/sparseness event probabilities for probe sets
placed one per splitting block, across a range of tree heights.

With the splitting height pinned (--h-star), the E2 estimate isolates the
sparseness of the ring between a set's own subtree and the splitting
subtree; its stability across tree heights is the point of the experiment.

Example:
    python scripts/event_probabilities.py --h-from 6 --h-to 10 \
        --set-height 1 --set-size 2 --h-star 3 --trials 500
"""

import argparse

from cga.experiments import ExperimentConfig, SetTemplate, estimate_event_probs, events_csv


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--b", type=int, default=2)
    ap.add_argument("--c", type=float, default=2.0)
    ap.add_argument("--h-from", type=int, default=6, dest="h_from")
    ap.add_argument("--h-to", type=int, default=10, dest="h_to")
    ap.add_argument("--alpha", default="0.5")
    ap.add_argument("--beta", default="0.5")
    ap.add_argument("--trials", type=int, default=500)
    ap.add_argument("--seed", type=int, default=501)
    ap.add_argument("--set-height", type=int, default=1, dest="set_height")
    ap.add_argument("--set-size", type=int, default=2, dest="set_size")
    ap.add_argument("--placement", choices=["spread", "left"], default="spread")
    ap.add_argument("--h-star", type=int, default=None, dest="h_star")
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
        h_star=args.h_star,
    )
    template = SetTemplate(args.set_height, args.set_size, args.placement)
    estimates = estimate_event_probs(cfg, template, threads=args.threads)
    text = events_csv(cfg, template, estimates)
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    for est in estimates:
        row = " ".join(
            f"{key}={est.freq[key]:.4f}+-{est.se[key]:.4f}" for key in est.freq
        )
        print(f"H={est.tree_height} h*={est.h_star_used} ({est.observations} obs): {row}")


if __name__ == "__main__":
    main()
