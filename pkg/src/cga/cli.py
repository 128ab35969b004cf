"""Command-line front end.

Subcommands: generate | verify | enumerate | oracle | bounds | experiment.

Every run echoes its full resolved configuration as `# key=value` lines so
any output can be reproduced from the output alone.  All randomness flows
from the --seed flag.  Exit codes: 0 success (and "is a cluster" for
verify), 1 verify found a non-cluster, 2 usage or parameter error, 3 I/O
failure, 4 work-budget refusal.  The CGA_WORK_BUDGET environment variable
overrides the default work budget.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import bounds as bounds_mod
from .clusters import ClusterSpec, event_report
from .experiments import (
    ExperimentConfig,
    SetTemplate,
    estimate_event_probs,
    events_csv,
    run_threshold_sweep,
    sweep_csv,
    trend_csv,
    trend_sparse_below_mstar,
    xs_csv,
    xs_statistics,
)
from .generator import (
    format_real,
    read_edge_list,
    sample_graph,
    write_edge_list,
)
from .oracle import (
    DEFAULT_WORK_BUDGET,
    WorkBudgetError,
    enumerate_clusters,
    enumerate_complete_clusters,
)
from .tree import TreeParams, VertexSet

EXIT_OK = 0
EXIT_NOT_CLUSTER = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_BUDGET = 4


def _echo_config(out, pairs) -> None:
    for key, val in pairs:
        print(f"# {key}={val}", file=out)


def _work_budget() -> int:
    raw = os.environ.get("CGA_WORK_BUDGET")
    if raw is None:
        return DEFAULT_WORK_BUDGET
    try:
        return int(raw)
    except ValueError as exc:
        raise ValueError(f"CGA_WORK_BUDGET must be an integer, got {raw!r}") from exc


def _parse_set(text: str, params: TreeParams) -> VertexSet:
    try:
        members = [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ValueError(f"--set must be a comma-separated vertex list, got {text!r}") from exc
    if not members:
        raise ValueError("--set must name at least one vertex")
    return VertexSet.from_leaves(members, params)


def cmd_generate(args) -> int:
    params = TreeParams(args.b, args.height, args.c)
    g = sample_graph(params, args.seed, directed=args.directed, threads=args.threads)
    _echo_config(
        sys.stdout,
        [
            ("command", "generate"),
            ("b", params.b),
            ("H", params.H),
            ("c", format_real(params.c)),
            ("seed", args.seed),
            ("directed", int(args.directed)),
            ("threads", args.threads),
            ("out", args.out),
        ],
    )
    write_edge_list(g, args.out)
    print(f"wrote {g.edge_count} {'arcs' if g.directed else 'edges'} to {args.out}")
    return EXIT_OK


def _load_graph(path):
    return read_edge_list(path)


def _spec_from_args(args, g) -> ClusterSpec:
    mode = args.mode
    if mode is None:
        mode = "directed-out" if g.directed else "undirected"
    return ClusterSpec(Fraction(args.alpha), Fraction(args.beta), mode)


def cmd_verify(args) -> int:
    g = _load_graph(args.graph)
    spec = _spec_from_args(args, g)
    M = _parse_set(args.set, g.params)
    _echo_config(
        sys.stdout,
        [
            ("command", "verify"),
            ("graph", args.graph),
            ("set", ",".join(str(v) for v in M.members)),
            ("alpha", spec.alpha),
            ("beta", spec.beta),
            ("mode", spec.mode),
            ("hstar", args.hstar if args.hstar is not None else ""),
        ],
    )
    h_star = args.hstar if args.hstar is not None else g.params.H
    rep = event_report(M, g, spec, h_star)
    print(f"set_height={M.height}")
    print(f"dense={str(rep.dense).lower()}")
    print(f"sparse={str(rep.externally_sparse).lower()}")
    if args.hstar is not None:
        print(f"e1={str(rep.e1).lower()}")
        print(f"e2={str(rep.e2).lower()}")
        print(f"e3={str(rep.e3).lower()}")
    for w in rep.witnesses:
        limit = spec.beta * len(M) if w.event == "D" else spec.alpha * len(M)
        relation = ">=" if w.event == "D" else "<="
        print(
            f"witness: event={w.event} vertex={w.vertex} edges={w.edges} "
            f"required{relation}{limit}"
        )
    verdict = rep.is_cluster
    print(f"cluster={str(verdict).lower()}")
    return EXIT_OK if verdict else EXIT_NOT_CLUSTER


def _print_cluster_list(result, out) -> None:
    print(f"# search_space={result.search_space}", file=out)
    print(f"# clusters={len(result.clusters)}", file=out)
    for M, complete in zip(result.clusters, result.complete):
        tag = "complete" if complete else "partial"
        print(f"{','.join(str(v) for v in M.members)} height={M.height} {tag}", file=out)


def cmd_enumerate(args) -> int:
    g = _load_graph(args.graph)
    spec = _spec_from_args(args, g)
    _echo_config(
        sys.stdout,
        [
            ("command", "enumerate"),
            ("graph", args.graph),
            ("alpha", spec.alpha),
            ("beta", spec.beta),
            ("mode", spec.mode),
            ("height", args.height),
        ],
    )
    result = enumerate_complete_clusters(g, spec, args.height)
    _print_cluster_list(result, sys.stdout)
    return EXIT_OK


def cmd_oracle(args) -> int:
    g = _load_graph(args.graph)
    spec = _spec_from_args(args, g)
    budget = args.budget if args.budget is not None else _work_budget()
    _echo_config(
        sys.stdout,
        [
            ("command", "oracle"),
            ("graph", args.graph),
            ("alpha", spec.alpha),
            ("beta", spec.beta),
            ("mode", spec.mode),
            ("max_size", args.max_size),
            ("work_budget", budget),
        ],
    )
    result = enumerate_clusters(g, spec, args.max_size, work_budget=budget)
    _print_cluster_list(result, sys.stdout)
    return EXIT_OK


def cmd_bounds(args) -> int:
    alpha = float(Fraction(args.alpha))
    ms = bounds_mod.m_star(alpha, args.b, args.c)
    pairs = [
        ("command", "bounds"),
        ("b", args.b),
        ("c", format_real(args.c)),
        ("alpha", args.alpha),
        ("epsilon", args.epsilon),
        ("height", args.height if args.height is not None else ""),
        ("m", args.m if args.m is not None else ""),
        ("family_size", args.family_size if args.family_size is not None else ""),
    ]
    _echo_config(sys.stdout, pairs)
    print(f"m_star={repr(ms)}")
    print(f"gamma={repr(bounds_mod.gamma_constant(alpha, args.b, args.c))}")
    if args.height is not None:
        params = TreeParams(args.b, args.height, args.c)
        hs = bounds_mod.threshold_heights(params, args.epsilon)
        print(f"h_star={repr(hs.h_star)}")
        print(f"h_epsilon={repr(hs.h_epsilon)}")
        print(f"tall_height={repr(hs.tall_height)}")
        for h in range(0, args.height + 1):
            lv = bounds_mod.clique_count_lower_bound(h, params)
            parts = [
                f"h={h}",
                f"clique_count_lower_bound={repr(lv.value)}",
                f"log={repr(lv.log)}",
            ]
            if h >= 1:
                parts.append(
                    f"exact_clique_probability={repr(bounds_mod.exact_clique_probability(h, params))}"
                )
                parts.append(
                    f"expected_internal_edges={repr(bounds_mod.expected_internal_edges(h, params))}"
                )
            print(" ".join(parts))
        if args.m is not None:
            family = args.family_size if args.family_size is not None else params.n
            print(
                f"cluster_count_guarantee="
                f"{repr(bounds_mod.cluster_count_guarantee(args.m, params, alpha, family))}"
            )
    if args.tail_n is not None:
        if args.tail_t is not None:
            print(
                f"binom_tail_bound="
                f"{repr(bounds_mod.binom_tail_bound(args.tail_n, args.tail_p, args.tail_t))}"
            )
        if args.tail_s is not None:
            print(
                f"binom_tail_simple="
                f"{repr(bounds_mod.binom_tail_simple(args.tail_n, args.tail_p, args.tail_s))}"
            )
            print(
                f"binom_tail_exact="
                f"{repr(bounds_mod.binom_tail_exact(args.tail_n, args.tail_p, args.tail_s))}"
            )
    if args.mu is not None and args.t is not None:
        jb = bounds_mod.janson_bounds(args.mu, args.t)
        print(f"janson_upper={repr(jb.upper)}")
        print(f"janson_lower={repr(jb.lower)}")
    return EXIT_OK


def parse_config_text(text: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key=value, got {raw!r}")
        key, val = line.split("=", 1)
        values[key.strip()] = val.strip()
    return values


_CONFIG_KEYS = {
    "b": int,
    "c": float,
    "h_from": int,
    "h_to": int,
    "alpha": str,
    "beta": str,
    "epsilon": float,
    "trials": int,
    "seed": int,
    "heights": str,
    "measures": str,
    "h_star": int,
    "directed": int,
    "set_height": int,
    "set_size": int,
    "placement": str,
    "candidates": int,
    "allow_large": int,
    "work_budget": int,
}


def load_experiment_config(path: str) -> ExperimentConfig:
    with open(path, "r") as fh:
        raw = parse_config_text(fh.read())
    unknown = set(raw) - set(_CONFIG_KEYS)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    kwargs = {}
    for key, value in raw.items():
        conv = _CONFIG_KEYS[key]
        if key == "heights":
            kwargs[key] = tuple(int(tok) for tok in value.split(",") if tok.strip())
        elif key == "measures":
            kwargs[key] = frozenset(tok.strip() for tok in value.split(",") if tok.strip())
        elif key in ("alpha", "beta"):
            kwargs[key] = Fraction(value)
        elif key in ("directed", "allow_large"):
            kwargs[key] = bool(int(value))
        else:
            kwargs[key] = conv(value)
    return ExperimentConfig(**kwargs)


def cmd_experiment(args) -> int:
    cfg = load_experiment_config(args.config)
    if args.kind == "sweep":
        reports = run_threshold_sweep(cfg, threads=args.threads)
        text = sweep_csv(cfg, reports)
    elif args.kind == "events":
        if cfg.set_height is None or cfg.set_size is None:
            raise ValueError("events experiments need set_height and set_size in the config")
        template = SetTemplate(cfg.set_height, cfg.set_size, cfg.placement)
        estimates = estimate_event_probs(cfg, template, threads=args.threads)
        text = events_csv(cfg, template, estimates)
    elif args.kind == "trend":
        points = trend_sparse_below_mstar(cfg, threads=args.threads)
        text = trend_csv(cfg, points)
    elif args.kind == "xs":
        if cfg.set_height is None:
            raise ValueError("xs experiments need set_height in the config")
        stats = xs_statistics(cfg, cfg.set_height, threads=args.threads)
        text = xs_csv(cfg, stats)
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown experiment kind {args.kind!r}")
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cga",
        description="Hierarchical community-guided random graphs and cluster analysis",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("generate", help="sample a graph and write its edge list")
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--height", type=int, required=True, help="tree height H")
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--directed", action="store_true")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="check one vertex set against the cluster definition")
    p.add_argument("--graph", required=True)
    p.add_argument("--set", required=True, help="comma-separated vertex list")
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--hstar", type=int, default=None)
    p.add_argument("--mode", choices=["undirected", "directed-out"], default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("enumerate", help="list complete clusters at one height")
    p.add_argument("--graph", required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--mode", choices=["undirected", "directed-out"], default=None)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("oracle", help="list every cluster up to a size cap (exhaustive)")
    p.add_argument("--graph", required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--max-size", type=int, required=True, dest="max_size")
    p.add_argument("--budget", type=int, default=None, help="work budget override")
    p.add_argument("--mode", choices=["undirected", "directed-out"], default=None)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bounds", help="evaluate the closed-form constants and bounds")
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--height", type=int, default=None, help="tree height H")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--family-size", type=int, default=None, dest="family_size")
    p.add_argument("--tail-n", type=int, default=None, dest="tail_n")
    p.add_argument("--tail-p", type=float, default=None, dest="tail_p")
    p.add_argument("--tail-t", type=float, default=None, dest="tail_t")
    p.add_argument("--tail-s", type=float, default=None, dest="tail_s")
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--t", type=float, default=None)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("experiment", help="run a Monte Carlo experiment from a config file")
    p.add_argument("kind", choices=["sweep", "events", "trend", "xs"])
    p.add_argument("--config", required=True, help="plain-text key=value config file")
    p.add_argument("--out", default=None, help="output CSV path (stdout when omitted)")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_experiment)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except WorkBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
