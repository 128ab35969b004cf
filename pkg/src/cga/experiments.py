"""Deterministic Monte Carlo harness.

Trials derive their graph seeds from the experiment master seed through
SplitMix64: the trial at position i of the sweep (position = tree-height
index * trials + trial index) uses splitmix64(master_seed, i).  Every
estimator here is a pure function of its config, so reruns and different
worker counts reproduce identical output bytes.

Sweep CSV format (one row per trial and scanned height, after `# key=value`
comment lines echoing the full resolved config):

    trial,seed,b,H,c,alpha,beta,epsilon,h,n,cliques,dense_complete,
    complete_clusters,e1_rate,e2_rate,e3_rate,d_rate,edges,xs_mean,wall_ms

Measurements that were not collected are emitted as empty fields, never as
zeros.  Wall-clock timing is a measurement like any other ("wall") and is
off by default, which keeps default CSV output byte-reproducible.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Sequence

from .bounds import expected_internal_edges, m_star, threshold_heights
from .clusters import (
    ClusterSpec,
    as_fraction,
    event_report,
    internal_edge_count,
    is_cluster,
    is_externally_sparse,
    is_internally_dense,
)
from .generator import Graph, format_real, sample_graph
from .oracle import DEFAULT_WORK_BUDGET, WorkBudgetError
from .rng import splitmix64, substream
from .tree import TreeParams, VertexSet

ALL_MEASURES = frozenset({"cliques", "dense", "clusters", "events", "xs", "edges", "wall"})
DEFAULT_MEASURES = frozenset({"cliques", "dense", "clusters", "events", "xs", "edges"})

SWEEP_HEADER = (
    "trial,seed,b,H,c,alpha,beta,epsilon,h,n,cliques,dense_complete,"
    "complete_clusters,e1_rate,e2_rate,e3_rate,d_rate,edges,xs_mean,wall_ms"
)

DEFAULT_MAX_N = 2**22


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a run needs; immutable and fully echoed into output."""

    b: int
    c: float
    h_from: int
    h_to: int
    alpha: Fraction = Fraction(1, 2)
    beta: Fraction = Fraction(1, 2)
    epsilon: float | None = None
    trials: int = 100
    seed: int = 0
    heights: tuple[int, ...] = ()
    measures: frozenset[str] = DEFAULT_MEASURES
    h_star: int | None = None
    directed: bool = False
    set_height: int | None = None
    set_size: int | None = None
    placement: str = "spread"
    candidates: int = 200
    allow_large: bool = False
    work_budget: int = DEFAULT_WORK_BUDGET

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", as_fraction(self.alpha))
        object.__setattr__(self, "beta", as_fraction(self.beta))
        object.__setattr__(self, "heights", tuple(self.heights))
        object.__setattr__(self, "measures", frozenset(self.measures))
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.h_from > self.h_to:
            raise ValueError(f"empty height range [{self.h_from}, {self.h_to}]")
        unknown = self.measures - ALL_MEASURES
        if unknown:
            raise ValueError(f"unknown measures: {sorted(unknown)}")
        for h in self.heights:
            if not 0 <= h <= self.h_from:
                raise ValueError(
                    f"scanned height {h} outside [0, {self.h_from}] (the smallest tree height)"
                )
        # construct the largest parameter set once to validate b, c, size
        params = TreeParams(self.b, self.h_to, self.c)
        if params.n > DEFAULT_MAX_N and not self.allow_large:
            raise ValueError(
                f"n = {params.n} exceeds the desk-scale cap {DEFAULT_MAX_N}; "
                "set allow_large to override"
            )

    @property
    def tree_heights(self) -> range:
        return range(self.h_from, self.h_to + 1)

    def params_for(self, tree_height: int) -> TreeParams:
        return TreeParams(self.b, tree_height, self.c)

    @property
    def resolved_epsilon(self) -> float:
        if self.epsilon is not None:
            return float(self.epsilon)
        return min(0.1, math.log(self.c) / (8 * math.log(self.b)))

    @property
    def cluster_spec(self) -> ClusterSpec:
        mode = "directed-out" if self.directed else "undirected"
        return ClusterSpec(self.alpha, self.beta, mode)

    def trial_seed(self, tree_height: int, trial: int) -> int:
        idx = list(self.tree_heights).index(tree_height) * self.trials + trial
        return splitmix64(self.seed, idx)

    def resolve_h_star(self, tree_height: int, h: int) -> int:
        """Integer splitting height: the configured value, else the
        smallest admissible integer at or above the real threshold
        height, clamped to [h, H]."""
        if self.h_star is not None:
            if not h <= self.h_star <= tree_height:
                raise ValueError(
                    f"configured h_star {self.h_star} outside [{h}, {tree_height}]"
                )
            return self.h_star
        params = self.params_for(tree_height)
        real = threshold_heights(params, self.resolved_epsilon).h_star
        return min(tree_height, max(h, math.ceil(real)))

    def items(self) -> list[tuple[str, str]]:
        """Resolved settings as printable (key, value) pairs, for echo."""
        out: list[tuple[str, str]] = []
        for f in fields(self):
            val = getattr(self, f.name)
            if f.name == "c":
                text = format_real(val)
            elif f.name in ("alpha", "beta"):
                text = str(val)
            elif f.name == "heights":
                text = ",".join(str(h) for h in val)
            elif f.name == "measures":
                text = ",".join(sorted(val))
            elif f.name == "epsilon":
                text = repr(self.resolved_epsilon)
            elif val is None:
                text = ""
            else:
                text = str(val)
            out.append((f.name, text))
        return out


@dataclass(frozen=True)
class HeightStats:
    """Per-height tallies of one trial; None marks an uncollected value."""

    height: int
    cliques: int | None
    dense_complete: int | None
    complete_clusters: int | None
    e1_rate: float | None
    e2_rate: float | None
    e3_rate: float | None
    d_rate: float | None
    xs_mean: float | None
    joint_rate: float | None = None  # D and E1 and E2 and E3 together


@dataclass(frozen=True)
class TrialReport:
    """One Monte Carlo observation.  Wall time is diagnostic metadata and
    never part of report equality."""

    trial: int
    seed: int
    tree_height: int
    n: int
    edge_count: int | None
    per_height: tuple[HeightStats, ...]
    wall_ms: float = field(default=0.0, compare=False)


def _map_trials(fn: Callable, tasks: Sequence, threads: int) -> list:
    if threads > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, tasks))
    return [fn(t) for t in tasks]


def _check_sweep_budget(cfg: ExperimentConfig) -> None:
    for tree_height in cfg.tree_heights:
        n = cfg.b**tree_height
        for h in cfg.heights:
            block = cfg.b**h
            est = (n // block) * (block * (block - 1) // 2 + block) + n
            if est > cfg.work_budget:
                raise WorkBudgetError(
                    est, cfg.work_budget, f"sweep at H={tree_height}, height={h}"
                )


def _scan_height(
    g: Graph, spec: ClusterSpec, h: int, h_star: int, measures: frozenset[str]
) -> HeightStats:
    p = g.params
    block = p.b**h
    blocks = p.n // block
    full = block * (block - 1) // 2
    want_internal = "cliques" in measures or "xs" in measures
    want_events = "events" in measures
    want_dense = "dense" in measures or want_events
    want_clusters = "clusters" in measures or want_events

    cliques = 0
    dense_count = 0
    cluster_count = 0
    e1 = e2 = e3 = 0
    joint = 0
    xs_total = 0
    for root in range(0, p.n, block):
        M = VertexSet(tuple(range(root, root + block)), h, root)
        if want_internal:
            internal = internal_edge_count(M, g)
            xs_total += internal
            if internal == full:
                cliques += 1
        if want_events:
            rep = event_report(M, g, spec, h_star)
            dense_count += rep.dense
            e1 += rep.e1
            e2 += rep.e2
            e3 += rep.e3
            joint += rep.is_cluster
            cluster_count += rep.is_cluster
        else:
            if want_dense:
                dense_count += is_internally_dense(M, g, spec)
            if want_clusters:
                cluster_count += is_cluster(M, g, spec)

    return HeightStats(
        height=h,
        cliques=cliques if "cliques" in measures else None,
        dense_complete=dense_count if want_dense else None,
        complete_clusters=cluster_count if want_clusters else None,
        e1_rate=e1 / blocks if want_events else None,
        e2_rate=e2 / blocks if want_events else None,
        e3_rate=e3 / blocks if want_events else None,
        d_rate=dense_count / blocks if want_events else None,
        xs_mean=xs_total / blocks if "xs" in measures else None,
        joint_rate=joint / blocks if want_events else None,
    )


def run_threshold_sweep(cfg: ExperimentConfig, threads: int = 1) -> list[TrialReport]:
    """Sample trials across the configured tree heights and scan every
    requested height for cliques, dense complete sets, complete clusters,
    event rates and internal-edge statistics."""
    _check_sweep_budget(cfg)
    spec = cfg.cluster_spec

    tasks = [
        (tree_height, trial)
        for tree_height in cfg.tree_heights
        for trial in range(cfg.trials)
    ]

    def run(task: tuple[int, int]) -> TrialReport:
        tree_height, trial = task
        t0 = time.perf_counter()
        seed = cfg.trial_seed(tree_height, trial)
        params = cfg.params_for(tree_height)
        g = sample_graph(params, seed, directed=cfg.directed)
        stats = tuple(
            _scan_height(g, spec, h, cfg.resolve_h_star(tree_height, h), cfg.measures)
            for h in cfg.heights
        )
        return TrialReport(
            trial=trial,
            seed=seed,
            tree_height=tree_height,
            n=params.n,
            edge_count=g.edge_count if "edges" in cfg.measures else None,
            per_height=stats,
            wall_ms=(time.perf_counter() - t0) * 1e3,
        )

    return _map_trials(run, tasks, threads)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def sweep_csv(cfg: ExperimentConfig, reports: Iterable[TrialReport]) -> str:
    """Render sweep reports in the documented CSV layout, prefixed by the
    resolved configuration."""
    lines = [f"# {key}={val}" for key, val in cfg.items()]
    lines.append(SWEEP_HEADER)
    ordered = sorted(reports, key=lambda r: (r.tree_height, r.trial))
    alpha, beta = str(cfg.alpha), str(cfg.beta)
    eps = repr(cfg.resolved_epsilon)
    wall_on = "wall" in cfg.measures
    for rep in ordered:
        for hs in rep.per_height:
            row = [
                str(rep.trial),
                str(rep.seed),
                str(cfg.b),
                str(rep.tree_height),
                format_real(cfg.c),
                alpha,
                beta,
                eps,
                str(hs.height),
                str(rep.n),
                _fmt(hs.cliques),
                _fmt(hs.dense_complete),
                _fmt(hs.complete_clusters),
                _fmt(hs.e1_rate),
                _fmt(hs.e2_rate),
                _fmt(hs.e3_rate),
                _fmt(hs.d_rate),
                _fmt(rep.edge_count),
                _fmt(hs.xs_mean),
                _fmt(rep.wall_ms) if wall_on else "",
            ]
            lines.append(",".join(row))
    return "\n".join(lines) + "\n"


# --- event probability estimation ------------------------------------------


@dataclass(frozen=True)
class SetTemplate:
    """How to place one probe set inside each splitting block: its height,
    size, and the placement rule ("spread" distributes members round-robin
    over the subtree's children, so any set of size >= 2 attains the
    requested height exactly; "left" takes the leftmost leaves)."""

    height: int
    size: int
    placement: str = "spread"

    def __post_init__(self) -> None:
        if self.placement not in ("spread", "left"):
            raise ValueError(f"unknown placement rule {self.placement!r}")
        if self.size < 1:
            raise ValueError(f"set size must be >= 1, got {self.size}")


def place_set(template: SetTemplate, block_root: int, params: TreeParams) -> VertexSet:
    b, h, m = params.b, template.height, template.size
    if m > b**h:
        raise ValueError(
            f"cannot place {m} vertices in a height-{h} subtree of {b**h} leaves"
        )
    if template.placement == "left" or h == 0:
        members = range(block_root, block_root + m)
    else:
        child = b ** (h - 1)
        members = (block_root + (t % b) * child + (t // b) for t in range(m))
    return VertexSet.from_leaves(members, params)


@dataclass(frozen=True)
class EventProbEstimate:
    """Empirical event frequencies with standard errors, one per tree
    height.  `freq["all"]` is the joint D, E1, E2, E3 frequency."""

    tree_height: int
    n: int
    h_star_used: int
    placements_per_trial: int
    trials: int
    observations: int
    freq: dict[str, float]
    se: dict[str, float]
    counts: dict[str, int]


EVENT_KEYS = ("D", "E1", "E2", "E3", "all")


def estimate_event_probs(
    cfg: ExperimentConfig, template: SetTemplate, threads: int = 1
) -> list[EventProbEstimate]:
    """Place one probe set per splitting block per trial and measure the
    frequency of each density/sparseness event."""
    spec = cfg.cluster_spec
    results = []
    for tree_height in cfg.tree_heights:
        params = cfg.params_for(tree_height)
        h_star = cfg.resolve_h_star(tree_height, template.height)
        star_block = params.b**h_star
        roots = range(0, params.n, star_block)
        probes = [place_set(template, root, params) for root in roots]

        def run(trial: int) -> list[int]:
            seed = cfg.trial_seed(tree_height, trial)
            g = sample_graph(params, seed, directed=cfg.directed)
            tally = [0] * len(EVENT_KEYS)
            for M in probes:
                rep = event_report(M, g, spec, h_star)
                tally[0] += rep.dense
                tally[1] += rep.e1
                tally[2] += rep.e2
                tally[3] += rep.e3
                tally[4] += rep.is_cluster
            return tally

        tallies = _map_trials(run, range(cfg.trials), threads)
        totals = [sum(t[i] for t in tallies) for i in range(len(EVENT_KEYS))]
        obs = len(probes) * cfg.trials
        freq = {k: totals[i] / obs for i, k in enumerate(EVENT_KEYS)}
        se = {
            k: math.sqrt(freq[k] * (1 - freq[k]) / obs) for k in EVENT_KEYS
        }
        results.append(
            EventProbEstimate(
                tree_height=tree_height,
                n=params.n,
                h_star_used=h_star,
                placements_per_trial=len(probes),
                trials=cfg.trials,
                observations=obs,
                freq=freq,
                se=se,
                counts=dict(zip(EVENT_KEYS, totals)),
            )
        )
    return results


def events_csv(cfg: ExperimentConfig, template: SetTemplate, estimates) -> str:
    lines = [f"# {key}={val}" for key, val in cfg.items()]
    lines.append(f"# template_height={template.height}")
    lines.append(f"# template_size={template.size}")
    lines.append(f"# template_placement={template.placement}")
    lines.append("H,n,h_star,event,frequency,se,count,observations")
    for est in estimates:
        for key in EVENT_KEYS:
            lines.append(
                f"{est.tree_height},{est.n},{est.h_star_used},{key},"
                f"{repr(est.freq[key])},{repr(est.se[key])},"
                f"{est.counts[key]},{est.observations}"
            )
    return "\n".join(lines) + "\n"


# --- externally sparse sets below the size threshold ------------------------


@dataclass(frozen=True)
class TrendPoint:
    """Empirical occurrence of externally sparse sets of one size at one
    tree height, next to the analytic per-set bound
    exp(-n**(1 - alpha*m*log_b(c)) / 2) and its union over all C(n, m)
    sets."""

    tree_height: int
    n: int
    size: int
    trials: int
    exist_freq: float
    exist_se: float
    candidate_freq: float
    candidate_se: float
    per_set_bound: float
    union_bound: float
    exhaustive: bool
    candidates_per_trial: int


def _candidate_sets(
    cfg: ExperimentConfig, params: TreeParams, m: int, seed: int
) -> tuple[list[tuple[int, ...]], bool]:
    """Candidate m-subsets: exhaustive for n <= 20, otherwise every
    m-subset local to one minimal-height complete set plus random
    subsets from the trial's auxiliary stream."""
    n = params.n
    if n <= 20:
        return [c for c in combinations(range(n), m)], True
    h_loc = 0
    while params.b**h_loc < m:
        h_loc += 1
    block = params.b**h_loc
    local: list[tuple[int, ...]] = []
    for root in range(0, n, block):
        for combo in combinations(range(root, root + block), m):
            local.append(combo)
    gen = substream(seed, 0, 1)
    extra = {
        tuple(sorted(int(x) for x in gen.choice(n, size=m, replace=False)))
        for _ in range(cfg.candidates)
    }
    seen = set(local)
    for combo in sorted(extra):
        if combo not in seen:
            local.append(combo)
    return local, False


def trend_sparse_below_mstar(cfg: ExperimentConfig, threads: int = 1) -> list[TrendPoint]:
    """For every integer size m below the threshold size, measure how often
    externally sparse sets of that size occur, per tree height."""
    ms = m_star(cfg.alpha, cfg.b, cfg.c)
    sizes = [m for m in range(1, math.ceil(ms)) if m < ms]
    if not sizes:
        raise ValueError(
            f"m_star = {ms} leaves no integer sizes below it; nothing to test"
        )
    spec = cfg.cluster_spec
    alpha = float(cfg.alpha)
    log_b_c = math.log(cfg.c) / math.log(cfg.b)
    points = []
    for tree_height in cfg.tree_heights:
        params = cfg.params_for(tree_height)
        n = params.n
        for m in sizes:

            def run(trial: int) -> tuple[int, int, int]:
                seed = cfg.trial_seed(tree_height, trial)
                g = sample_graph(params, seed, directed=cfg.directed)
                candidates, _ = _candidate_sets(cfg, params, m, seed)
                found = 0
                for combo in candidates:
                    M = VertexSet.from_leaves(combo, params)
                    if is_externally_sparse(M, g, spec):
                        found += 1
                return found, len(candidates), int(found > 0)

            outcomes = _map_trials(run, range(cfg.trials), threads)
            total_found = sum(o[0] for o in outcomes)
            total_checked = sum(o[1] for o in outcomes)
            exist_hits = sum(o[2] for o in outcomes)
            exist_freq = exist_hits / cfg.trials
            cand_freq = total_found / total_checked
            per_set = math.exp(-0.5 * n ** (1 - alpha * m * log_b_c))
            points.append(
                TrendPoint(
                    tree_height=tree_height,
                    n=n,
                    size=m,
                    trials=cfg.trials,
                    exist_freq=exist_freq,
                    exist_se=math.sqrt(exist_freq * (1 - exist_freq) / cfg.trials),
                    candidate_freq=cand_freq,
                    candidate_se=math.sqrt(cand_freq * (1 - cand_freq) / total_checked),
                    per_set_bound=per_set,
                    union_bound=math.comb(n, m) * per_set,
                    exhaustive=n <= 20,
                    candidates_per_trial=total_checked // cfg.trials,
                )
            )
    return points


def trend_csv(cfg: ExperimentConfig, points: Iterable[TrendPoint]) -> str:
    lines = [f"# {key}={val}" for key, val in cfg.items()]
    lines.append(
        "H,n,m,trials,exist_freq,exist_se,candidate_freq,candidate_se,"
        "per_set_bound,union_bound,exhaustive,candidates_per_trial"
    )
    for pt in points:
        lines.append(
            f"{pt.tree_height},{pt.n},{pt.size},{pt.trials},"
            f"{repr(pt.exist_freq)},{repr(pt.exist_se)},"
            f"{repr(pt.candidate_freq)},{repr(pt.candidate_se)},"
            f"{repr(pt.per_set_bound)},{repr(pt.union_bound)},"
            f"{int(pt.exhaustive)},{pt.candidates_per_trial}"
        )
    return "\n".join(lines) + "\n"


# --- internal-edge statistics ------------------------------------------------


@dataclass(frozen=True)
class XsStats:
    """Empirical internal-edge statistics of complete height-h sets next
    to the analytic expectation."""

    tree_height: int
    n: int
    height: int
    trials: int
    observations: int
    emp_mean: float
    emp_var: float
    analytic_mean: float


def xs_statistics(cfg: ExperimentConfig, h: int, threads: int = 1) -> list[XsStats]:
    """Internal edge counts over all complete height-h sets of every
    trial, per tree height."""
    from .clusters import internal_edge_count

    results = []
    for tree_height in cfg.tree_heights:
        if h > tree_height:
            raise ValueError(f"height {h} exceeds tree height {tree_height}")
        params = cfg.params_for(tree_height)
        block = params.b**h

        def run(trial: int) -> tuple[int, int, int]:
            seed = cfg.trial_seed(tree_height, trial)
            g = sample_graph(params, seed, directed=cfg.directed)
            s = s2 = 0
            count = 0
            for root in range(0, params.n, block):
                M = VertexSet(tuple(range(root, root + block)), h, root)
                x = internal_edge_count(M, g)
                s += x
                s2 += x * x
                count += 1
            return s, s2, count

        outcomes = _map_trials(run, range(cfg.trials), threads)
        s = sum(o[0] for o in outcomes)
        s2 = sum(o[1] for o in outcomes)
        count = sum(o[2] for o in outcomes)
        mean = s / count
        var = s2 / count - mean * mean
        results.append(
            XsStats(
                tree_height=tree_height,
                n=params.n,
                height=h,
                trials=cfg.trials,
                observations=count,
                emp_mean=mean,
                emp_var=var,
                analytic_mean=expected_internal_edges(h, params) if h >= 1 else 0.0,
            )
        )
    return results


def xs_csv(cfg: ExperimentConfig, stats: Iterable[XsStats]) -> str:
    lines = [f"# {key}={val}" for key, val in cfg.items()]
    lines.append("H,n,h,trials,observations,emp_mean,emp_var,analytic_mean")
    for st in stats:
        lines.append(
            f"{st.tree_height},{st.n},{st.height},{st.trials},{st.observations},"
            f"{repr(st.emp_mean)},{repr(st.emp_var)},{repr(st.analytic_mean)}"
        )
    return "\n".join(lines) + "\n"
