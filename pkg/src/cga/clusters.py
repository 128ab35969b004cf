"""Exact cluster verification.

A set M is internally dense when every member has at least beta*|M| edges
into M, and externally sparse when every non-member has at most alpha*|M|
edges into M; a cluster is both.  The sparseness condition splits into
three events over a partition of the complement: E1 over S(M) \\ M (the
rest of M's minimal complete set), E2 over S(M, h*) \\ S(M), and E3 over
the rest of the graph, for any admissible splitting height h*.

Thresholds alpha*|M| and beta*|M| are compared as exact rationals, so
boundary cases like 1 >= 0.5 * 2 never depend on float rounding.  Pass
alpha and beta as decimal strings for exact decimal semantics; floats are
used at their exact binary value.

With beta > 0 a singleton is never internally dense (0 >= beta fails), a
deliberate consequence of measuring density against |M| including the
vertex itself.  No relation between alpha and beta is enforced; note that
connectivity of a cluster is only guaranteed for beta >= 1/2.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, NamedTuple

from .generator import Graph
from .tree import TreeParams, VertexSet

Mode = Literal["undirected", "directed-out"]

SHORT_THICK = "short-thick"
TALL_THICK = "tall-thick"
NEITHER = "neither"


def as_fraction(x) -> Fraction:
    """Exact rational from a decimal string, int, Fraction, or float (the
    float's exact binary value)."""
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


@dataclass(frozen=True)
class ClusterSpec:
    """Density/sparseness parameters and the edge-direction convention."""

    alpha: Fraction
    beta: Fraction
    mode: Mode = "undirected"

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", as_fraction(self.alpha))
        object.__setattr__(self, "beta", as_fraction(self.beta))
        if not 0 < self.alpha <= 1:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not 0 < self.beta <= 1:
            raise ValueError(f"beta must lie in (0, 1], got {self.beta}")
        if self.mode not in ("undirected", "directed-out"):
            raise ValueError(f"unknown mode {self.mode!r}")


class Witness(NamedTuple):
    """A vertex violating one of the defining properties."""

    event: str  # "D", "E1", "E2" or "E3"
    vertex: int
    edges: int


@dataclass(frozen=True)
class EventReport:
    """Outcome of the density event D and sparseness events E1/E2/E3 for
    one set at one splitting height, with the smallest-index violator per
    failed event."""

    dense: bool
    e1: bool
    e2: bool
    e3: bool
    h_star_used: int
    witnesses: tuple[Witness, ...] = ()

    @property
    def witness(self) -> Witness | None:
        return self.witnesses[0] if self.witnesses else None

    @property
    def externally_sparse(self) -> bool:
        return self.e1 and self.e2 and self.e3

    @property
    def is_cluster(self) -> bool:
        return self.dense and self.externally_sparse


def _as_set(M, g: Graph) -> VertexSet:
    if isinstance(M, VertexSet):
        return M
    return VertexSet.from_leaves(M, g.params)


def _check_mode(g: Graph, mode: Mode) -> None:
    if mode == "undirected" and g.directed:
        raise ValueError("undirected verification requires an undirected graph")
    if mode not in ("undirected", "directed-out"):
        raise ValueError(f"unknown mode {mode!r}")


def edges_to_set(v: int, M, g: Graph, mode: Mode = "undirected") -> int:
    """Number of edges between v and M (arcs from v into M in directed-out
    mode), never counting v itself."""
    _check_mode(g, mode)
    M = _as_set(M, g)
    if not M.members:
        raise ValueError("edge count against the empty set is undefined")
    nb = g.neighbors(v)
    ms = M.member_set
    if len(nb) <= len(ms):
        return sum(1 for w in nb if w in ms)
    count = 0
    for w in M.members:
        if w == v:
            continue
        i = bisect_left(nb, w)
        if i < len(nb) and nb[i] == w:
            count += 1
    return count


def _incoming_counts(M: VertexSet, g: Graph, mode: Mode) -> dict[int, int]:
    """e(u, M) for every u with at least one edge (arc) into M; vertices
    absent from the map have count 0.  Members included."""
    counts: dict[int, int] = {}
    source = g.in_neighbors if (mode == "directed-out" and g.directed) else g.neighbors
    for m in M.members:
        for u in source(m):
            counts[u] = counts.get(u, 0) + 1
    return counts


def is_internally_dense(M, g: Graph, spec: ClusterSpec) -> bool:
    """True when every member v of M has edges_to_set(v, M) >= beta * |M|."""
    _check_mode(g, spec.mode)
    M = _as_set(M, g)
    if not M.members:
        raise ValueError("density of the empty set is undefined")
    threshold = spec.beta * len(M.members)
    return all(edges_to_set(v, M, g, spec.mode) >= threshold for v in M.members)


def is_externally_sparse(M, g: Graph, spec: ClusterSpec) -> bool:
    """True when every non-member u has edges_to_set(u, M) <= alpha * |M|.

    Only vertices with at least one edge into M can violate the condition
    (alpha > 0), so the scan touches edges incident to M, not all n
    vertices.
    """
    _check_mode(g, spec.mode)
    M = _as_set(M, g)
    if not M.members:
        raise ValueError("sparseness of the empty set is undefined")
    threshold = spec.alpha * len(M.members)
    counts = _incoming_counts(M, g, spec.mode)
    ms = M.member_set
    return all(cnt <= threshold for u, cnt in counts.items() if u not in ms)


def is_cluster(M, g: Graph, spec: ClusterSpec) -> bool:
    """Internally dense and externally sparse."""
    M = _as_set(M, g)
    return is_internally_dense(M, g, spec) and is_externally_sparse(M, g, spec)


def event_report(M, g: Graph, spec: ClusterSpec, h_star: int) -> EventReport:
    """Evaluate D, E1, E2 and E3 exactly at splitting height h_star.

    E1 covers S(M) \\ M, E2 covers S(M, h_star) \\ S(M), E3 the rest of
    the graph; their conjunction is exactly external sparseness for any
    set_height(M) <= h_star <= H.
    """
    _check_mode(g, spec.mode)
    M = _as_set(M, g)
    if not M.members:
        raise ValueError("event report for the empty set is undefined")
    p = g.params
    if not M.height <= h_star <= p.H:
        raise ValueError(
            f"h_star must lie in [{M.height}, {p.H}], got {h_star}"
        )
    m = len(M.members)
    beta_thresh = spec.beta * m
    alpha_thresh = spec.alpha * m

    witnesses: list[Witness] = []

    dense = True
    for v in M.members:  # ascending, so the first failure is the witness
        cnt = edges_to_set(v, M, g, spec.mode)
        if cnt < beta_thresh:
            dense = False
            witnesses.append(Witness("D", v, cnt))
            break

    s_block = p.b ** M.height
    s_lo, s_hi = M.root, M.root + s_block
    star_block = p.b ** h_star
    star_lo = (M.root // star_block) * star_block
    star_hi = star_lo + star_block

    counts = _incoming_counts(M, g, spec.mode)
    ms = M.member_set
    region_violation: dict[str, Witness] = {}
    for u in sorted(counts):
        if u in ms or counts[u] <= alpha_thresh:
            continue
        if s_lo <= u < s_hi:
            event = "E1"
        elif star_lo <= u < star_hi:
            event = "E2"
        else:
            event = "E3"
        if event not in region_violation:
            region_violation[event] = Witness(event, u, counts[u])
    for event in ("E1", "E2", "E3"):
        if event in region_violation:
            witnesses.append(region_violation[event])
    return EventReport(
        dense=dense,
        e1="E1" not in region_violation,
        e2="E2" not in region_violation,
        e3="E3" not in region_violation,
        h_star_used=h_star,
        witnesses=tuple(witnesses),
    )


def internal_edge_count(S, g: Graph) -> int:
    """Number of edges with both endpoints in S (arcs counted once)."""
    S = _as_set(S, g)
    ms = S.member_set
    total = 0
    for v in S.members:
        nb = g.neighbors(v)
        if len(nb) <= len(ms):
            total += sum(1 for w in nb if w in ms)
        else:
            lo = bisect_left(nb, S.members[0])
            total += sum(1 for w in nb[lo:] if w in ms)
    return total if g.directed else total // 2


def sparse_core(M, g: Graph, fraction, mode: Mode | None = None) -> VertexSet:
    """The members of M with at most fraction * |M| edges into M.

    May be empty.  Shrinks weakly as the fraction decreases.
    """
    M = _as_set(M, g)
    if not M.members:
        raise ValueError("sparse core of the empty set is undefined")
    f = as_fraction(fraction)
    if not 0 < f <= 1:
        raise ValueError(f"fraction must lie in (0, 1], got {fraction!r}")
    if mode is None:
        mode = "directed-out" if g.directed else "undirected"
    threshold = f * len(M.members)
    kept = [v for v in M.members if edges_to_set(v, M, g, mode) <= threshold]
    return VertexSet.from_leaves(kept, g.params)


def classify_thick(M, params: TreeParams, epsilon: float) -> str:
    """Classify a set as short-thick, tall-thick, or neither.

    Short: height <= (1/2 + eps) * ln ln n / ln b and size >=
    (ln n)**(1/2 + eps/3).  Tall: height <= sqrt(ln n) / ln b and size >=
    (ln n)**(1/2 + eps/2).  Thresholds stay real-valued; integer heights
    are compared against them directly.  Requires n >= 3 and eps > 0.
    """
    if params.n < 3:
        raise ValueError("thick-set thresholds require n >= 3")
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon!r}")
    if isinstance(M, VertexSet):
        height, size = M.height, len(M.members)
    else:
        members = VertexSet.from_leaves(M, params)
        height, size = members.height, len(members.members)
    ln_n = math.log(params.n)
    ln_b = math.log(params.b)
    h_eps = (0.5 + epsilon) * math.log(ln_n) / ln_b
    if height <= h_eps and size >= ln_n ** (0.5 + epsilon / 3):
        return SHORT_THICK
    if height <= math.sqrt(ln_n) / ln_b and size >= ln_n ** (0.5 + epsilon / 2):
        return TALL_THICK
    return NEITHER
