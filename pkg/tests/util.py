"""Independent oracles shared by the test modules.

Everything here recomputes model quantities from first principles (digit
strings, ancestor walks, explicit pair enumeration, exact rational
arithmetic) so the tests never trust the code path they are checking.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations


def to_digits(x: int, b: int, H: int) -> list[int]:
    """Base-b digit string of x, length H, most significant digit first."""
    out = []
    for _ in range(H):
        out.append(x % b)
        x //= b
    return out[::-1]


def digit_height(u: int, v: int, b: int, H: int) -> int:
    """Pair height via explicit digit strings: H minus the longest common
    prefix length."""
    du, dv = to_digits(u, b, H), to_digits(v, b, H)
    lcp = 0
    for a, c in zip(du, dv):
        if a != c:
            break
        lcp += 1
    return H - lcp


def ancestor_walk_distance(u: int, v: int, b: int, H: int) -> int:
    """Edge distance between two leaves in the explicit tree: climb both
    ancestor chains to the first common node."""
    for k in range(H + 1):
        if u // b**k == v // b**k:
            return 2 * k
    raise AssertionError("no common ancestor below the root")


def all_pair_probs(b: int, H: int, c: float) -> dict[tuple[int, int], float]:
    """Edge probability for every unordered pair, from the digit oracle."""
    n = b**H
    return {
        (u, v): c ** -digit_height(u, v, b, H)
        for u, v in combinations(range(n), 2)
    }


def naive_is_cluster(members, g, alpha: Fraction, beta: Fraction) -> bool:
    """Cluster check straight from the definition, via has_edge over all
    pairs and exact rational thresholds.  Out-neighbor counting when the
    graph is directed."""
    members = tuple(sorted(members))
    mset = set(members)
    m = len(members)
    for v in members:
        e = sum(1 for w in members if w != v and g.has_edge(v, w))
        if Fraction(e) < beta * m:
            return False
    for u in range(g.params.n):
        if u in mset:
            continue
        e = sum(1 for w in members if g.has_edge(u, w))
        if Fraction(e) > alpha * m:
            return False
    return True


def exact_binom_tail(n: int, p: Fraction, k0: int) -> Fraction:
    """Pr(Bin(n, p) >= k0) in exact rational arithmetic."""
    if k0 <= 0:
        return Fraction(1)
    q = 1 - p
    return sum(
        (math.comb(n, k) * p**k * q ** (n - k) for k in range(k0, n + 1)),
        Fraction(0),
    )
