"""Brute-force enumeration of all valid plans on small graphs.

Serves as an independent oracle for the chain: on enumerable instances the
set of plans a long ReCom run visits must be a subset of (and eventually
equal to) this list. Enumeration is anchored: each district block must
contain the smallest remaining node index, so every unordered partition is
generated exactly once without relabeling duplicates.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigError, InfeasibleError
from .graph import DualGraph, Partition, VotePattern, canonical_key, subset_connected

DEFAULT_NODE_BUDGET = 20


def _connected_subsets(graph: DualGraph, anchor: int, allowed: frozenset[int],
                       lo: float, hi: float) -> list[tuple[frozenset[int], int]]:
    """Connected S with anchor in S subset of allowed and lo <= pop(S) <= hi.

    Classic include/exclude growth over an ordered frontier; each subset is
    reached along exactly one decision path. Branches are pruned once the
    running population exceeds hi (node populations are non-negative).
    """
    pop = graph.population
    out: list[tuple[frozenset[int], int]] = []
    start_pop = int(pop[anchor])
    if start_pop > hi:
        return out
    if start_pop >= lo:
        out.append((frozenset([anchor]), start_pop))

    def rec(cur: set[int], cur_pop: int, frontier: list[int], banned: set[int]):
        for i, v in enumerate(frontier):
            v_pop = cur_pop + int(pop[v])
            if v_pop > hi:
                continue
            new_cur = cur | {v}
            if v_pop >= lo:
                out.append((frozenset(new_cur), v_pop))
            new_banned = banned | set(frontier[:i + 1])
            tail = frontier[i + 1:]
            in_tail = set(tail)
            growth = [w for w in graph.neighbors[v]
                      if w in allowed and w not in new_cur
                      and w not in new_banned and w not in in_tail]
            rec(new_cur, v_pop, tail + growth, new_banned)

    first_frontier = [w for w in graph.neighbors[anchor] if w in allowed]
    rec({anchor}, start_pop, first_frontier, set())
    return out


def enumerate_partitions(graph: DualGraph, k: int, epsilon: float,
                         node_budget: int = DEFAULT_NODE_BUDGET,
                         votes: VotePattern | None = None) -> list[Partition]:
    """Every contiguous, nonempty, epsilon-balanced k-partition, once each.

    Results are sorted by canonical key. Returns [] when k exceeds the node
    count; raises InfeasibleError when the graph exceeds the node budget.
    """
    if k < 1:
        raise ConfigError(f"k must be >= 1, got {k}")
    if epsilon < 0:
        raise ConfigError(f"epsilon must be >= 0, got {epsilon}")
    if graph.n_nodes > node_budget:
        raise InfeasibleError(
            f"graph has {graph.n_nodes} nodes, over the enumeration budget "
            f"of {node_budget}")
    if k > graph.n_nodes:
        return []

    ideal = graph.total_population / k
    # Same closed window the chain's tree cuts use, so the oracle and the
    # chain agree on boundary plans.
    lo = ideal - epsilon * ideal
    hi = ideal + epsilon * ideal
    results: list[Partition] = []
    blocks: list[frozenset[int]] = []

    def rec(remaining: frozenset[int], rem_pop: int, m: int):
        if m == 1:
            if lo <= rem_pop <= hi and subset_connected(graph, remaining):
                assignment = np.empty(graph.n_nodes, dtype=np.int32)
                for d, block in enumerate(blocks + [remaining]):
                    for u in block:
                        assignment[u] = d
                results.append(Partition(graph, k, assignment, votes))
            return
        anchor = min(remaining)
        for block, block_pop in _connected_subsets(graph, anchor, remaining, lo, hi):
            rest_pop = rem_pop - block_pop
            if not ((m - 1) * lo <= rest_pop <= (m - 1) * hi):
                continue
            rest = remaining - block
            if len(rest) < m - 1:
                continue
            blocks.append(block)
            rec(rest, rest_pop, m - 1)
            blocks.pop()

    all_nodes = frozenset(range(graph.n_nodes))
    rec(all_nodes, graph.total_population, k)
    results.sort(key=lambda p: repr(canonical_key(p)))
    return results
