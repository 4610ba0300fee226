"""Random spanning trees and population-balanced tree cuts.

Trees are drawn on an induced subgraph (a district, or two merged districts)
either as a random-weight minimum spanning tree or as a uniform spanning tree.
The random-weight MST is drawn by running Kruskal over a uniformly shuffled
edge list, which is distribution-identical to assigning iid continuous weights
and taking the minimum tree. The uniform tree uses Wilson's loop-erased
random walk.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import DualGraph

TREE_METHODS = ("mst", "wilson")


@dataclass
class SpanningTree:
    """Rooted spanning tree with per-subtree population sums."""

    root: int
    order: list[int]                      # preorder, order[0] == root
    parent: dict[int, int]                # root maps to -1
    children: dict[int, list[int]] = field(repr=False)
    subtree_pop: dict[int, int] = field(repr=False)
    total_pop: int = 0

    @property
    def n_nodes(self) -> int:
        return len(self.order)

    def subtree_nodes(self, node: int) -> list[int]:
        """All nodes in the subtree rooted at the given node."""
        out = []
        stack = [node]
        while stack:
            u = stack.pop()
            out.append(u)
            stack.extend(self.children[u])
        return out


def _build_tree(graph: DualGraph, root: int, adjacency: dict[int, list[int]]) -> SpanningTree:
    parent = {root: -1}
    order = [root]
    stack = [root]
    children: dict[int, list[int]] = {root: []}
    while stack:
        u = stack.pop()
        for w in adjacency[u]:
            if w not in parent:
                parent[w] = u
                children[w] = []
                children[u].append(w)
                order.append(w)
                stack.append(w)
    pop = graph.population
    subtree_pop = {u: int(pop[u]) for u in order}
    for u in reversed(order):
        p = parent[u]
        if p >= 0:
            subtree_pop[p] += subtree_pop[u]
    return SpanningTree(root=root, order=order, parent=parent, children=children,
                        subtree_pop=subtree_pop, total_pop=subtree_pop[root])


def _mst_tree(graph: DualGraph, nodes: np.ndarray, rng: np.random.Generator) -> SpanningTree:
    mask = np.zeros(graph.n_nodes, dtype=bool)
    mask[nodes] = True
    sel = mask[graph.edge_u] & mask[graph.edge_v]
    sub_u = graph.edge_u[sel]
    sub_v = graph.edge_v[sel]
    shuffled = rng.permutation(len(sub_u))

    parent_uf = {int(x): int(x) for x in nodes}

    def find(x: int) -> int:
        while parent_uf[x] != x:
            parent_uf[x] = parent_uf[parent_uf[x]]
            x = parent_uf[x]
        return x

    adjacency: dict[int, list[int]] = {int(x): [] for x in nodes}
    needed = len(nodes) - 1
    taken = 0
    for idx in shuffled:
        u = int(sub_u[idx])
        v = int(sub_v[idx])
        ru, rv = find(u), find(v)
        if ru == rv:
            continue
        parent_uf[ru] = rv
        adjacency[u].append(v)
        adjacency[v].append(u)
        taken += 1
        if taken == needed:
            break
    if taken != needed:
        raise ValueError("node subset does not induce a connected subgraph")
    return _build_tree(graph, int(nodes[0]), adjacency)


def _wilson_tree(graph: DualGraph, nodes: np.ndarray, rng: np.random.Generator) -> SpanningTree:
    node_set = {int(x) for x in nodes}
    local = {u: [w for w in graph.neighbors[u] if w in node_set] for u in node_set}
    root = int(nodes[0])
    in_tree = {root}
    nxt: dict[int, int] = {}
    for start in (int(x) for x in nodes):
        u = start
        # random walk until the growing tree is hit, remembering last exits
        while u not in in_tree:
            nbrs = local[u]
            if not nbrs:
                raise ValueError("node subset does not induce a connected subgraph")
            u2 = nbrs[int(rng.integers(len(nbrs)))]
            nxt[u] = u2
            u = u2
        # retrace with loops erased
        u = start
        while u not in in_tree:
            in_tree.add(u)
            u = nxt[u]
    if len(in_tree) != len(node_set):
        raise ValueError("node subset does not induce a connected subgraph")
    adjacency: dict[int, list[int]] = {u: [] for u in node_set}
    for u in in_tree:
        if u == root:
            continue
        v = nxt[u]
        adjacency[u].append(v)
        adjacency[v].append(u)
    return _build_tree(graph, root, adjacency)


def random_spanning_tree(graph: DualGraph, nodes, rng: np.random.Generator,
                         method: str = "mst") -> SpanningTree:
    """Draw a random spanning tree of the induced subgraph on `nodes`.

    method "mst" draws a random-weight minimum spanning tree; "wilson" draws
    a uniform spanning tree. Raises ValueError if the subset is empty or does
    not induce a connected subgraph.
    """
    nodes = np.asarray(nodes, dtype=np.int64)
    if len(nodes) == 0:
        raise ValueError("node subset is empty")
    if len(nodes) == 1:
        u = int(nodes[0])
        return _build_tree(graph, u, {u: []})
    if method == "mst":
        return _mst_tree(graph, nodes, rng)
    if method == "wilson":
        # Wilson's walk never terminates on a disconnected subset, so check
        # reachability first via the MST edge machinery cheaply.
        return _wilson_tree_checked(graph, nodes, rng)
    raise ValueError(f"unknown tree method {method!r}")


def _wilson_tree_checked(graph: DualGraph, nodes: np.ndarray,
                         rng: np.random.Generator) -> SpanningTree:
    node_set = {int(x) for x in nodes}
    seen = {int(nodes[0])}
    stack = [int(nodes[0])]
    while stack:
        u = stack.pop()
        for w in graph.neighbors[u]:
            if w in node_set and w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != len(node_set):
        raise ValueError("node subset does not induce a connected subgraph")
    return _wilson_tree(graph, nodes, rng)


def proportional_cut(tree: SpanningTree, ideal_pop: float, epsilon: float,
                     m_small: int, m_large: int,
                     rng: np.random.Generator) -> tuple[int, int] | None:
    """Pick a tree edge splitting the tree into an m_small and an m_large side.

    A cut qualifies when each side's population is within m_i * epsilon *
    ideal_pop of m_i * ideal_pop for its district budget m_i. Returns
    (child_node, child_side_budget) chosen uniformly over qualifying
    (edge, orientation) pairs, or None if none qualifies. The cut edge is
    (child_node, tree.parent[child_node]).
    """
    total = tree.total_pop
    budgets = (m_small,) if m_small == m_large else (m_small, m_large)
    candidates: list[tuple[int, int]] = []
    for c in tree.order[1:]:
        below = tree.subtree_pop[c]
        above = total - below
        for m_child in budgets:
            m_other = m_small + m_large - m_child
            if (abs(below - m_child * ideal_pop) <= m_child * epsilon * ideal_pop
                    and abs(above - m_other * ideal_pop) <= m_other * epsilon * ideal_pop):
                candidates.append((c, m_child))
    if not candidates:
        return None
    return candidates[int(rng.integers(len(candidates)))]


def find_balanced_cut(tree: SpanningTree, ideal_pop: float, epsilon: float,
                      rng: np.random.Generator) -> tuple[int, int] | None:
    """Tree edge leaving both sides within epsilon * ideal_pop of ideal_pop.

    Returns the edge as (child, parent), chosen uniformly among qualifying
    edges, or None when the tree admits no balanced cut.
    """
    pick = proportional_cut(tree, ideal_pop, epsilon, 1, 1, rng)
    if pick is None:
        return None
    child = pick[0]
    return child, tree.parent[child]
