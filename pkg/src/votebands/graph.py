"""Dual graph, vote patterns, and district partitions.

A districting problem is a connected undirected graph whose nodes are
geographic units carrying a population and two-party vote counts. A plan is a
partition of the nodes into k nonempty, connected districts. Partitions cache
per-district integer tallies so chain steps stay cheap; the caches are exact
(integer arithmetic only) and can be checked against a from-scratch
recomputation with :meth:`Partition.audit`.

Graph documents are JSON::

    {"nodes": [{"id": ..., "population": int, "dem": int, "rep": int}, ...],
     "edges": [[id, id], ...]}

Alternate vote patterns are JSON overlays keyed by the same node ids::

    {"<id>": {"dem": int, "rep": int}, ...}
"""

from __future__ import annotations

import json
from collections import deque
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import AuditError, DataError, ZeroVoteDistrictError

NodeId = str | int

_NODE_FIELDS = ("population", "dem", "rep")


def _as_count(value, what: str) -> int:
    """Coerce a JSON value to a non-negative integer, rejecting bools/floats."""
    if isinstance(value, bool) or not isinstance(value, int):
        raise DataError(f"{what} must be a non-negative integer, got {value!r}")
    if value < 0:
        raise DataError(f"{what} must be non-negative, got {value}")
    return value


class DualGraph:
    """Immutable adjacency structure with node attributes.

    Nodes keep their document order; edges are normalized to index pairs
    (u, v) with u < v and sorted lexicographically, so a graph serializes
    identically regardless of input edge order.
    """

    def __init__(self, ids: Sequence[NodeId], population: Iterable[int],
                 dem: Iterable[int], rep: Iterable[int],
                 edges: Iterable[tuple[int, int]]):
        self.ids: tuple[NodeId, ...] = tuple(ids)
        self.index: dict[NodeId, int] = {v: i for i, v in enumerate(self.ids)}
        if len(self.index) != len(self.ids):
            seen: set[NodeId] = set()
            for v in self.ids:
                if v in seen:
                    raise DataError(f"duplicate node id {v!r}")
                seen.add(v)
        self.population = np.asarray(list(population), dtype=np.int64)
        self.dem = np.asarray(list(dem), dtype=np.int64)
        self.rep = np.asarray(list(rep), dtype=np.int64)
        n = len(self.ids)
        if self.population.shape != (n,) or self.dem.shape != (n,) or self.rep.shape != (n,):
            raise DataError("node attribute arrays must match the node count")

        norm: set[tuple[int, int]] = set()
        for u, v in edges:
            if u == v:
                raise DataError(f"self-loop on node {self.ids[u]!r}")
            e = (u, v) if u < v else (v, u)
            if e in norm:
                raise DataError(
                    f"duplicate edge between {self.ids[e[0]]!r} and {self.ids[e[1]]!r}")
            norm.add(e)
        self.edges = np.array(sorted(norm), dtype=np.int32).reshape(-1, 2)
        self.edge_u = self.edges[:, 0]
        self.edge_v = self.edges[:, 1]

        self.neighbors: list[list[int]] = [[] for _ in range(n)]
        for u, v in self.edges:
            self.neighbors[int(u)].append(int(v))
            self.neighbors[int(v)].append(int(u))

        if int(self.population.sum()) <= 0:
            raise DataError("total population must be positive")
        unreached = self._unreached_from(0)
        if unreached is not None:
            raise DataError(f"graph is disconnected: node {self.ids[unreached]!r} "
                            "is unreachable from the first node")

    def _unreached_from(self, start: int) -> int | None:
        """Return the index of an unreachable node, or None if connected."""
        n = len(self.ids)
        if n == 0:
            raise DataError("graph has no nodes")
        seen = np.zeros(n, dtype=bool)
        seen[start] = True
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in self.neighbors[u]:
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
        missing = np.flatnonzero(~seen)
        return int(missing[0]) if len(missing) else None

    @property
    def n_nodes(self) -> int:
        return len(self.ids)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def total_population(self) -> int:
        return int(self.population.sum())

    def votes(self) -> "VotePattern":
        """Vote pattern from the graph's own dem/rep columns."""
        return VotePattern(self, self.dem, self.rep)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DualGraph):
            return NotImplemented
        return (self.ids == other.ids
                and np.array_equal(self.population, other.population)
                and np.array_equal(self.dem, other.dem)
                and np.array_equal(self.rep, other.rep)
                and np.array_equal(self.edges, other.edges))

    def __repr__(self) -> str:
        return f"DualGraph(n_nodes={self.n_nodes}, n_edges={self.n_edges})"


def load_graph(source: str | Path | Mapping) -> DualGraph:
    """Load and validate a graph document from a path or an in-memory mapping.

    Raises DataError naming the offending node or edge for schema violations,
    duplicate ids/edges, self-loops, unknown endpoints, and disconnectedness.
    """
    if isinstance(source, (str, Path)):
        try:
            with open(source, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except FileNotFoundError:
            raise DataError(f"graph file not found: {source}")
        except json.JSONDecodeError as exc:
            raise DataError(f"graph file is not valid JSON: {exc}")
    else:
        doc = source
    if not isinstance(doc, Mapping) or "nodes" not in doc or "edges" not in doc:
        raise DataError("graph document must be an object with 'nodes' and 'edges'")
    nodes = doc["nodes"]
    if not isinstance(nodes, list) or not nodes:
        raise DataError("'nodes' must be a non-empty list")

    ids: list[NodeId] = []
    pop: list[int] = []
    dem: list[int] = []
    rep: list[int] = []
    seen: set[NodeId] = set()
    for entry in nodes:
        if not isinstance(entry, Mapping) or "id" not in entry:
            raise DataError(f"node entry missing 'id': {entry!r}")
        nid = entry["id"]
        if isinstance(nid, bool) or not isinstance(nid, (str, int)):
            raise DataError(f"node id must be a string or integer, got {nid!r}")
        if nid in seen:
            raise DataError(f"duplicate node id {nid!r}")
        seen.add(nid)
        for field in _NODE_FIELDS:
            if field not in entry:
                raise DataError(f"node {nid!r} missing '{field}'")
        ids.append(nid)
        pop.append(_as_count(entry["population"], f"node {nid!r} population"))
        dem.append(_as_count(entry["dem"], f"node {nid!r} dem"))
        rep.append(_as_count(entry["rep"], f"node {nid!r} rep"))

    index = {v: i for i, v in enumerate(ids)}
    edge_idx: list[tuple[int, int]] = []
    raw_edges = doc["edges"]
    if not isinstance(raw_edges, list):
        raise DataError("'edges' must be a list of id pairs")
    for pair in raw_edges:
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise DataError(f"edge must be a pair of node ids, got {pair!r}")
        u, v = pair
        if u not in index:
            raise DataError(f"edge endpoint {u!r} is not a node id")
        if v not in index:
            raise DataError(f"edge endpoint {v!r} is not a node id")
        edge_idx.append((index[u], index[v]))

    graph = DualGraph(ids, pop, dem, rep, edge_idx)
    if int(graph.dem.sum()) + int(graph.rep.sum()) <= 0:
        raise DataError("statewide two-party vote total must be positive")
    return graph


def serialize_graph(graph: DualGraph) -> dict:
    """Graph document for :func:`load_graph`; round-trips to an equal graph."""
    return {
        "nodes": [
            {"id": graph.ids[i], "population": int(graph.population[i]),
             "dem": int(graph.dem[i]), "rep": int(graph.rep[i])}
            for i in range(graph.n_nodes)
        ],
        "edges": [[graph.ids[int(u)], graph.ids[int(v)]] for u, v in graph.edges],
    }


class VotePattern:
    """Two-party vote counts aligned to a graph's node order."""

    def __init__(self, graph: DualGraph, dem: Iterable[int], rep: Iterable[int]):
        self.graph = graph
        self.dem = np.asarray(list(dem), dtype=np.int64)
        self.rep = np.asarray(list(rep), dtype=np.int64)
        n = graph.n_nodes
        if self.dem.shape != (n,) or self.rep.shape != (n,):
            raise DataError("vote arrays must match the node count")
        if np.any(self.dem < 0) or np.any(self.rep < 0):
            raise DataError("vote counts must be non-negative")
        if self.total_votes <= 0:
            raise DataError("statewide two-party vote total must be positive")

    @property
    def total_dem(self) -> int:
        return int(self.dem.sum())

    @property
    def total_votes(self) -> int:
        return int(self.dem.sum()) + int(self.rep.sum())


def load_votes(graph: DualGraph, source: str | Path | Mapping) -> VotePattern:
    """Load a vote overlay document; keys must cover the graph's ids exactly."""
    if isinstance(source, (str, Path)):
        try:
            with open(source, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except FileNotFoundError:
            raise DataError(f"vote overlay file not found: {source}")
        except json.JSONDecodeError as exc:
            raise DataError(f"vote overlay is not valid JSON: {exc}")
    else:
        doc = source
    if not isinstance(doc, Mapping):
        raise DataError("vote overlay must be an object keyed by node id")
    # JSON object keys are strings; match integer node ids by their str form.
    str_index = {str(v): i for i, v in enumerate(graph.ids)}
    dem = np.zeros(graph.n_nodes, dtype=np.int64)
    rep = np.zeros(graph.n_nodes, dtype=np.int64)
    filled = np.zeros(graph.n_nodes, dtype=bool)
    for key, entry in doc.items():
        i = str_index.get(str(key))
        if i is None:
            raise DataError(f"vote overlay key {key!r} is not a node id")
        if filled[i]:
            raise DataError(f"vote overlay repeats node {key!r}")
        if not isinstance(entry, Mapping) or "dem" not in entry or "rep" not in entry:
            raise DataError(f"vote overlay entry for {key!r} must have 'dem' and 'rep'")
        dem[i] = _as_count(entry["dem"], f"overlay {key!r} dem")
        rep[i] = _as_count(entry["rep"], f"overlay {key!r} rep")
        filled[i] = True
    if not filled.all():
        missing = graph.ids[int(np.flatnonzero(~filled)[0])]
        raise DataError(f"vote overlay missing node {missing!r}")
    return VotePattern(graph, dem, rep)


class Partition:
    """Assignment of nodes to districts 0..k-1 with cached integer tallies.

    The cached fields (district populations, vote tallies, node counts, cut
    edge count) are maintained incrementally by the chain and optimizer moves
    and are exact by construction; :meth:`audit` recomputes them from the
    assignment and raises AuditError on any mismatch.
    """

    def __init__(self, graph: DualGraph, k: int, assignment: np.ndarray,
                 votes: VotePattern | None = None):
        self.graph = graph
        self.k = int(k)
        self.votes = votes if votes is not None else graph.votes()
        self.assignment = np.asarray(assignment, dtype=np.int32)
        if self.assignment.shape != (graph.n_nodes,):
            raise DataError("assignment must cover every node exactly once")
        if self.k < 1:
            raise DataError(f"district count must be >= 1, got {k}")
        if self.assignment.min() < 0 or self.assignment.max() >= self.k:
            bad = int(np.flatnonzero(
                (self.assignment < 0) | (self.assignment >= self.k))[0])
            raise DataError(
                f"node {graph.ids[bad]!r} assigned to district "
                f"{int(self.assignment[bad])}, outside 0..{self.k - 1}")
        self._recompute_caches()

    @classmethod
    def from_assignment(cls, graph: DualGraph, k: int,
                        assignment: Mapping[NodeId, int] | Sequence[int] | np.ndarray,
                        votes: VotePattern | None = None) -> "Partition":
        """Build from an {id: district} mapping or an index-aligned sequence."""
        if isinstance(assignment, Mapping):
            arr = np.full(graph.n_nodes, -1, dtype=np.int32)
            for nid, d in assignment.items():
                i = graph.index.get(nid)
                if i is None:
                    # JSON round-trips integer ids through strings
                    i = graph.index.get(_maybe_int(nid))
                if i is None:
                    raise DataError(f"assignment key {nid!r} is not a node id")
                arr[i] = int(d)
            if np.any(arr < 0):
                missing = graph.ids[int(np.flatnonzero(arr < 0)[0])]
                raise DataError(f"assignment missing node {missing!r}")
        else:
            arr = np.asarray(assignment, dtype=np.int32)
        return cls(graph, k, arr, votes)

    def _recompute_caches(self) -> None:
        a = self.assignment
        k = self.k
        self.district_size = np.bincount(a, minlength=k).astype(np.int64)
        self.district_pop = np.zeros(k, dtype=np.int64)
        np.add.at(self.district_pop, a, self.graph.population)
        self.district_dem = np.zeros(k, dtype=np.int64)
        self.district_rep = np.zeros(k, dtype=np.int64)
        np.add.at(self.district_dem, a, self.votes.dem)
        np.add.at(self.district_rep, a, self.votes.rep)
        self.cut_edge_count = int(np.count_nonzero(
            a[self.graph.edge_u] != a[self.graph.edge_v]))

    @property
    def ideal_population(self) -> float:
        return self.graph.total_population / self.k

    def copy(self) -> "Partition":
        new = object.__new__(Partition)
        new.graph = self.graph
        new.k = self.k
        new.votes = self.votes
        new.assignment = self.assignment.copy()
        new.district_size = self.district_size.copy()
        new.district_pop = self.district_pop.copy()
        new.district_dem = self.district_dem.copy()
        new.district_rep = self.district_rep.copy()
        new.cut_edge_count = self.cut_edge_count
        return new

    def district_nodes(self, d: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == d)

    def reassign_pair(self, a: int, b: int, merged: np.ndarray,
                      side_a: np.ndarray) -> None:
        """Relabel the merged node set: side_a -> a, the rest -> b.

        Tallies for a and b are rebuilt from integer sums over the node sets;
        all other districts are untouched.
        """
        g = self.graph
        self.assignment[merged] = b
        self.assignment[side_a] = a
        merged_pop = int(g.population[merged].sum())
        merged_dem = int(self.votes.dem[merged].sum())
        merged_rep = int(self.votes.rep[merged].sum())
        pop_a = int(g.population[side_a].sum())
        dem_a = int(self.votes.dem[side_a].sum())
        rep_a = int(self.votes.rep[side_a].sum())
        self.district_pop[a] = pop_a
        self.district_pop[b] = merged_pop - pop_a
        self.district_dem[a] = dem_a
        self.district_dem[b] = merged_dem - dem_a
        self.district_rep[a] = rep_a
        self.district_rep[b] = merged_rep - rep_a
        self.district_size[a] = len(side_a)
        self.district_size[b] = len(merged) - len(side_a)
        self.cut_edge_count = int(np.count_nonzero(
            self.assignment[g.edge_u] != self.assignment[g.edge_v]))

    def move_node(self, node: int, to: int) -> None:
        """Reassign one node, updating tallies in place."""
        g = self.graph
        frm = int(self.assignment[node])
        self.assignment[node] = to
        p = int(g.population[node])
        d = int(self.votes.dem[node])
        r = int(self.votes.rep[node])
        self.district_pop[frm] -= p
        self.district_pop[to] += p
        self.district_dem[frm] -= d
        self.district_dem[to] += d
        self.district_rep[frm] -= r
        self.district_rep[to] += r
        self.district_size[frm] -= 1
        self.district_size[to] += 1
        delta = 0
        for w in g.neighbors[node]:
            dw = self.assignment[w]
            if dw == frm:
                delta += 1
            elif dw == to:
                delta -= 1
        self.cut_edge_count += delta

    def audit(self) -> None:
        """Raise AuditError if any cached field disagrees with the assignment."""
        fresh = Partition(self.graph, self.k, self.assignment, self.votes)
        for name in ("district_size", "district_pop", "district_dem", "district_rep"):
            if not np.array_equal(getattr(self, name), getattr(fresh, name)):
                raise AuditError(f"cached {name} disagrees with recomputation")
        if self.cut_edge_count != fresh.cut_edge_count:
            raise AuditError("cached cut_edge_count disagrees with recomputation")


def _maybe_int(value):
    if isinstance(value, str):
        try:
            return int(value)
        except ValueError:
            return value
    return value


def subset_connected(graph: DualGraph, nodes: Iterable[int]) -> bool:
    """True if the induced subgraph on the given node indices is connected."""
    node_set = set(int(x) for x in nodes)
    if not node_set:
        return False
    start = next(iter(node_set))
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in graph.neighbors[u]:
            if w in node_set and w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == len(node_set)


def partition_violations(partition: Partition) -> list[str]:
    """Structural violations: empty or disconnected districts, by district id."""
    msgs = []
    for d in range(partition.k):
        if partition.district_size[d] == 0:
            msgs.append(f"district {d} is empty")
    a = partition.assignment
    for d in range(partition.k):
        if partition.district_size[d] == 0:
            continue
        nodes = np.flatnonzero(a == d)
        if not subset_connected(partition.graph, nodes):
            msgs.append(f"district {d} is disconnected")
    return msgs


def is_valid_partition(partition: Partition) -> bool:
    """Every district nonempty and connected."""
    return not partition_violations(partition)


def cut_edges(partition: Partition) -> int:
    """Number of graph edges whose endpoints lie in different districts."""
    a = partition.assignment
    g = partition.graph
    return int(np.count_nonzero(a[g.edge_u] != a[g.edge_v]))


def cut_edge_indices(partition: Partition) -> np.ndarray:
    """Indices into graph.edges of the current cut edges."""
    a = partition.assignment
    g = partition.graph
    return np.flatnonzero(a[g.edge_u] != a[g.edge_v])


def population_deviation(partition: Partition) -> float:
    """Largest per-district |population - ideal| / ideal."""
    ideal = partition.ideal_population
    return float(np.max(np.abs(partition.district_pop - ideal)) / ideal)


def district_tallies(partition: Partition,
                     votes: VotePattern | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Exact per-district (dem, rep) vote tallies as int64 arrays.

    Uses the partition's cached tallies when the vote pattern is the one the
    partition was built with; otherwise accumulates fresh integer sums.
    """
    if votes is None or votes is partition.votes:
        return partition.district_dem, partition.district_rep
    if votes.graph is not partition.graph:
        raise DataError("vote pattern belongs to a different graph")
    dem = np.zeros(partition.k, dtype=np.int64)
    rep = np.zeros(partition.k, dtype=np.int64)
    np.add.at(dem, partition.assignment, votes.dem)
    np.add.at(rep, partition.assignment, votes.rep)
    return dem, rep


def district_shares(partition: Partition, votes: VotePattern | None = None,
                    order: str = "ascending") -> np.ndarray:
    """Per-district Dem share of the two-party vote.

    Shares are sorted ascending by default; order="district" keeps district-id
    order. Raises ZeroVoteDistrictError if any district has no two-party votes.
    """
    dem, rep = district_tallies(partition, votes)
    total = dem + rep
    zero = np.flatnonzero(total == 0)
    if len(zero):
        raise ZeroVoteDistrictError(int(zero[0]))
    shares = dem / total
    if order == "ascending":
        return np.sort(shares)
    if order == "district":
        return shares
    raise ValueError(f"order must be 'ascending' or 'district', got {order!r}")


def canonical_key(partition: Partition) -> tuple:
    """Label-independent identity: sorted tuple of sorted district id-tuples."""
    blocks: list[list[NodeId]] = [[] for _ in range(partition.k)]
    for i, d in enumerate(partition.assignment):
        blocks[int(d)].append(partition.graph.ids[i])
    return tuple(sorted((tuple(sorted(b, key=repr)) for b in blocks), key=repr))
