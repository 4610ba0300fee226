"""Markov chains over districting plans: ReCom and single-node Flip.

A ReCom step merges two adjacent districts, draws a random spanning tree of
the merged region, and re-splits at a population-balanced tree cut. A Flip
step moves one endpoint of a random cut edge into the neighboring district.
Proposals that cannot be completed within the retry budgets count as
self-loops: the chain stays put and the step is still emitted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import AuditError, ConfigError, InfeasibleError
from .graph import (DualGraph, Partition, VotePattern, cut_edge_indices,
                    partition_violations, subset_connected)
from .metrics import BandSpec, PlanRecord, make_plan_record
from .tree import (TREE_METHODS, find_balanced_cut, proportional_cut,
                   random_spanning_tree)

PROPOSALS = ("recom", "flip")

# Population windows are checked as |pop - m*ideal| <= m*epsilon*ideal during
# tree cuts; re-checking as a deviation ratio divides instead of multiplying,
# so allow a nanoscale relative slack.
_POP_SLACK = 1e-12


@dataclass(frozen=True)
class ChainConfig:
    """Parameters of a neutral chain run."""

    k: int
    epsilon: float
    steps: int = 0
    proposal: str = "recom"
    rng_seed: int = 0
    record_bands: tuple[BandSpec, ...] = ()
    tree_method: str = "mst"
    tree_retry_limit: int = 50
    pair_retry_limit: int = 50
    seed_attempts: int = 20
    validate: bool = False

    def validated(self) -> "ChainConfig":
        problems = []
        if self.k < 2:
            problems.append(f"k must be >= 2, got {self.k}")
        if not (self.epsilon > 0):
            problems.append(f"epsilon must be positive, got {self.epsilon}")
        if self.steps < 0:
            problems.append(f"steps must be >= 0, got {self.steps}")
        if self.proposal not in PROPOSALS:
            problems.append(f"proposal must be one of {PROPOSALS}, got {self.proposal!r}")
        if self.tree_method not in TREE_METHODS:
            problems.append(f"tree_method must be one of {TREE_METHODS}, "
                            f"got {self.tree_method!r}")
        if self.tree_retry_limit < 1 or self.pair_retry_limit < 1:
            problems.append("retry limits must be >= 1")
        if self.seed_attempts < 1:
            problems.append("seed_attempts must be >= 1")
        if not isinstance(self.rng_seed, int) or self.rng_seed < 0:
            problems.append(f"rng_seed must be a non-negative integer, got {self.rng_seed!r}")
        if problems:
            raise ConfigError("; ".join(problems))
        return self


@dataclass
class ChainStats:
    """Counters filled in by run_chain / chain_states."""

    steps: int = 0
    self_loops: int = 0
    flip_rejections: int = 0


@dataclass(frozen=True)
class FlipProposal:
    """A single-node move plus its feasibility flags.

    contiguity_ok is vacuously True when the source district would empty out;
    source_nonempty already rejects the move in that case.
    """

    node: int
    from_district: int
    to_district: int
    source_nonempty: bool
    population_ok: bool
    contiguity_ok: bool

    @property
    def ok(self) -> bool:
        return self.source_nonempty and self.population_ok and self.contiguity_ok


def seed_partition(graph: DualGraph, k: int, epsilon: float,
                   rng: np.random.Generator, tree_method: str = "mst",
                   tree_retry_limit: int = 50, attempts: int = 20,
                   votes: VotePattern | None = None) -> Partition:
    """Recursive tree-split seed: halve the district budget until single districts.

    Each split draws a spanning tree of the region and cuts it so the two
    sides' populations fit their district budgets; budget-1 sides are final
    districts and are held to |pop - ideal| <= epsilon * ideal exactly.
    Raises InfeasibleError carrying the attempt count when no valid seed is
    found.
    """
    if k < 1:
        raise ConfigError(f"k must be >= 1, got {k}")
    if graph.n_nodes < k:
        raise InfeasibleError(
            f"cannot split {graph.n_nodes} nodes into {k} nonempty districts")
    ideal = graph.total_population / k
    all_nodes = np.arange(graph.n_nodes, dtype=np.int64)

    for _ in range(attempts):
        assignment = np.full(graph.n_nodes, -1, dtype=np.int32)
        next_label = 0

        def split(region: np.ndarray, m: int) -> bool:
            nonlocal next_label
            if len(region) < m:
                return False
            if m == 1:
                assignment[region] = next_label
                next_label += 1
                return True
            m1 = m // 2
            m2 = m - m1
            for _ in range(tree_retry_limit):
                tree = random_spanning_tree(graph, region, rng, tree_method)
                pick = proportional_cut(tree, ideal, epsilon, m1, m2, rng)
                if pick is None:
                    continue
                child, m_child = pick
                below = np.asarray(tree.subtree_nodes(child), dtype=np.int64)
                below_set = set(below.tolist())
                above = np.asarray([u for u in region.tolist() if u not in below_set],
                                   dtype=np.int64)
                return split(below, m_child) and split(above, m - m_child)
            return False

        if split(all_nodes, k):
            return Partition(graph, k, assignment, votes)
    raise InfeasibleError(
        f"no seed partition found for k={k}, epsilon={epsilon} "
        f"after {attempts} attempts")


def adjacent_district_pairs(partition: Partition) -> np.ndarray:
    """Distinct district pairs (lo, hi) joined by at least one cut edge."""
    a = partition.assignment
    g = partition.graph
    cut = a[g.edge_u] != a[g.edge_v]
    du = a[g.edge_u][cut].astype(np.int64)
    dv = a[g.edge_v][cut].astype(np.int64)
    lo = np.minimum(du, dv)
    hi = np.maximum(du, dv)
    codes = np.unique(lo * partition.k + hi)
    return np.stack([codes // partition.k, codes % partition.k], axis=1)


def recom_step(partition: Partition, config: ChainConfig,
               rng: np.random.Generator) -> Partition:
    """One ReCom proposal; returns the same object if it self-loops.

    Adjacent pairs are tried in rng-shuffled order, up to pair_retry_limit
    distinct pairs with tree_retry_limit tree draws each.
    """
    pairs = adjacent_district_pairs(partition)
    order = rng.permutation(len(pairs))[:config.pair_retry_limit]
    a_arr = partition.assignment
    for idx in order:
        a = int(pairs[idx, 0])
        b = int(pairs[idx, 1])
        merged = np.flatnonzero((a_arr == a) | (a_arr == b))
        for _ in range(config.tree_retry_limit):
            tree = random_spanning_tree(partition.graph, merged, rng,
                                        config.tree_method)
            cut = find_balanced_cut(tree, partition.ideal_population,
                                    config.epsilon, rng)
            if cut is None:
                continue
            side = np.asarray(tree.subtree_nodes(cut[0]), dtype=np.int64)
            new = partition.copy()
            new.reassign_pair(a, b, merged, side)
            return new
    return partition


def evaluate_flip(partition: Partition, node: int, to_district: int,
                  epsilon: float) -> FlipProposal:
    """Feasibility flags for moving one node into an adjacent district."""
    frm = int(partition.assignment[node])
    g = partition.graph
    ideal = partition.ideal_population
    bound = epsilon * ideal * (1.0 + _POP_SLACK)
    p = int(g.population[node])
    pop_ok = (abs(int(partition.district_pop[frm]) - p - ideal) <= bound
              and abs(int(partition.district_pop[to_district]) + p - ideal) <= bound)
    nonempty = int(partition.district_size[frm]) > 1
    if nonempty:
        rest = [int(u) for u in np.flatnonzero(partition.assignment == frm)
                if u != node]
        contiguous = subset_connected(g, rest)
    else:
        contiguous = True
    return FlipProposal(node=node, from_district=frm, to_district=to_district,
                        source_nonempty=nonempty, population_ok=pop_ok,
                        contiguity_ok=contiguous)


def flip_step(partition: Partition, rng: np.random.Generator,
              epsilon: float) -> FlipProposal:
    """Propose flipping a random endpoint of a random cut edge."""
    cut = cut_edge_indices(partition)
    if len(cut) == 0:
        raise InfeasibleError("partition has no cut edges to flip across")
    e = int(cut[int(rng.integers(len(cut)))])
    u = int(partition.graph.edge_u[e])
    v = int(partition.graph.edge_v[e])
    if int(rng.integers(2)) == 0:
        node, other = u, v
    else:
        node, other = v, u
    return evaluate_flip(partition, node, int(partition.assignment[other]), epsilon)


def _check_state(partition: Partition, epsilon: float, step: int) -> None:
    problems = partition_violations(partition)
    ideal = partition.ideal_population
    dev = float(np.max(np.abs(partition.district_pop - ideal)))
    if dev > epsilon * ideal * (1.0 + _POP_SLACK):
        problems.append(f"population deviation {dev / ideal:.6f} exceeds {epsilon}")
    if problems:
        raise AuditError(f"invalid state at step {step}: " + "; ".join(problems))


def chain_states(graph: DualGraph, votes: VotePattern | None, config: ChainConfig,
                 stats: ChainStats | None = None) -> Iterator[tuple[int, Partition]]:
    """Yield (step, partition) pairs, step 0 being the seed plan.

    Yielded partitions are never mutated afterwards; self-loop steps re-yield
    the current object. Identical (graph, votes, config) give identical
    sequences.
    """
    config = config.validated()
    rng = np.random.default_rng(config.rng_seed)
    current = seed_partition(graph, config.k, config.epsilon, rng,
                             tree_method=config.tree_method,
                             tree_retry_limit=config.tree_retry_limit,
                             attempts=config.seed_attempts, votes=votes)
    if config.validate:
        current.audit()
        _check_state(current, config.epsilon, 0)
    yield 0, current
    for step in range(1, config.steps + 1):
        if config.proposal == "recom":
            new = recom_step(current, config, rng)
            if new is current and stats is not None:
                stats.self_loops += 1
            current = new
        else:
            prop = flip_step(current, rng, config.epsilon)
            if prop.ok:
                current = current.copy()
                current.move_node(prop.node, prop.to_district)
            elif stats is not None:
                stats.self_loops += 1
                stats.flip_rejections += 1
        if stats is not None:
            stats.steps += 1
        if config.validate:
            _check_state(current, config.epsilon, step)
            if step % 1000 == 0:
                current.audit()
        yield step, current


def run_chain(graph: DualGraph, votes: VotePattern | None, config: ChainConfig,
              stats: ChainStats | None = None,
              source: str = "neutral") -> Iterator[PlanRecord]:
    """Yield one PlanRecord per visited plan, self-loops included."""
    for step, partition in chain_states(graph, votes, config, stats):
        yield make_plan_record(partition, votes, step=step,
                               bands=config.record_bands, source=source)
