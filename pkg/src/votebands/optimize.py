"""Competitiveness hill-climbing: Opt1/Opt2 acceptance over Flip proposals.

Each restart seeds a plan, decorrelates it with a ReCom burn-in, then runs a
stream of Flip proposals filtered in order by validity (contiguity,
population, non-emptiness), the cut-edge compactness guard, and the variant's
acceptance rule. Opt1 rejects moves that decrease the count of districts in
the target band; Opt2 accepts moves that strictly decrease the total distance
of shares to the band.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ConfigError, ZeroVoteDistrictError
from .chain import ChainConfig, recom_step, seed_partition, flip_step
from .graph import DualGraph, Partition, VotePattern
from .metrics import (BandSpec, PlanRecord, band_count, make_plan_record,
                      record_band_count)
from .tree import TREE_METHODS

VARIANTS = ("opt1", "opt2")


@dataclass(frozen=True)
class OptConfig:
    """Parameters of one optimizer run (all restarts)."""

    k: int
    epsilon: float
    variant: str = "opt1"
    recom_burnin_steps: int = 200
    flip_attempts: int = 50000
    band: BandSpec = BandSpec(5.0, 50.0)
    cut_edge_factor: float = 2.0
    restarts: int = 1
    allow_ties: bool = False
    rng_seed: int = 0
    record_bands: tuple[BandSpec, ...] = ()
    tree_method: str = "mst"
    tree_retry_limit: int = 50
    pair_retry_limit: int = 50
    seed_attempts: int = 20

    def validated(self) -> "OptConfig":
        problems = []
        if self.k < 2:
            problems.append(f"k must be >= 2, got {self.k}")
        if not (self.epsilon > 0):
            problems.append(f"epsilon must be positive, got {self.epsilon}")
        if self.variant not in VARIANTS:
            problems.append(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.recom_burnin_steps < 0:
            problems.append("recom_burnin_steps must be >= 0")
        if self.flip_attempts < 0:
            problems.append("flip_attempts must be >= 0")
        if self.cut_edge_factor < 1.0:
            problems.append(f"cut_edge_factor must be >= 1, got {self.cut_edge_factor}")
        if self.restarts < 1:
            problems.append("restarts must be >= 1")
        if self.tree_method not in TREE_METHODS:
            problems.append(f"tree_method must be one of {TREE_METHODS}")
        if not isinstance(self.rng_seed, int) or self.rng_seed < 0:
            problems.append("rng_seed must be a non-negative integer")
        if problems:
            raise ConfigError("; ".join(problems))
        return self

    def chain_config(self, rng_seed: int) -> ChainConfig:
        return ChainConfig(k=self.k, epsilon=self.epsilon,
                           steps=self.recom_burnin_steps, proposal="recom",
                           rng_seed=rng_seed, tree_method=self.tree_method,
                           tree_retry_limit=self.tree_retry_limit,
                           pair_retry_limit=self.pair_retry_limit,
                           seed_attempts=self.seed_attempts)


class TraceEntry(NamedTuple):
    """One flip attempt. Objective columns show the post-decision state."""

    attempt: int
    valid: bool
    guard_ok: bool
    accepted: bool
    band_count: int
    opt2_score: float
    cut_edges: int


@dataclass
class OptResult:
    """Outcome of a single restart."""

    restart: int
    rng_seed: int
    partition: Partition
    record: PlanRecord
    trace: list[TraceEntry]
    baseline_cut_edges: int
    accepted: int
    attempted: int


def opt1_accepts(old: PlanRecord, new: PlanRecord, band: BandSpec) -> bool:
    """Reject only decreases of the band count; ties and gains pass."""
    return record_band_count(new, band) >= record_band_count(old, band)


def opt2_score(shares, band: BandSpec) -> float:
    """Total distance of shares to the band, in percentage points."""
    s = 100.0 * np.asarray(shares, dtype=float)
    return float(np.sum(np.maximum(0.0, np.abs(s - band.z) - band.y)))


def opt2_accepts(old_score: float, new_score: float, allow_ties: bool = False) -> bool:
    """Strict decrease by default; allow_ties also passes equal scores."""
    if allow_ties:
        return new_score <= old_score
    return new_score < old_score


def cut_edge_guard(candidate: Partition, baseline_cut_edges: int,
                   factor: float = 2.0) -> bool:
    """Closed bound: candidate cut edges <= factor * baseline."""
    return candidate.cut_edge_count <= factor * baseline_cut_edges


def _partition_shares(partition: Partition) -> np.ndarray:
    total = partition.district_dem + partition.district_rep
    zero = np.flatnonzero(total == 0)
    if len(zero):
        raise ZeroVoteDistrictError(int(zero[0]))
    return partition.district_dem / total


def _objectives(partition: Partition, band: BandSpec) -> tuple[int, float]:
    shares = _partition_shares(partition)
    return band_count(shares, band), opt2_score(shares, band)


def _run_restart(graph: DualGraph, votes: VotePattern | None, cfg: OptConfig,
                 restart: int) -> OptResult:
    sub_seed = cfg.rng_seed + restart
    burn_cfg = cfg.chain_config(sub_seed)
    rng = np.random.default_rng(sub_seed)
    current = seed_partition(graph, cfg.k, cfg.epsilon, rng,
                             tree_method=cfg.tree_method,
                             tree_retry_limit=cfg.tree_retry_limit,
                             attempts=cfg.seed_attempts, votes=votes)
    for _ in range(cfg.recom_burnin_steps):
        current = recom_step(current, burn_cfg, rng)
    current = current.copy()
    baseline = current.cut_edge_count

    cur_count, cur_score = _objectives(current, cfg.band)
    trace: list[TraceEntry] = []
    accepted = 0
    for attempt in range(cfg.flip_attempts):
        prop = flip_step(current, rng, cfg.epsilon)
        if not prop.ok:
            trace.append(TraceEntry(attempt, False, False, False,
                                    cur_count, cur_score, current.cut_edge_count))
            continue
        current.move_node(prop.node, prop.to_district)
        if not cut_edge_guard(current, baseline, cfg.cut_edge_factor):
            current.move_node(prop.node, prop.from_district)
            trace.append(TraceEntry(attempt, True, False, False,
                                    cur_count, cur_score, current.cut_edge_count))
            continue
        new_count, new_score = _objectives(current, cfg.band)
        if cfg.variant == "opt1":
            take = new_count >= cur_count
        else:
            take = opt2_accepts(cur_score, new_score, cfg.allow_ties)
        if take:
            cur_count, cur_score = new_count, new_score
            accepted += 1
            trace.append(TraceEntry(attempt, True, True, True,
                                    cur_count, cur_score, current.cut_edge_count))
        else:
            current.move_node(prop.node, prop.from_district)
            trace.append(TraceEntry(attempt, True, True, False,
                                    cur_count, cur_score, current.cut_edge_count))

    bands = cfg.record_bands if cfg.band in cfg.record_bands \
        else (cfg.band,) + tuple(cfg.record_bands)
    record = make_plan_record(current, votes, step=restart, bands=bands,
                              source=cfg.variant)
    return OptResult(restart=restart, rng_seed=sub_seed, partition=current,
                     record=record, trace=trace, baseline_cut_edges=baseline,
                     accepted=accepted, attempted=cfg.flip_attempts)


def run_optimizer(graph: DualGraph, votes: VotePattern | None,
                  cfg: OptConfig) -> list[OptResult]:
    """One OptResult per restart; restart r uses rng_seed + r throughout."""
    cfg = cfg.validated()
    return [_run_restart(graph, votes, cfg, r) for r in range(cfg.restarts)]


def best_restart(results: list[OptResult], variant: str,
                 band: BandSpec) -> OptResult:
    """Highest band count for opt1, lowest distance score for opt2."""
    if variant == "opt1":
        return max(results, key=lambda r: record_band_count(r.record, band))
    return min(results, key=lambda r: opt2_score(r.record.shares, band))
