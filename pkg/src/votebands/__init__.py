"""Districting-plan ensembles, competitiveness bands, and partisan metrics.

The pipeline: load or synthesize a dual graph, sample plans with a ReCom or
Flip Markov chain (or hill-climb for competitive districts), score every plan
(vote bands, seats, efficiency gap, mean-median), then winnow and summarize
the ensemble into figure-ready CSV series.
"""

__version__ = "0.1.0"

from .errors import (AuditError, ConfigError, DataError, InfeasibleError,
                     VotebandsError, ZeroVoteDistrictError)
from .graph import (DualGraph, Partition, VotePattern, canonical_key,
                    cut_edges, district_shares, district_tallies,
                    is_valid_partition, load_graph, load_votes,
                    partition_violations, population_deviation,
                    serialize_graph, subset_connected)
from .metrics import (BandSpec, CompressionSpec, PlanRecord, SwingPoint,
                      band_count, efficiency_gap, eg_swing_band_requirement,
                      eg_swing_profile, in_band, is_compressed,
                      make_plan_record, mean_median, prescribed_seats,
                      record_band_count, seats, sliding_band_curve,
                      statewide_share, swing_profile_from_shares,
                      turnout_noise, uniform_swing)
from .tree import SpanningTree, find_balanced_cut, random_spanning_tree
from .chain import (ChainConfig, ChainStats, FlipProposal, chain_states,
                    evaluate_flip, flip_step, recom_step, run_chain,
                    seed_partition)
from .optimize import (OptConfig, OptResult, TraceEntry, best_restart,
                       cut_edge_guard, opt1_accepts, opt2_accepts, opt2_score,
                       run_optimizer)
from .analysis import (BoxStats, EnsembleSummary, MMHistogram, ScatterPoint,
                       ScatterResult, compression_feasibility, mm_histogram,
                       seats_vs_band_scatter, summarize, summary_to_dict,
                       winnow)
from .exhaustive import enumerate_partitions
from .records_io import (assignment_document, partition_from_document,
                         read_records, write_records, write_stamp)
from .synth import synth_grid

# The CLI layer (RunManifest, run, main) lives in votebands.cli and is not
# re-exported here so `python -m votebands.cli` stays import-clean.

__all__ = [name for name in dir() if not name.startswith("_")]
