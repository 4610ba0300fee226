"""Command-line pipeline around the chain, optimizer, and analysis layers.

Subcommands: synth, run-neutral, optimize, analyze, enumerate, eg-swing.
Flags mirror manifest fields; a JSON manifest given with --manifest overrides
any flags. Exit codes: 0 success, 2 configuration error, 3 data error,
4 infeasible request. Errors print one machine-parsable line to stderr:
"votebands: <config|data|infeasible>: <message>".
"""

from __future__ import annotations

import argparse
import copy
import csv
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .analysis import (MM_BIN_WIDTH, MM_RANGE, compression_feasibility,
                       seats_vs_band_scatter, summarize, summary_to_dict,
                       write_bands_hist_csv, write_boxplot_csv,
                       write_feasibility_csv, write_scatter_csv,
                       write_winnow_mm_csv)
from .chain import ChainConfig, ChainStats, run_chain
from .errors import ConfigError, DataError, InfeasibleError
from .exhaustive import DEFAULT_NODE_BUDGET, enumerate_partitions
from .graph import DualGraph, VotePattern, canonical_key, load_graph, load_votes
from .metrics import (BandSpec, eg_swing_band_requirement, prescribed_seats,
                      statewide_share)
from .optimize import OptConfig, run_optimizer
from .records_io import (assignment_document, read_records, write_records,
                         write_stamp)
from .synth import MODELS, synth_grid

MODES = ("synth", "neutral", "opt1", "opt2", "analyze", "enumerate", "eg-swing")
EMIT_KINDS = ("boxplot", "bands_hist", "feasibility", "winnow_mm", "scatter")

DEFAULT_X_GRID = (0.0, 0.125, 0.25, 0.375, 0.5)
DEFAULT_Y_GRID = tuple(float(y) for y in range(1, 16))


@dataclass
class RunManifest:
    """Everything one run needs; serializable as flat JSON."""

    mode: str
    graph: str | None = None
    votes: str | None = None
    out: str | None = None
    emit: tuple[str, ...] = EMIT_KINDS
    chain: dict = field(default_factory=dict)
    opt: dict = field(default_factory=dict)
    analyze: dict = field(default_factory=dict)
    synth: dict = field(default_factory=dict)
    enum: dict = field(default_factory=dict)
    swing: dict = field(default_factory=dict)

    _SECTIONS = {"chain": "chain", "opt": "opt", "analyze": "analyze",
                 "synth": "synth", "enumerate": "enum", "eg_swing": "swing"}

    @classmethod
    def from_dict(cls, data: dict) -> "RunManifest":
        if not isinstance(data, dict):
            raise ConfigError("manifest must be a JSON object")
        known = {"mode", "graph", "votes", "out", "emit"} | set(cls._SECTIONS)
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown manifest keys: {sorted(unknown)}")
        if "mode" not in data:
            raise ConfigError("manifest is missing 'mode'")
        m = cls(mode=data["mode"], graph=data.get("graph"),
                votes=data.get("votes"), out=data.get("out"),
                emit=tuple(data.get("emit", EMIT_KINDS)))
        for key, attr in cls._SECTIONS.items():
            section = data.get(key, {})
            if not isinstance(section, dict):
                raise ConfigError(f"manifest section {key!r} must be an object")
            setattr(m, attr, dict(section))
        return m

    def to_dict(self) -> dict:
        out = {"mode": self.mode, "graph": self.graph, "votes": self.votes,
               "out": self.out, "emit": list(self.emit)}
        for key, attr in self._SECTIONS.items():
            out[key] = copy.deepcopy(getattr(self, attr))
        return out

    def validated(self) -> "RunManifest":
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.mode in ("neutral", "opt1", "opt2", "enumerate") and not self.graph:
            raise ConfigError(f"mode {self.mode!r} requires a graph path")
        if self.mode == "analyze" and not self.analyze.get("records"):
            raise ConfigError("analyze mode requires a records path")
        if self.mode != "eg-swing" and not self.out:
            raise ConfigError(f"mode {self.mode!r} requires an output path")
        bad = set(self.emit) - set(EMIT_KINDS)
        if bad:
            raise ConfigError(f"unknown emit kinds: {sorted(bad)}")
        return self


def _deep_merge(base: dict, override: dict) -> dict:
    out = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _deep_merge(out[key], value)
        else:
            out[key] = value
    return out


def parse_band_text(text: str) -> list:
    """'5,50' -> [5.0, 50.0]; '5,D0' keeps the D0 placeholder."""
    parts = [p.strip() for p in str(text).split(",")]
    if len(parts) != 2:
        raise ConfigError(f"band must be 'y,z', got {text!r}")
    try:
        y = float(parts[0])
    except ValueError:
        raise ConfigError(f"band half-width must be a number, got {parts[0]!r}")
    if parts[1].upper() == "D0":
        return [y, "D0"]
    try:
        z = float(parts[1])
    except ValueError:
        raise ConfigError(f"band center must be a number or D0, got {parts[1]!r}")
    return [y, z]


def resolve_band(raw, votes: VotePattern | None) -> BandSpec:
    """Materialize a [y, z] pair; z == 'D0' becomes 100 * statewide share."""
    if isinstance(raw, BandSpec):
        return raw
    if not isinstance(raw, (list, tuple)) or len(raw) != 2:
        raise ConfigError(f"band must be a [y, z] pair, got {raw!r}")
    y, z = raw
    if isinstance(z, str):
        if z.upper() != "D0":
            raise ConfigError(f"band center must be a number or D0, got {z!r}")
        if votes is None:
            raise ConfigError("band center D0 needs a vote pattern to resolve")
        z = 100.0 * statewide_share(votes)
    return BandSpec(float(y), float(z))


def _parse_float_list(text: str) -> list[float]:
    try:
        return [float(p) for p in str(text).split(",") if p.strip() != ""]
    except ValueError:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}")


def _load_inputs(manifest: RunManifest) -> tuple[DualGraph, VotePattern]:
    graph = load_graph(manifest.graph)
    votes = load_votes(graph, manifest.votes) if manifest.votes else graph.votes()
    return graph, votes


def _out_dir(manifest: RunManifest) -> Path:
    out = Path(manifest.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _coerce_int(section: dict, key: str, default):
    value = section.get(key, default)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{key} must be an integer, got {value!r}")
    return value


def _run_synth(manifest: RunManifest) -> int:
    s = manifest.synth
    known = {"rows", "cols", "model", "share", "share0", "share1",
             "share_left", "share_right", "turnout", "population", "rng_seed"}
    unknown = set(s) - known
    if unknown:
        raise ConfigError(f"unknown synth parameters: {sorted(unknown)}")
    doc = synth_grid(
        _coerce_int(s, "rows", 4), _coerce_int(s, "cols", 4),
        s.get("model", "uniform"),
        share=s.get("share", 0.5),
        share0=s.get("share0", 0.2), share1=s.get("share1", 0.8),
        share_left=s.get("share_left", 0.9), share_right=s.get("share_right", 0.1),
        turnout=_coerce_int(s, "turnout", 100),
        population=_coerce_int(s, "population", None),
        rng_seed=s.get("rng_seed"))
    load_graph(doc)  # generated documents must pass the same validation
    out = Path(manifest.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")
    return 0


def _chain_config(section: dict, votes: VotePattern) -> ChainConfig:
    known = {"k", "epsilon", "steps", "proposal", "rng_seed", "bands",
             "tree_method", "tree_retry_limit", "pair_retry_limit",
             "seed_attempts", "validate"}
    unknown = set(section) - known
    if unknown:
        raise ConfigError(f"unknown chain parameters: {sorted(unknown)}")
    if "k" not in section or "epsilon" not in section:
        raise ConfigError("chain config requires k and epsilon")
    bands = tuple(resolve_band(b, votes) for b in section.get("bands", [[5, 50]]))
    return ChainConfig(
        k=_coerce_int(section, "k", None),
        epsilon=float(section["epsilon"]),
        steps=_coerce_int(section, "steps", 0),
        proposal=section.get("proposal", "recom"),
        rng_seed=_coerce_int(section, "rng_seed", 0),
        record_bands=bands,
        tree_method=section.get("tree_method", "mst"),
        tree_retry_limit=_coerce_int(section, "tree_retry_limit", 50),
        pair_retry_limit=_coerce_int(section, "pair_retry_limit", 50),
        seed_attempts=_coerce_int(section, "seed_attempts", 20),
        validate=bool(section.get("validate", False)),
    ).validated()


def _resolved_manifest(manifest: RunManifest, **updates) -> dict:
    data = manifest.to_dict()
    for dotted, value in updates.items():
        section, key = dotted.split(".", 1)
        data[section][key] = value
    return data


def _run_neutral(manifest: RunManifest) -> int:
    graph, votes = _load_inputs(manifest)
    cfg = _chain_config(manifest.chain, votes)
    out = _out_dir(manifest)
    stats = ChainStats()
    count = write_records(out / "records.csv",
                          run_chain(graph, votes, cfg, stats), cfg.record_bands)
    echo = _resolved_manifest(
        manifest, **{"chain.bands": [[b.y, b.z] for b in cfg.record_bands]})
    write_stamp(out / "stamp.json", echo, __version__,
                {"records": count, "self_loops": stats.self_loops})
    return 0


def _opt_config(section: dict, variant: str, votes: VotePattern) -> OptConfig:
    known = {"k", "epsilon", "recom_burnin_steps", "flip_attempts", "band",
             "bands", "cut_edge_factor", "restarts", "allow_ties", "rng_seed",
             "tree_method", "tree_retry_limit", "pair_retry_limit",
             "seed_attempts"}
    unknown = set(section) - known
    if unknown:
        raise ConfigError(f"unknown optimizer parameters: {sorted(unknown)}")
    if "k" not in section or "epsilon" not in section:
        raise ConfigError("optimizer config requires k and epsilon")
    return OptConfig(
        k=_coerce_int(section, "k", None),
        epsilon=float(section["epsilon"]),
        variant=variant,
        recom_burnin_steps=_coerce_int(section, "recom_burnin_steps", 200),
        flip_attempts=_coerce_int(section, "flip_attempts", 50000),
        band=resolve_band(section.get("band", [5, 50]), votes),
        cut_edge_factor=float(section.get("cut_edge_factor", 2.0)),
        restarts=_coerce_int(section, "restarts", 1),
        allow_ties=bool(section.get("allow_ties", False)),
        rng_seed=_coerce_int(section, "rng_seed", 0),
        record_bands=tuple(resolve_band(b, votes)
                           for b in section.get("bands", [])),
        tree_method=section.get("tree_method", "mst"),
        tree_retry_limit=_coerce_int(section, "tree_retry_limit", 50),
        pair_retry_limit=_coerce_int(section, "pair_retry_limit", 50),
        seed_attempts=_coerce_int(section, "seed_attempts", 20),
    ).validated()


def _run_optimize(manifest: RunManifest) -> int:
    graph, votes = _load_inputs(manifest)
    cfg = _opt_config(manifest.opt, manifest.mode, votes)
    out = _out_dir(manifest)
    results = run_optimizer(graph, votes, cfg)
    bands = cfg.record_bands if cfg.band in cfg.record_bands \
        else (cfg.band,) + tuple(cfg.record_bands)
    write_records(out / "records.csv", (r.record for r in results), bands)
    for res in results:
        with open(out / f"trace_r{res.restart}.csv", "w", newline="",
                  encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["attempt", "valid", "guard_ok", "accepted",
                        "band_count", "opt2_score", "cut_edges"])
            for t in res.trace:
                w.writerow([t.attempt, int(t.valid), int(t.guard_ok),
                            int(t.accepted), t.band_count,
                            repr(t.opt2_score), t.cut_edges])
    plans = {"variant": cfg.variant,
             "band": [cfg.band.y, cfg.band.z],
             "restarts": [
                 {"restart": r.restart, "rng_seed": r.rng_seed,
                  "baseline_cut_edges": r.baseline_cut_edges,
                  "accepted": r.accepted, "attempted": r.attempted,
                  "plan": assignment_document(r.partition)}
                 for r in results]}
    with open(out / "plans.json", "w", encoding="utf-8") as fh:
        json.dump(plans, fh, indent=1, sort_keys=True)
        fh.write("\n")
    echo = _resolved_manifest(
        manifest,
        **{"opt.band": [cfg.band.y, cfg.band.z],
           "opt.bands": [[b.y, b.z] for b in cfg.record_bands]})
    write_stamp(out / "stamp.json", echo, __version__,
                {"restarts": len(results)})
    return 0


def _run_analyze(manifest: RunManifest) -> int:
    a = manifest.analyze
    known = {"records", "opt1_records", "opt2_records", "band", "z", "x_grid",
             "y_grid", "mm_bin_width", "mm_lo", "mm_hi"}
    unknown = set(a) - known
    if unknown:
        raise ConfigError(f"unknown analyze parameters: {sorted(unknown)}")
    records = read_records(a["records"], source="neutral")
    extra = []
    for key, tag in (("opt1_records", "opt1"), ("opt2_records", "opt2")):
        if a.get(key):
            extra.extend(read_records(a[key], source=tag))
    band = resolve_band(a.get("band", [5, 50]), None)
    z = float(a.get("z", 50.0))
    x_grid = [float(x) for x in a.get("x_grid", DEFAULT_X_GRID)]
    y_grid = [float(y) for y in a.get("y_grid", DEFAULT_Y_GRID)]
    bin_width = float(a.get("mm_bin_width", MM_BIN_WIDTH))
    mm_lo = float(a.get("mm_lo", MM_RANGE[0]))
    mm_hi = float(a.get("mm_hi", MM_RANGE[1]))

    out = _out_dir(manifest)
    summary = summarize(records, mm_bin_width=bin_width, mm_range=(mm_lo, mm_hi))
    with open(out / "summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary_to_dict(summary), fh, indent=1, sort_keys=True)
        fh.write("\n")
    if "boxplot" in manifest.emit:
        write_boxplot_csv(out / "boxplot.csv", summary)
    if "bands_hist" in manifest.emit:
        write_bands_hist_csv(out / "bands_hist.csv", summary)
    if "feasibility" in manifest.emit:
        matrix = compression_feasibility(records, x_grid, y_grid, z)
        write_feasibility_csv(out / "feasibility.csv", matrix, x_grid, y_grid, z)
    if "winnow_mm" in manifest.emit:
        write_winnow_mm_csv(out / "winnow_mm.csv", records, x_grid, band,
                            bin_width, (mm_lo, mm_hi))
    if "scatter" in manifest.emit:
        write_scatter_csv(out / "scatter.csv",
                          seats_vs_band_scatter(records + extra, band))
    echo = _resolved_manifest(manifest, **{"analyze.band": [band.y, band.z]})
    write_stamp(out / "stamp.json", echo, __version__,
                {"records": len(records), "extra_records": len(extra)})
    return 0


def _run_enumerate(manifest: RunManifest) -> int:
    e = manifest.enum
    known = {"k", "epsilon", "node_budget"}
    unknown = set(e) - known
    if unknown:
        raise ConfigError(f"unknown enumerate parameters: {sorted(unknown)}")
    if "k" not in e or "epsilon" not in e:
        raise ConfigError("enumerate requires k and epsilon")
    graph = load_graph(manifest.graph)
    plans = enumerate_partitions(graph, _coerce_int(e, "k", None),
                                 float(e["epsilon"]),
                                 _coerce_int(e, "node_budget", DEFAULT_NODE_BUDGET))
    doc = {"count": len(plans), "k": e["k"], "epsilon": e["epsilon"],
           "plans": [[list(block) for block in canonical_key(p)] for p in plans]}
    out = Path(manifest.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")
    return 0


def _run_eg_swing(manifest: RunManifest) -> int:
    s = manifest.swing
    if "d0" not in s or "k" not in s:
        raise ConfigError("eg-swing requires d0 and k")
    d0 = float(s["d0"])
    if not (0.0 <= d0 <= 1.0):
        raise ConfigError(f"d0 must be in [0, 1], got {d0}")
    k = _coerce_int(s, "k", None)
    print(f"d0 {d0!r}")
    print(f"k {k}")
    print("swing\tprescribed_seats")
    for i in range(-5, 6):
        print(f"{i:+d}\t{prescribed_seats(d0, k, i)}")
    req = eg_swing_band_requirement(d0, k)
    print(f"requirement\t{req}")
    print(f"k/5\t{k / 5!r}")
    return 0


def run(manifest: RunManifest) -> int:
    """Execute one manifest end to end; returns the process exit code."""
    manifest = manifest.validated()
    handler = {
        "synth": _run_synth,
        "neutral": _run_neutral,
        "opt1": _run_optimize,
        "opt2": _run_optimize,
        "analyze": _run_analyze,
        "enumerate": _run_enumerate,
        "eg-swing": _run_eg_swing,
    }[manifest.mode]
    return handler(manifest)


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--manifest", help="JSON manifest; overrides flags")
    p.add_argument("--out", help="output directory or file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="votebands",
        description="Districting-plan ensembles, competitiveness bands, and "
                    "partisan metrics")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic grid graph")
    _common_flags(p)
    p.add_argument("--rows", type=int, default=4)
    p.add_argument("--cols", type=int, default=4)
    p.add_argument("--model", choices=MODELS, default="uniform")
    p.add_argument("--share", type=float, default=0.5)
    p.add_argument("--share0", type=float, default=0.2)
    p.add_argument("--share1", type=float, default=0.8)
    p.add_argument("--share-left", type=float, default=0.9)
    p.add_argument("--share-right", type=float, default=0.1)
    p.add_argument("--turnout", type=int, default=100)
    p.add_argument("--population", type=int, default=None)
    p.add_argument("--rng-seed", type=int, default=None)

    p = sub.add_parser("run-neutral", help="run a neutral ensemble chain")
    _common_flags(p)
    p.add_argument("--graph", help="graph document path")
    p.add_argument("--votes", help="vote overlay path")
    p.add_argument("--k", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--steps", type=int, default=0)
    p.add_argument("--proposal", choices=("recom", "flip"), default="recom")
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--band", action="append", dest="bands", metavar="Y,Z",
                   help="recorded band, repeatable; z may be D0")
    p.add_argument("--tree-method", choices=("mst", "wilson"), default="mst")
    p.add_argument("--tree-retry-limit", type=int, default=50)
    p.add_argument("--pair-retry-limit", type=int, default=50)
    p.add_argument("--seed-attempts", type=int, default=20)
    p.add_argument("--validate", action="store_true")

    p = sub.add_parser("optimize", help="hill-climb for competitive districts")
    _common_flags(p)
    p.add_argument("--graph")
    p.add_argument("--votes")
    p.add_argument("--variant", choices=("opt1", "opt2"), default="opt1")
    p.add_argument("--k", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--burnin", type=int, default=200)
    p.add_argument("--flip-attempts", type=int, default=50000)
    p.add_argument("--band", metavar="Y,Z", default="5,50",
                   help="target band; z may be D0")
    p.add_argument("--record-band", action="append", dest="record_bands",
                   metavar="Y,Z", help="extra recorded band, repeatable")
    p.add_argument("--cut-edge-factor", type=float, default=2.0)
    p.add_argument("--restarts", type=int, default=1)
    p.add_argument("--allow-ties", action="store_true")
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--tree-method", choices=("mst", "wilson"), default="mst")

    p = sub.add_parser("analyze", help="summarize records and emit figure CSVs")
    _common_flags(p)
    p.add_argument("--records", help="neutral records CSV")
    p.add_argument("--opt1-records")
    p.add_argument("--opt2-records")
    p.add_argument("--band", metavar="Y,Z", default="5,50",
                   help="band for winnowing and the scatter (numeric z only)")
    p.add_argument("--z", type=float, default=50.0,
                   help="band center for the feasibility matrix")
    p.add_argument("--x-grid", help="comma-separated compression fractions")
    p.add_argument("--y-grid", help="comma-separated band half-widths")
    p.add_argument("--mm-bin-width", type=float, default=MM_BIN_WIDTH)
    p.add_argument("--mm-lo", type=float, default=MM_RANGE[0])
    p.add_argument("--mm-hi", type=float, default=MM_RANGE[1])
    p.add_argument("--emit", help="comma-separated figure kinds "
                                  f"(default all: {','.join(EMIT_KINDS)})")

    p = sub.add_parser("enumerate", help="list all valid plans (small graphs)")
    _common_flags(p)
    p.add_argument("--graph")
    p.add_argument("--k", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET)

    p = sub.add_parser("eg-swing", help="print the swing prescription table")
    _common_flags(p)
    p.add_argument("--d0", type=float)
    p.add_argument("--k", type=int)

    return parser


def _manifest_data_from_args(args: argparse.Namespace) -> dict:
    cmd = args.command
    if cmd == "synth":
        return {"mode": "synth", "out": args.out,
                "synth": {"rows": args.rows, "cols": args.cols,
                          "model": args.model, "share": args.share,
                          "share0": args.share0, "share1": args.share1,
                          "share_left": args.share_left,
                          "share_right": args.share_right,
                          "turnout": args.turnout,
                          "population": args.population,
                          "rng_seed": args.rng_seed}}
    if cmd == "run-neutral":
        chain = {"k": args.k, "epsilon": args.epsilon, "steps": args.steps,
                 "proposal": args.proposal, "rng_seed": args.rng_seed,
                 "tree_method": args.tree_method,
                 "tree_retry_limit": args.tree_retry_limit,
                 "pair_retry_limit": args.pair_retry_limit,
                 "seed_attempts": args.seed_attempts,
                 "validate": args.validate}
        if args.bands:
            chain["bands"] = [parse_band_text(b) for b in args.bands]
        chain = {key: value for key, value in chain.items() if value is not None}
        return {"mode": "neutral", "graph": args.graph, "votes": args.votes,
                "out": args.out, "chain": chain}
    if cmd == "optimize":
        opt = {"k": args.k, "epsilon": args.epsilon,
               "recom_burnin_steps": args.burnin,
               "flip_attempts": args.flip_attempts,
               "band": parse_band_text(args.band),
               "cut_edge_factor": args.cut_edge_factor,
               "restarts": args.restarts, "allow_ties": args.allow_ties,
               "rng_seed": args.rng_seed, "tree_method": args.tree_method}
        if args.record_bands:
            opt["bands"] = [parse_band_text(b) for b in args.record_bands]
        opt = {key: value for key, value in opt.items() if value is not None}
        return {"mode": args.variant, "graph": args.graph, "votes": args.votes,
                "out": args.out, "opt": opt}
    if cmd == "analyze":
        section = {"records": args.records,
                   "opt1_records": args.opt1_records,
                   "opt2_records": args.opt2_records,
                   "band": parse_band_text(args.band), "z": args.z,
                   "mm_bin_width": args.mm_bin_width,
                   "mm_lo": args.mm_lo, "mm_hi": args.mm_hi}
        if args.x_grid:
            section["x_grid"] = _parse_float_list(args.x_grid)
        if args.y_grid:
            section["y_grid"] = _parse_float_list(args.y_grid)
        section = {key: value for key, value in section.items()
                   if value is not None}
        data = {"mode": "analyze", "out": args.out, "analyze": section}
        if args.emit:
            data["emit"] = [e.strip() for e in args.emit.split(",") if e.strip()]
        return data
    if cmd == "enumerate":
        enum = {"k": args.k, "epsilon": args.epsilon,
                "node_budget": args.node_budget}
        enum = {key: value for key, value in enum.items() if value is not None}
        return {"mode": "enumerate", "graph": args.graph, "out": args.out,
                "enumerate": enum}
    if cmd == "eg-swing":
        swing = {}
        if args.d0 is not None:
            swing["d0"] = args.d0
        if args.k is not None:
            swing["k"] = args.k
        return {"mode": "eg-swing", "eg_swing": swing}
    raise ConfigError(f"unknown command {cmd!r}")


def manifest_from_args(args: argparse.Namespace) -> RunManifest:
    data = _manifest_data_from_args(args)
    if getattr(args, "manifest", None):
        try:
            with open(args.manifest, "r", encoding="utf-8") as fh:
                overrides = json.load(fh)
        except FileNotFoundError:
            raise ConfigError(f"manifest file not found: {args.manifest}")
        except json.JSONDecodeError as exc:
            raise ConfigError(f"manifest is not valid JSON: {exc}")
        if not isinstance(overrides, dict):
            raise ConfigError("manifest must be a JSON object")
        data = _deep_merge(data, overrides)
    return RunManifest.from_dict(data)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(manifest_from_args(args))
    except ConfigError as exc:
        _print_error("config", exc)
        return 2
    except DataError as exc:
        _print_error("data", exc)
        return 3
    except InfeasibleError as exc:
        _print_error("infeasible", exc)
        return 4


def _print_error(kind: str, exc: Exception) -> None:
    message = " ".join(str(exc).split())
    print(f"votebands: {kind}: {message}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
