"""Record CSV serialization, plan documents, and reproducibility stamps.

A records file has one row per chain step::

    step,seats,eg_simple,eg_full,mean_median,cut_edges,pop_dev,
    <band_{y}_{z} ...>,share_0,...,share_{k-1}

Shares are the ascending district Dem shares. Floats are written with repr()
so identical runs produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
from typing import Iterable

from .analysis import fmt_float
from .errors import DataError
from .graph import DualGraph, Partition
from .metrics import BandSpec, PlanRecord, record_band_count

FIXED_COLUMNS = ("step", "seats", "eg_simple", "eg_full", "mean_median",
                 "cut_edges", "pop_dev")


def write_records(path, records: Iterable[PlanRecord],
                  bands: tuple[BandSpec, ...]) -> int:
    """Stream records to CSV; returns the number of rows written.

    The header is derived from the first record's k and the given bands, so
    the input iterator is consumed exactly once and never materialized.
    """
    count = 0
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        for record in records:
            if count == 0:
                header = (list(FIXED_COLUMNS)
                          + [b.label for b in bands]
                          + [f"share_{i}" for i in range(record.k)])
                writer.writerow(header)
            row = [record.step, record.seats, fmt_float(record.eg_simple),
                   fmt_float(record.eg_full), fmt_float(record.mean_median),
                   record.cut_edges, fmt_float(record.pop_deviation)]
            row += [record_band_count(record, b) for b in bands]
            row += [fmt_float(s) for s in record.shares]
            writer.writerow(row)
            count += 1
    return count


def read_records(path, source: str = "neutral") -> list[PlanRecord]:
    """Load a records CSV, tagging every record with the given source."""
    try:
        fh = open(path, "r", newline="", encoding="utf-8")
    except FileNotFoundError:
        raise DataError(f"records file not found: {path}")
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"records file is empty: {path}")
        if tuple(header[:len(FIXED_COLUMNS)]) != FIXED_COLUMNS:
            raise DataError(f"unexpected records header in {path}: {header[:7]}")
        bands: list[BandSpec] = []
        pos = len(FIXED_COLUMNS)
        while pos < len(header) and header[pos].startswith("band_"):
            bands.append(BandSpec.from_label(header[pos]))
            pos += 1
        share_cols = header[pos:]
        if share_cols != [f"share_{i}" for i in range(len(share_cols))]:
            raise DataError(f"unexpected share columns in {path}: {share_cols}")
        if not share_cols:
            raise DataError(f"records file has no share columns: {path}")
        out = []
        for row in reader:
            if len(row) != len(header):
                raise DataError(f"row width mismatch in {path} at row {len(out) + 2}")
            vals = dict(zip(header, row))
            band_counts = tuple(
                (b, int(row[len(FIXED_COLUMNS) + i])) for i, b in enumerate(bands))
            shares = tuple(float(row[pos + i]) for i in range(len(share_cols)))
            out.append(PlanRecord(
                step=int(vals["step"]), shares=shares, seats=int(vals["seats"]),
                eg_simple=float(vals["eg_simple"]), eg_full=float(vals["eg_full"]),
                mean_median=float(vals["mean_median"]),
                cut_edges=int(vals["cut_edges"]),
                pop_deviation=float(vals["pop_dev"]),
                band_counts=band_counts, source=source))
        return out


def assignment_document(partition: Partition) -> dict:
    """Plan document: {"k": k, "assignment": {node id -> district}}."""
    return {
        "k": partition.k,
        "assignment": {str(partition.graph.ids[i]): int(d)
                       for i, d in enumerate(partition.assignment)},
    }


def partition_from_document(graph: DualGraph, doc: dict,
                            votes=None) -> Partition:
    if not isinstance(doc, dict) or "k" not in doc or "assignment" not in doc:
        raise DataError("plan document must have 'k' and 'assignment'")
    return Partition.from_assignment(graph, int(doc["k"]), doc["assignment"], votes)


def write_stamp(path, manifest: dict, version: str, extra: dict | None = None) -> None:
    """Reproducibility stamp: config echo + version; re-running the echoed
    manifest reproduces the outputs byte for byte."""
    payload = {"version": version, "manifest": manifest}
    if extra:
        payload.update(extra)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
