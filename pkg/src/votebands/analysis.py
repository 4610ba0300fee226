"""Ensemble post-processing: winnowing, summaries, and figure-data series.

The figure-data CSV schemas written here are the contract consumed by the
plotting package:

    boxplot.csv      district,p1,p25,p50,p75,p99   (district is 1-based,
                     ascending-share position; percentiles are Dem shares)
    bands_hist.csv   y,z,band_count,occurrences    (full 0..k count range)
    feasibility.csv  x,y,z,fraction                (x outer, y inner, both asc)
    winnow_mm.csv    x,bin_left,bin_right,count    (one histogram per x level)
    scatter.csv      source,band_count,seats,count (aggregated point counts)

All floats are serialized with repr() so files are byte-stable across runs.
"""

from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import ConfigError, DataError
from .metrics import BandSpec, CompressionSpec, PlanRecord, record_band_count

_BAND_EPS = 1e-9
PERCENTILES = (1, 25, 50, 75, 99)
MM_RANGE = (-0.15, 0.15)
MM_BIN_WIDTH = 0.005


def fmt_float(x: float) -> str:
    """Shortest exact decimal form; round-trips through float()."""
    return repr(float(x))


class BoxStats(NamedTuple):
    """Nearest-rank share percentiles for one district position."""

    p1: float
    p25: float
    p50: float
    p75: float
    p99: float


@dataclass(frozen=True)
class MMHistogram:
    """Fixed-width binning of mean-median values over [lo, hi].

    Values outside the range are clamped into the end bins, so counts always
    sum to the number of values binned.
    """

    lo: float
    hi: float
    bin_width: float
    edges: tuple[float, ...]
    counts: tuple[int, ...]


@dataclass(frozen=True)
class EnsembleSummary:
    count: int
    k: int
    mean_seats: float
    seat_histogram: dict[int, int]
    band_count_histograms: dict[BandSpec, dict[int, int]]
    mm_histogram: MMHistogram
    share_boxplot: tuple[BoxStats, ...]


def nearest_rank(sorted_values: np.ndarray, p: float) -> float:
    """Nearest-rank percentile of pre-sorted values, p in (0, 100]."""
    n = len(sorted_values)
    if n == 0:
        raise DataError("percentile of empty data")
    rank = max(1, math.ceil(p / 100.0 * n))
    return float(sorted_values[rank - 1])


def mm_histogram(values: Sequence[float], bin_width: float = MM_BIN_WIDTH,
                 lo: float = MM_RANGE[0], hi: float = MM_RANGE[1]) -> MMHistogram:
    if not (bin_width > 0) or not (hi > lo):
        raise ConfigError("histogram needs bin_width > 0 and hi > lo")
    nbins = max(1, math.ceil((hi - lo) / bin_width - 1e-9))
    counts = [0] * nbins
    for v in values:
        idx = int(math.floor((v - lo) / bin_width))
        counts[min(nbins - 1, max(0, idx))] += 1
    edges = tuple(lo + i * bin_width for i in range(nbins + 1))
    return MMHistogram(lo=lo, hi=hi, bin_width=bin_width,
                       edges=edges, counts=tuple(counts))


def winnow(records: Iterable[PlanRecord], c: CompressionSpec) -> list[PlanRecord]:
    """Records whose plans are compressed under c, original order kept.

    Consumes the input stream once, so it can be fed directly from a running
    chain without materializing the full ensemble.
    """
    out = []
    for r in records:
        count = record_band_count(r, c.band)
        required = math.ceil(c.x * r.k - _BAND_EPS)
        if count >= required:
            out.append(r)
    return out


def summarize(records: Iterable[PlanRecord], bands: Sequence[BandSpec] | None = None,
              mm_bin_width: float = MM_BIN_WIDTH,
              mm_range: tuple[float, float] = MM_RANGE) -> EnsembleSummary:
    """Aggregate an ensemble; raises DataError on empty input or mixed k.

    bands defaults to whatever the first record carries. mean_seats is kept
    at full precision; render at two decimals for table-style output.
    """
    records = list(records)
    if not records:
        raise DataError("cannot summarize an empty record list")
    k = records[0].k
    for r in records:
        if r.k != k:
            raise DataError(f"mixed district counts in records: {k} and {r.k}")
    if bands is None:
        bands = tuple(b for b, _ in records[0].band_counts)

    seat_hist = Counter(r.seats for r in records)
    band_hists = {
        b: dict(sorted(Counter(record_band_count(r, b) for r in records).items()))
        for b in bands
    }
    shares = np.array([r.shares for r in records], dtype=float)
    shares.sort(axis=0)
    boxes = tuple(
        BoxStats(*(nearest_rank(shares[:, d], p) for p in PERCENTILES))
        for d in range(k)
    )
    return EnsembleSummary(
        count=len(records),
        k=k,
        mean_seats=float(np.mean([r.seats for r in records])),
        seat_histogram=dict(sorted(seat_hist.items())),
        band_count_histograms=band_hists,
        mm_histogram=mm_histogram([r.mean_median for r in records],
                                  mm_bin_width, mm_range[0], mm_range[1]),
        share_boxplot=boxes,
    )


def compression_feasibility(records: Sequence[PlanRecord], x_grid: Sequence[float],
                            y_grid: Sequence[float], z: float) -> np.ndarray:
    """Fraction of records (x, y, z) compressed, as a (len(x), len(y)) matrix.

    Non-increasing down each column (rising x) and non-decreasing along each
    row (rising y) by construction.
    """
    records = list(records)
    if not records:
        raise DataError("feasibility needs at least one record")
    x_grid = [float(x) for x in x_grid]
    y_grid = [float(y) for y in y_grid]
    if any(not (0.0 <= x <= 1.0) for x in x_grid):
        raise ConfigError("x grid values must be in [0, 1]")
    if any(not (y > 0) for y in y_grid):
        raise ConfigError("y grid values must be positive")
    if sorted(x_grid) != x_grid or sorted(y_grid) != y_grid:
        raise ConfigError("feasibility grids must be ascending")
    k = records[0].k
    shares = 100.0 * np.array([r.shares for r in records], dtype=float)
    dist = np.abs(shares - float(z))
    out = np.empty((len(x_grid), len(y_grid)), dtype=float)
    for j, y in enumerate(y_grid):
        counts = np.count_nonzero(dist <= y + _BAND_EPS, axis=1)
        for i, x in enumerate(x_grid):
            required = math.ceil(x * k - _BAND_EPS)
            out[i, j] = float(np.mean(counts >= required))
    return out


class ScatterPoint(NamedTuple):
    band_count: int
    seats: int
    source: str


class ScatterResult(NamedTuple):
    points: list[ScatterPoint]
    seat_ranges: dict[int, tuple[int, int]]


def seats_vs_band_scatter(records: Iterable[PlanRecord],
                          band: BandSpec = BandSpec(5.0, 50.0)) -> ScatterResult:
    """(band_count, seats, source) per record, plus seat ranges per band count.

    Sources are whatever tags the records carry; optimizer points absent from
    the neutral ensemble are surfaced like any others.
    """
    points = [ScatterPoint(record_band_count(r, band), r.seats, r.source)
              for r in records]
    ranges: dict[int, tuple[int, int]] = {}
    for p in points:
        lo, hi = ranges.get(p.band_count, (p.seats, p.seats))
        ranges[p.band_count] = (min(lo, p.seats), max(hi, p.seats))
    return ScatterResult(points=points, seat_ranges=dict(sorted(ranges.items())))


def summary_to_dict(summary: EnsembleSummary) -> dict:
    """JSON-ready form of a summary; histogram keys become strings."""
    return {
        "count": summary.count,
        "k": summary.k,
        "mean_seats": summary.mean_seats,
        "seat_histogram": {str(s): c for s, c in summary.seat_histogram.items()},
        "band_count_histograms": {
            b.label: {str(n): c for n, c in hist.items()}
            for b, hist in summary.band_count_histograms.items()
        },
        "mm_histogram": {
            "lo": summary.mm_histogram.lo,
            "hi": summary.mm_histogram.hi,
            "bin_width": summary.mm_histogram.bin_width,
            "edges": list(summary.mm_histogram.edges),
            "counts": list(summary.mm_histogram.counts),
        },
        "share_boxplot": [
            {"p1": b.p1, "p25": b.p25, "p50": b.p50, "p75": b.p75, "p99": b.p99}
            for b in summary.share_boxplot
        ],
    }


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def write_boxplot_csv(path, summary: EnsembleSummary) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = _writer(fh)
        w.writerow(["district", "p1", "p25", "p50", "p75", "p99"])
        for d, box in enumerate(summary.share_boxplot, start=1):
            w.writerow([d] + [fmt_float(v) for v in box])


def write_bands_hist_csv(path, summary: EnsembleSummary) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = _writer(fh)
        w.writerow(["y", "z", "band_count", "occurrences"])
        for band, hist in summary.band_count_histograms.items():
            for n in range(summary.k + 1):
                w.writerow([fmt_float(band.y), fmt_float(band.z), n, hist.get(n, 0)])


def write_feasibility_csv(path, matrix: np.ndarray, x_grid: Sequence[float],
                          y_grid: Sequence[float], z: float) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = _writer(fh)
        w.writerow(["x", "y", "z", "fraction"])
        for i, x in enumerate(x_grid):
            for j, y in enumerate(y_grid):
                w.writerow([fmt_float(x), fmt_float(y), fmt_float(z),
                            fmt_float(matrix[i, j])])


def write_winnow_mm_csv(path, records: Sequence[PlanRecord],
                        x_grid: Sequence[float], band: BandSpec,
                        mm_bin_width: float = MM_BIN_WIDTH,
                        mm_range: tuple[float, float] = MM_RANGE) -> None:
    """One mean-median histogram per winnowing level x; empty levels get
    all-zero counts rather than being dropped."""
    records = list(records)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = _writer(fh)
        w.writerow(["x", "bin_left", "bin_right", "count"])
        for x in x_grid:
            subset = winnow(records, CompressionSpec(float(x), band))
            hist = mm_histogram([r.mean_median for r in subset],
                                mm_bin_width, mm_range[0], mm_range[1])
            for b in range(len(hist.counts)):
                w.writerow([fmt_float(x), fmt_float(hist.edges[b]),
                            fmt_float(hist.edges[b + 1]), hist.counts[b]])


def write_scatter_csv(path, result: ScatterResult) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = _writer(fh)
        w.writerow(["source", "band_count", "seats", "count"])
        agg = Counter((p.source, p.band_count, p.seats) for p in result.points)
        for (source, bc, seats), count in sorted(agg.items()):
            w.writerow([source, bc, seats, count])
