"""Ensemble summaries, winnowing, feasibility, and the figure CSV writers."""

from __future__ import annotations

import csv
import json

import numpy as np
import pytest

import votebands as vb
from votebands.analysis import nearest_rank
from votebands.errors import DataError
from votebands.metrics import BandSpec, CompressionSpec

BAND = BandSpec(5.0, 50.0)


def ensemble(graph, steps=300, seed=6, k=2, epsilon=0.01,
             bands=(BAND, BandSpec(5.0, 40.0))):
    cfg = vb.ChainConfig(k=k, epsilon=epsilon, steps=steps, rng_seed=seed,
                         record_bands=tuple(bands))
    return list(vb.run_chain(graph, graph.votes(), cfg))


@pytest.fixture(scope="module")
def gradient_records():
    g = vb.load_graph(vb.synth_grid(6, 6, "gradient"))
    cfg = vb.ChainConfig(k=3, epsilon=0.01, steps=400, rng_seed=8,
                         record_bands=(BAND,))
    return list(vb.run_chain(g, g.votes(), cfg))


def test_nearest_rank_definition():
    values = np.arange(1.0, 101.0)  # 1..100
    assert nearest_rank(values, 1) == 1.0
    assert nearest_rank(values, 25) == 25.0
    assert nearest_rank(values, 50) == 50.0
    assert nearest_rank(values, 99) == 99.0
    # Singleton: every percentile is that value.
    one = np.array([7.0])
    assert nearest_rank(one, 1) == 7.0
    assert nearest_rank(one, 99) == 7.0


def test_mm_histogram_clamps_to_end_bins():
    h = vb.mm_histogram([-0.5, -0.149, 0.0, 0.149, 0.5],
                        bin_width=0.05, lo=-0.15, hi=0.15)
    assert len(h.counts) == 6
    assert len(h.edges) == 7
    assert sum(h.counts) == 5
    assert h.counts[0] == 2   # -0.5 clamped in with -0.149
    assert h.counts[-1] == 2  # 0.5 clamped in with 0.149
    assert h.edges[0] == pytest.approx(-0.15)
    assert h.edges[-1] == pytest.approx(0.15)


def test_summarize_counts_and_histograms(gradient_records):
    summary = vb.summarize(gradient_records, bands=[BAND])
    assert summary.count == len(gradient_records)
    assert summary.k == 3
    assert sum(summary.seat_histogram.values()) == summary.count
    hist = summary.band_count_histograms[BAND]
    assert set(hist) <= set(range(0, 4))  # observed counts only, within 0..k
    assert sum(hist.values()) == summary.count
    assert sum(summary.mm_histogram.counts) == summary.count
    assert len(summary.share_boxplot) == 3
    for box in summary.share_boxplot:
        assert box.p1 <= box.p25 <= box.p50 <= box.p75 <= box.p99
    mean_seats = sum(r.seats for r in gradient_records) / summary.count
    assert summary.mean_seats == pytest.approx(mean_seats)


def test_summarize_rejects_empty_and_mixed_k(gradient_records):
    with pytest.raises(DataError):
        vb.summarize([])
    other = vb.load_graph(vb.synth_grid(4, 4, "uniform"))
    mixed = gradient_records[:3] + ensemble(other, steps=2)
    with pytest.raises(DataError, match="district counts"):
        vb.summarize(mixed)


def test_winnow_membership_and_nesting(gradient_records):
    spec = CompressionSpec(0.34, BAND)
    kept = vb.winnow(gradient_records, spec)
    threshold = int(np.ceil(0.34 * 3 - 1e-9))
    for rec in gradient_records:
        inside = vb.record_band_count(rec, BAND) >= threshold
        assert (rec in kept) == inside
    # Nesting: a stricter fraction keeps a subset.
    tighter = vb.winnow(gradient_records, CompressionSpec(0.67, BAND))
    assert set(id(r) for r in tighter) <= set(id(r) for r in kept)
    # x = 0 keeps everything.
    assert len(vb.winnow(gradient_records, CompressionSpec(0.0, BAND))) == \
        len(gradient_records)


def test_winnow_cached_and_computed_paths_agree(gradient_records):
    spec = CompressionSpec(0.5, BAND)
    cached = vb.winnow(gradient_records, spec)
    stripped = [vb.PlanRecord(step=r.step, shares=r.shares, seats=r.seats,
                              eg_simple=r.eg_simple, eg_full=r.eg_full,
                              mean_median=r.mean_median, cut_edges=r.cut_edges,
                              pop_deviation=r.pop_deviation, band_counts=(),
                              source=r.source)
                for r in gradient_records]
    computed = vb.winnow(stripped, spec)
    assert [r.step for r in cached] == [r.step for r in computed]


def test_compression_feasibility_matrix(gradient_records):
    x_grid = [0.0, 0.34, 0.67, 1.0]
    y_grid = [1.0, 5.0, 10.0]
    m = vb.compression_feasibility(gradient_records, x_grid, y_grid, 50.0)
    assert m.shape == (4, 3)
    assert np.all((0.0 <= m) & (m <= 1.0))
    # Fractions shrink as x grows and grow as y widens.
    assert np.all(np.diff(m, axis=0) <= 1e-12)
    assert np.all(np.diff(m, axis=1) >= -1e-12)
    assert m[0, 0] == 1.0  # x=0 admits every plan
    # Spot-check one cell against a direct recount.
    spec = CompressionSpec(0.67, BandSpec(5.0, 50.0))
    direct = sum(vb.is_compressed(r.shares, spec)
                 for r in gradient_records) / len(gradient_records)
    assert m[2, 1] == pytest.approx(direct)


def test_compression_feasibility_grid_validation(gradient_records):
    from votebands.errors import ConfigError
    with pytest.raises(ConfigError, match="ascending"):
        vb.compression_feasibility(gradient_records, [0.5, 0.2], [5.0], 50.0)
    with pytest.raises(ConfigError, match="ascending"):
        vb.compression_feasibility(gradient_records, [0.5], [5.0, 2.0], 50.0)
    with pytest.raises(DataError):
        vb.compression_feasibility([], [0.5], [5.0], 50.0)


def test_seats_vs_band_scatter(gradient_records):
    tagged = ([r.with_source("neutral") for r in gradient_records[:200]]
              + [r.with_source("opt1") for r in gradient_records[200:]])
    result = vb.seats_vs_band_scatter(tagged, BAND)
    assert len(result.points) == len(tagged)
    assert {p.source for p in result.points} == {"neutral", "opt1"}
    for count, (lo, hi) in result.seat_ranges.items():
        seat_vals = [p.seats for p in result.points if p.band_count == count]
        assert (lo, hi) == (min(seat_vals), max(seat_vals))


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.reader(fh))


def test_write_boxplot_csv(tmp_path, gradient_records):
    summary = vb.summarize(gradient_records)
    out = tmp_path / "boxplot.csv"
    vb.analysis.write_boxplot_csv(out, summary)
    rows = read_csv(out)
    assert rows[0] == ["district", "p1", "p25", "p50", "p75", "p99"]
    assert [r[0] for r in rows[1:]] == ["1", "2", "3"]  # 1-based districts
    for row in rows[1:]:
        vals = [float(v) for v in row[1:]]
        assert vals == sorted(vals)


def test_write_bands_hist_csv(tmp_path, gradient_records):
    summary = vb.summarize(gradient_records, bands=[BAND])
    out = tmp_path / "bands_hist.csv"
    vb.analysis.write_bands_hist_csv(out, summary)
    rows = read_csv(out)
    assert rows[0] == ["y", "z", "band_count", "occurrences"]
    body = rows[1:]
    assert [r[2] for r in body] == ["0", "1", "2", "3"]  # all counts, 0..k
    assert sum(int(r[3]) for r in body) == summary.count
    assert {r[0] for r in body} == {"5.0"}
    assert {r[1] for r in body} == {"50.0"}


def test_write_feasibility_csv(tmp_path, gradient_records):
    x_grid = [0.0, 0.5, 1.0]
    y_grid = [2.0, 5.0]
    m = vb.compression_feasibility(gradient_records, x_grid, y_grid, 50.0)
    out = tmp_path / "feasibility.csv"
    vb.analysis.write_feasibility_csv(out, m, x_grid, y_grid, 50.0)
    rows = read_csv(out)
    assert rows[0] == ["x", "y", "z", "fraction"]
    assert len(rows) == 1 + 6  # x-major grid
    assert [r[:2] for r in rows[1:3]] == [["0.0", "2.0"], ["0.0", "5.0"]]
    for (i, j), cell in np.ndenumerate(m):
        row = rows[1 + i * len(y_grid) + j]
        assert float(row[3]) == pytest.approx(cell)


def test_write_winnow_mm_csv(tmp_path, gradient_records):
    out = tmp_path / "winnow_mm.csv"
    x_grid = [0.0, 0.34]
    vb.analysis.write_winnow_mm_csv(out, gradient_records, x_grid, BAND)
    rows = read_csv(out)
    assert rows[0] == ["x", "bin_left", "bin_right", "count"]
    for x in x_grid:
        body = [r for r in rows[1:] if float(r[0]) == x]
        kept = vb.winnow(gradient_records, CompressionSpec(x, BAND))
        assert sum(int(r[3]) for r in body) == len(kept)


def test_write_scatter_csv(tmp_path, gradient_records):
    tagged = ([r.with_source("neutral") for r in gradient_records[:300]]
              + [r.with_source("opt2") for r in gradient_records[300:]])
    result = vb.seats_vs_band_scatter(tagged, BAND)
    out = tmp_path / "scatter.csv"
    vb.analysis.write_scatter_csv(out, result)
    rows = read_csv(out)
    assert rows[0] == ["source", "band_count", "seats", "count"]
    assert sum(int(r[3]) for r in rows[1:]) == len(tagged)
    # Aggregated: (source, band_count, seats) triples are unique.
    keys = [tuple(r[:3]) for r in rows[1:]]
    assert len(keys) == len(set(keys))


def test_summary_to_dict_json_serializable(gradient_records):
    summary = vb.summarize(gradient_records, bands=[BAND])
    doc = vb.summary_to_dict(summary)
    text = json.dumps(doc)
    assert json.loads(text)["count"] == summary.count


def test_float_columns_roundtrip_exactly(tmp_path, gradient_records):
    # repr-serialized floats must parse back bit-identical.
    summary = vb.summarize(gradient_records)
    out = tmp_path / "boxplot.csv"
    vb.analysis.write_boxplot_csv(out, summary)
    rows = read_csv(out)
    for row, box in zip(rows[1:], summary.share_boxplot):
        assert [float(v) for v in row[1:]] == list(box)
