"""Synthetic grid geographies with planted vote patterns.

Desk-scale stand-ins for real state graphs: rook-adjacency rectangular grids
with deterministic per-node vote counts. Three models:

    uniform      every node has Dem share `share`
    gradient     share varies linearly along the row axis, share0 -> share1
    two_cluster  top half of rows at share_left, bottom half at share_right
                 (odd row counts give the middle row to the top block)

Node vote counts are dem = round(share * turnout) (half up), rep = turnout -
dem, so the statewide share matches the model's mean up to integer rounding.
The models are deterministic; rng_seed is accepted and echoed in the document
metadata for forward compatibility.
"""

from __future__ import annotations

import math

from .errors import ConfigError

MODELS = ("uniform", "gradient", "two_cluster")


def _check_share(value: float, what: str) -> float:
    value = float(value)
    if not (0.0 <= value <= 1.0):
        raise ConfigError(f"{what} must be in [0, 1], got {value}")
    return value


def synth_grid(rows: int, cols: int, model: str = "uniform", *,
               share: float = 0.5, share0: float = 0.2, share1: float = 0.8,
               share_left: float = 0.9, share_right: float = 0.1,
               turnout: int = 100, population: int | None = None,
               rng_seed: int | None = None) -> dict:
    """Graph document for a rows x cols grid with the given vote model.

    population defaults to turnout (every counted resident votes). Node ids
    are the integers row * cols + col.
    """
    if rows < 1 or cols < 1:
        raise ConfigError(f"grid must be at least 1x1, got {rows}x{cols}")
    if model not in MODELS:
        raise ConfigError(f"model must be one of {MODELS}, got {model!r}")
    if not isinstance(turnout, int) or turnout < 1:
        raise ConfigError(f"turnout must be a positive integer, got {turnout!r}")
    if population is None:
        population = turnout
    if not isinstance(population, int) or population < 0:
        raise ConfigError(f"population must be a non-negative integer, got {population!r}")

    if model == "uniform":
        share = _check_share(share, "share")
        row_share = [share] * rows
        params = {"share": share}
    elif model == "gradient":
        share0 = _check_share(share0, "share0")
        share1 = _check_share(share1, "share1")
        if rows == 1:
            row_share = [share0]
        else:
            row_share = [share0 + (share1 - share0) * i / (rows - 1)
                         for i in range(rows)]
        params = {"share0": share0, "share1": share1}
    else:
        share_left = _check_share(share_left, "share_left")
        share_right = _check_share(share_right, "share_right")
        top = (rows + 1) // 2
        row_share = [share_left if i < top else share_right for i in range(rows)]
        params = {"share_left": share_left, "share_right": share_right}

    nodes = []
    for i in range(rows):
        dem = math.floor(row_share[i] * turnout + 0.5)
        for j in range(cols):
            nodes.append({"id": i * cols + j, "population": population,
                          "dem": dem, "rep": turnout - dem})
    edges = []
    for i in range(rows):
        for j in range(cols):
            nid = i * cols + j
            if j + 1 < cols:
                edges.append([nid, nid + 1])
            if i + 1 < rows:
                edges.append([nid, nid + cols])
    return {
        "meta": {"generator": "synth_grid", "rows": rows, "cols": cols,
                 "model": model, "params": params, "turnout": turnout,
                 "population": population, "rng_seed": rng_seed},
        "nodes": nodes,
        "edges": edges,
    }
