"""Plan-level scores: vote bands, seats, mean-median, efficiency gap, swing.

Shares are Dem fractions of the two-party vote in [0, 1]; band parameters
(y, z) are in percentage points. A district share s is inside the (y, z) band
when |100*s - z| <= y, endpoints included. A share vector is (x, y, z)
compressed when at least ceil(x*k) of its k entries are in the (y, z) band.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import ConfigError
from .graph import (Partition, VotePattern, cut_edges, district_shares,
                    district_tallies, population_deviation)

# Closed band endpoints under binary floats: 100*0.55 evaluates to
# 55.000000000000007, which would fall outside (5, 50) without slack.
_BAND_EPS = 1e-9

SWING_RANGE = tuple(range(-5, 6))


@dataclass(frozen=True)
class BandSpec:
    """Half-width y and center z of a vote band, in percentage points."""

    y: float
    z: float

    def __post_init__(self):
        object.__setattr__(self, "y", float(self.y))
        object.__setattr__(self, "z", float(self.z))
        if not (self.y > 0):
            raise ConfigError(f"band half-width must be positive, got {self.y}")
        if not (0.0 <= self.z <= 100.0):
            raise ConfigError(f"band center must be in [0, 100], got {self.z}")

    @property
    def label(self) -> str:
        """Stable column label, e.g. 'band_5.0_50.0'."""
        return f"band_{self.y!r}_{self.z!r}"

    @classmethod
    def from_label(cls, label: str) -> "BandSpec":
        parts = label.split("_")
        if len(parts) != 3 or parts[0] != "band":
            raise ConfigError(f"not a band column label: {label!r}")
        return cls(float(parts[1]), float(parts[2]))


@dataclass(frozen=True)
class CompressionSpec:
    """Fraction threshold x plus the band that defines compression."""

    x: float
    band: BandSpec

    def __post_init__(self):
        if not (0.0 <= self.x <= 1.0):
            raise ConfigError(f"compression fraction must be in [0, 1], got {self.x}")


class SwingPoint(NamedTuple):
    swing: int
    seats: int
    eg: float


def statewide_share(votes: VotePattern) -> float:
    """Statewide Dem share D0 of the two-party vote."""
    return votes.total_dem / votes.total_votes


def seats(shares: Sequence[float]) -> int:
    """Districts carried under strict majority: share > 0.5 exactly."""
    return int(np.count_nonzero(np.asarray(shares, dtype=float) > 0.5))


def in_band(share: float, band: BandSpec) -> bool:
    """Closed-interval band membership for a single share."""
    return abs(100.0 * share - band.z) <= band.y + _BAND_EPS


def band_count(shares: Sequence[float], band: BandSpec) -> int:
    """Number of shares inside the band."""
    s = np.asarray(shares, dtype=float)
    return int(np.count_nonzero(np.abs(100.0 * s - band.z) <= band.y + _BAND_EPS))


def is_compressed(shares: Sequence[float], spec: CompressionSpec) -> bool:
    """At least ceil(x*k) of the k shares are inside the band."""
    k = len(shares)
    required = math.ceil(spec.x * k - _BAND_EPS)
    return band_count(shares, spec.band) >= required


def sliding_band_curve(shares: Sequence[float], y: float,
                       z_grid: Sequence[float]) -> np.ndarray:
    """Band count as the center z slides over a grid, fixed half-width y."""
    if not (y > 0):
        raise ConfigError(f"band half-width must be positive, got {y}")
    s = 100.0 * np.asarray(shares, dtype=float)
    z = np.asarray(z_grid, dtype=float)
    return np.count_nonzero(np.abs(s[None, :] - z[:, None]) <= y + _BAND_EPS, axis=1)


def mean_median(shares: Sequence[float]) -> float:
    """Median share minus mean share; positive favors Dems."""
    s = np.asarray(shares, dtype=float)
    return float(np.median(s) - np.mean(s))


def uniform_swing(shares: Sequence[float], i: int) -> np.ndarray:
    """Add i percentage points to every share, clamped into [0, 1].

    A statewide D0 carried alongside the shares swings the same way
    (D0 + i/100, clamped); see eg_swing_profile.
    """
    s = np.asarray(shares, dtype=float) + i / 100.0
    return np.clip(s, 0.0, 1.0)


def _tally_seats(partition: Partition, votes: VotePattern | None) -> int:
    dem, rep = district_tallies(partition, votes)
    return int(np.count_nonzero(dem > rep))


def _simplified_eg(d0: float, won: int, k: int) -> float:
    return 2.0 * d0 - won / k - 0.5


def turnout_noise(partition: Partition,
                  votes: VotePattern | None = None) -> tuple[float, bool]:
    """Turnout-imbalance correction term of the efficiency gap.

    Returns (noise, defined). The term depends on the ratio rho of mean
    two-party turnout in Dem-won districts to mean turnout in Rep-won
    districts; when either side wins nothing, rho is undefined and the term
    vanishes in the limit, so (0.0, False) is returned. Equal turnout
    (rho == 1) gives exactly 0.
    """
    dem, rep = district_tallies(partition, votes)
    won = dem > rep
    n_won = int(np.count_nonzero(won))
    k = partition.k
    if n_won == 0 or n_won == k:
        return 0.0, False
    turnout = dem + rep
    rho = float(np.mean(turnout[won])) / float(np.mean(turnout[~won]))
    s = n_won / k
    noise = s * (s - 1.0) * (1.0 - rho) / (s * (1.0 - rho) + rho)
    return noise, True


def efficiency_gap(partition: Partition, votes: VotePattern | None = None,
                   include_noise: bool = False) -> float:
    """Efficiency gap from seats won and statewide share.

    EG = 2*D0 - S/k - 1/2, with an optional turnout-imbalance term added when
    include_noise is set. Positive values favor Dems.
    """
    v = votes if votes is not None else partition.votes
    d0 = statewide_share(v)
    won = _tally_seats(partition, votes)
    eg = _simplified_eg(d0, won, partition.k)
    if include_noise:
        eg += turnout_noise(partition, votes)[0]
    return eg


def _swing_points(shares: np.ndarray, d0: float, k: int) -> list[SwingPoint]:
    out = []
    for i in SWING_RANGE:
        swung = uniform_swing(shares, i)
        won = seats(swung)
        d0_i = min(1.0, max(0.0, d0 + i / 100.0))
        out.append(SwingPoint(i, won, _simplified_eg(d0_i, won, k)))
    return out


def eg_swing_profile(partition: Partition,
                     votes: VotePattern | None = None) -> list[SwingPoint]:
    """Seats and simplified EG at every uniform swing i in -5..+5.

    Each point swings both the district shares and the statewide D0 by i
    percentage points (clamped into [0, 1]).
    """
    v = votes if votes is not None else partition.votes
    shares = district_shares(partition, votes, order="district")
    return _swing_points(shares, statewide_share(v), partition.k)


def swing_profile_from_shares(shares: Sequence[float], d0: float) -> list[SwingPoint]:
    """eg_swing_profile for a bare share vector with a given statewide D0."""
    s = np.asarray(shares, dtype=float)
    return _swing_points(s, d0, len(s))


def prescribed_seats(d0: float, k: int, swing: int = 0) -> int:
    """Seats that zero the simplified EG at a swing, rounded half up.

    Solves 2*(D0 + i/100) - S/k - 1/2 = 0 for S, rounds half up, and clamps
    into [0, k].
    """
    if k < 1:
        raise ConfigError(f"district count must be >= 1, got {k}")
    d0_i = min(1.0, max(0.0, d0 + swing / 100.0))
    exact = k * (2.0 * d0_i - 0.5)
    return max(0, min(k, math.floor(exact + 0.5)))


def eg_swing_band_requirement(d0: float, k: int) -> int:
    """Competitive districts needed to keep EG near zero across -5..+5 swing.

    The difference between the prescribed seats at +5 and at -5: the number
    of districts that must change hands over the swing range, i.e. districts
    that need to sit within 5 points of 50%. Tracks k/5 for D0 between 30%
    and 70%.
    """
    return prescribed_seats(d0, k, 5) - prescribed_seats(d0, k, -5)


@dataclass(frozen=True)
class PlanRecord:
    """One plan's scores, as stored in a records CSV row.

    shares are sorted ascending. band_counts is an ordered tuple of
    (BandSpec, count) pairs for whatever bands the run recorded.
    """

    step: int
    shares: tuple[float, ...]
    seats: int
    eg_simple: float
    eg_full: float
    mean_median: float
    cut_edges: int
    pop_deviation: float
    band_counts: tuple[tuple[BandSpec, int], ...] = ()
    source: str = "neutral"

    @property
    def k(self) -> int:
        return len(self.shares)

    def with_source(self, source: str) -> "PlanRecord":
        return PlanRecord(self.step, self.shares, self.seats, self.eg_simple,
                          self.eg_full, self.mean_median, self.cut_edges,
                          self.pop_deviation, self.band_counts, source)


def record_band_count(record: PlanRecord, band: BandSpec) -> int:
    """Cached band count when the record carries it, else computed from shares."""
    for spec, count in record.band_counts:
        if spec == band:
            return count
    return band_count(record.shares, band)


def make_plan_record(partition: Partition, votes: VotePattern | None = None,
                     step: int = 0, bands: Iterable[BandSpec] = (),
                     source: str = "neutral") -> PlanRecord:
    """Score one plan. Seats come from integer tallies, so ties are exact."""
    v = votes if votes is not None else partition.votes
    shares = district_shares(partition, votes, order="ascending")
    d0 = statewide_share(v)
    won = _tally_seats(partition, votes)
    eg_s = _simplified_eg(d0, won, partition.k)
    eg_f = eg_s + turnout_noise(partition, votes)[0]
    return PlanRecord(
        step=step,
        shares=tuple(float(s) for s in shares),
        seats=won,
        eg_simple=eg_s,
        eg_full=eg_f,
        mean_median=mean_median(shares),
        cut_edges=cut_edges(partition),
        pop_deviation=population_deviation(partition),
        band_counts=tuple((b, band_count(shares, b)) for b in bands),
        source=source,
    )
