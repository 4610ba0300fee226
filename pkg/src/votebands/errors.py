"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: ConfigError -> 2, DataError -> 3,
InfeasibleError -> 4. Everything else is a plain bug and crashes loudly.
"""


class VotebandsError(Exception):
    """Base class for all package errors."""


class ConfigError(VotebandsError):
    """A configuration value is missing, malformed, or out of range."""


class DataError(VotebandsError):
    """An input document violates the graph/vote/record schema."""


class InfeasibleError(VotebandsError):
    """A requested computation has no solution under the given constraints."""


class ZeroVoteDistrictError(DataError):
    """A district has zero total two-party votes, so its share is undefined."""

    def __init__(self, district: int):
        self.district = district
        super().__init__(f"district {district} has zero two-party votes")


class AuditError(VotebandsError):
    """Cached partition state disagrees with a from-scratch recomputation."""
