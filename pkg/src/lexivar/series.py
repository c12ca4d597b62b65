"""Monthly time-series container and basic transforms.

A :class:`TimeSeries` is a contiguous run of monthly observations: missing
months are an ingestion error upstream, never imputed here. All operations
are pure and return new objects.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import AlignmentError, DegenerateInputError
from .months import MonthStamp


class Role(enum.Enum):
    """What a series measures; carried along for reporting."""

    TOPIC_COUNT = "topic_count"
    INDICATOR = "indicator"
    DUMMY = "dummy"


@dataclass(frozen=True)
class TimeSeries:
    """Named monthly series with contiguous, finite values.

    Parameters
    ----------
    name : str
        Identifier used in tables and error messages.
    start : MonthStamp
        Month of the first observation; observation ``i`` falls in
        ``start.add(i)``.
    values : array-like of float
        One value per month, all finite.
    role : Role
        What the series measures.
    """

    name: str
    start: MonthStamp
    values: np.ndarray
    role: Role = Role.INDICATOR

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float)
        if arr.ndim != 1 or arr.size < 1:
            raise DegenerateInputError(f"series {self.name!r} must hold at least one value")
        if not np.all(np.isfinite(arr)):
            bad = int(np.flatnonzero(~np.isfinite(arr))[0])
            raise DegenerateInputError(
                f"series {self.name!r} has a non-finite value at {self.start.add(bad)}"
            )
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return self.values.size

    @property
    def end(self) -> MonthStamp:
        """Month of the last observation."""
        return self.start.add(len(self) - 1)

    def months(self) -> list[MonthStamp]:
        return [self.start.add(i) for i in range(len(self))]

    def slice(self, start: MonthStamp, end: MonthStamp) -> "TimeSeries":
        """Restrict to [start, end]; both months must lie inside the series."""
        i = self.start.months_until(start)
        j = self.start.months_until(end)
        if i < 0 or j >= len(self) or i > j:
            raise AlignmentError(
                f"series {self.name!r} covers {self.start}..{self.end}, "
                f"cannot slice to {start}..{end}"
            )
        return TimeSeries(self.name, start, self.values[i : j + 1], self.role)

    def with_values(self, values, start: MonthStamp | None = None) -> "TimeSeries":
        return TimeSeries(self.name, start or self.start, values, self.role)


@dataclass(frozen=True)
class AcfResult:
    """Sample autocorrelations r(0..max_lag), optionally with partials."""

    lags: int
    correlations: np.ndarray
    partials: np.ndarray | None = field(default=None)


def difference(ts: TimeSeries, d: int = 1) -> TimeSeries:
    """d-th order difference; the start advances by d months.

    Raises
    ------
    DegenerateInputError
        If the series has d or fewer observations.
    """
    if d < 1:
        raise ValueError(f"difference order must be >= 1, got {d}")
    if len(ts) <= d:
        raise DegenerateInputError(
            f"series {ts.name!r} has {len(ts)} values, cannot difference {d} times"
        )
    return ts.with_values(np.diff(ts.values, n=d), start=ts.start.add(d))


def _acf_values(x: np.ndarray, max_lag: int) -> np.ndarray:
    """Autocorrelations r(0..max_lag) with the biased 1/n denominator."""
    x = np.asarray(x, dtype=float)
    n = x.size
    centered = x - x.mean()
    denom = float(centered @ centered)
    if denom <= 0.0:
        raise DegenerateInputError("series has zero variance; autocorrelation undefined")
    out = np.empty(max_lag + 1)
    out[0] = 1.0
    for k in range(1, max_lag + 1):
        out[k] = float(centered[k:] @ centered[:-k]) / denom
    return out


def _durbin_levinson(corr: np.ndarray) -> np.ndarray:
    """Partial autocorrelations from r(0..L) via the Durbin-Levinson recursion."""
    max_lag = corr.size - 1
    pacf = np.empty(max_lag + 1)
    pacf[0] = 1.0
    if max_lag == 0:
        return pacf
    phi = np.zeros((max_lag + 1, max_lag + 1))
    phi[1, 1] = corr[1]
    pacf[1] = corr[1]
    for k in range(2, max_lag + 1):
        num = corr[k] - phi[k - 1, 1:k] @ corr[1:k][::-1]
        den = 1.0 - phi[k - 1, 1:k] @ corr[1:k]
        phi[k, k] = num / den
        phi[k, 1:k] = phi[k - 1, 1:k] - phi[k, k] * phi[k - 1, 1:k][::-1]
        pacf[k] = phi[k, k]
    return pacf


def acf(ts: TimeSeries, max_lag: int, partials: bool = False) -> AcfResult:
    """Sample ACF up to max_lag, and the PACF when requested.

    Uses the biased 1/n denominator so r(0) is exactly 1 and every
    r(k) lies in [-1, 1].

    Raises
    ------
    DegenerateInputError
        If max_lag is not in [1, len(ts)-1] or the series is constant.
    """
    if max_lag < 1:
        raise DegenerateInputError(f"max_lag must be >= 1, got {max_lag}")
    if len(ts) <= max_lag:
        raise DegenerateInputError(
            f"series {ts.name!r} has {len(ts)} values, needs more than max_lag={max_lag}"
        )
    corr = _acf_values(ts.values, max_lag)
    part = _durbin_levinson(corr) if partials else None
    return AcfResult(lags=max_lag, correlations=corr, partials=part)


def align(series: list[TimeSeries]) -> list[TimeSeries]:
    """Trim every series to the intersection of their month ranges.

    Raises
    ------
    AlignmentError
        If the intersection is empty; the message names the series whose
        ranges do not meet.
    """
    if not series:
        return []
    start = max(ts.start for ts in series)
    end = min(ts.end for ts in series)
    if start.months_until(end) < 0:
        spans = ", ".join(f"{ts.name!r} ({ts.start}..{ts.end})" for ts in series)
        raise AlignmentError(f"series have no common month: {spans}")
    return [ts.slice(start, end) for ts in series]


def min_max_normalize(ts: TimeSeries) -> TimeSeries:
    """Rescale to [0, 1]; a constant series maps to all zeros by convention."""
    if len(ts) < 2:
        raise DegenerateInputError(f"series {ts.name!r} needs at least 2 values to normalize")
    lo = float(ts.values.min())
    hi = float(ts.values.max())
    if hi == lo:
        return ts.with_values(np.zeros(len(ts)))
    return ts.with_values((ts.values - lo) / (hi - lo))
