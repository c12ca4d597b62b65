"""Augmented Dickey-Fuller testing and automatic differencing."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, NonStationarityError, SingularDesignError
from .series import TimeSeries, difference

# Critical-value surface for the studentized unit-root statistic, tabulated
# by regression kind, cumulative probability (rows) and sample size
# (columns: 25, 50, 100, 250, 500, asymptotic). Fuller (1996), as used by
# the common R implementations; probabilities outside the tabulated range
# are clamped, which is why small-sample rejections saturate at 0.01.
_TABLE_SIZES = np.array([25.0, 50.0, 100.0, 250.0, 500.0, 1e5])
_TABLE_P = np.array([0.01, 0.025, 0.05, 0.10, 0.90, 0.95, 0.975, 0.99])

_TAU_CONSTANT = np.array(
    [
        [-3.75, -3.58, -3.51, -3.46, -3.44, -3.43],
        [-3.33, -3.22, -3.17, -3.14, -3.13, -3.12],
        [-3.00, -2.93, -2.89, -2.88, -2.87, -2.86],
        [-2.63, -2.60, -2.58, -2.57, -2.57, -2.57],
        [-0.37, -0.40, -0.42, -0.42, -0.43, -0.44],
        [0.00, -0.03, -0.05, -0.06, -0.07, -0.07],
        [0.34, 0.29, 0.26, 0.24, 0.24, 0.23],
        [0.72, 0.66, 0.63, 0.62, 0.61, 0.60],
    ]
)

_TAU_CONSTANT_TREND = np.array(
    [
        [-4.38, -4.15, -4.04, -3.99, -3.98, -3.96],
        [-3.95, -3.80, -3.73, -3.69, -3.68, -3.66],
        [-3.60, -3.50, -3.45, -3.43, -3.42, -3.41],
        [-3.24, -3.18, -3.15, -3.13, -3.13, -3.12],
        [-1.14, -1.19, -1.22, -1.23, -1.24, -1.25],
        [-0.80, -0.87, -0.90, -0.92, -0.93, -0.94],
        [-0.50, -0.58, -0.62, -0.64, -0.65, -0.66],
        [-0.15, -0.24, -0.28, -0.31, -0.32, -0.33],
    ]
)

_TABLES = {
    "constant": _TAU_CONSTANT,
    "constant_and_trend": _TAU_CONSTANT_TREND,
}


@dataclass(frozen=True)
class AdfResult:
    """Outcome of one unit-root test.

    ``p_value`` is interpolated from the tabulated surface and therefore
    always lies in [0.01, 0.99].
    """

    series_name: str
    statistic: float
    p_value: float
    lag_order: int
    regression: str
    n_obs: int

    def rejects(self, alpha: float = 0.05) -> bool:
        return self.p_value < alpha


def _interpolated_p(statistic: float, n_obs: int, regression: str) -> float:
    table = _TABLES[regression]
    at_size = np.array([np.interp(n_obs, _TABLE_SIZES, row) for row in table])
    return float(np.interp(statistic, at_size, _TABLE_P))


def adf_test(
    ts: TimeSeries,
    regression: str = "constant_and_trend",
    lag: int | None = None,
) -> AdfResult:
    """Augmented Dickey-Fuller test for a unit root.

    Regresses the first difference on the lagged level, ``lag`` lagged
    differences, and deterministic terms; the test statistic is the t-ratio
    on the lagged level. ``lag=None`` uses ``trunc((n - 1)**(1/3))``.

    Parameters
    ----------
    ts : TimeSeries
    regression : {"constant_and_trend", "constant"}
        Deterministic terms in the test regression.
    lag : int, optional
        Number of lagged-difference terms; non-negative.

    Raises
    ------
    DegenerateInputError
        If the series is constant or too short for the requested lag.
    SingularDesignError
        If the test regression is collinear.
    """
    if regression not in _TABLES:
        raise ValueError(
            f"unknown regression kind {regression!r}; "
            f"expected one of {sorted(_TABLES)}"
        )
    n = len(ts)
    values = ts.values
    if np.ptp(values) == 0.0:
        raise DegenerateInputError(
            f"series {ts.name!r} is constant; unit-root test is undefined"
        )
    if lag is None:
        lag = int(np.trunc((n - 1) ** (1.0 / 3.0)))
    elif lag < 0:
        raise ValueError(f"lag must be non-negative, got {lag}")
    if n < lag + 10:
        raise DegenerateInputError(
            f"series {ts.name!r} has {n} observations; "
            f"need at least {lag + 10} for lag {lag}"
        )

    dy = np.diff(values)
    rows = n - 1 - lag
    # Columns: lagged level, lagged differences, constant, (trend).
    cols = [values[lag:-1]]
    names = ["level.l1"]
    for i in range(1, lag + 1):
        cols.append(dy[lag - i : len(dy) - i])
        names.append(f"diff.l{i}")
    cols.append(np.ones(rows))
    names.append("const")
    if regression == "constant_and_trend":
        cols.append(np.arange(lag + 1, n, dtype=float))
        names.append("trend")
    x = np.column_stack(cols)
    y = dy[lag:]

    if np.linalg.matrix_rank(x) < x.shape[1]:
        raise SingularDesignError(
            f"unit-root regression for {ts.name!r} is collinear "
            f"({rows} rows, {x.shape[1]} columns)"
        )
    beta, _, _, _ = np.linalg.lstsq(x, y, rcond=None)
    resid = y - x @ beta
    df = rows - x.shape[1]
    if df < 1:
        raise DegenerateInputError(
            f"series {ts.name!r}: no residual degrees of freedom at lag {lag}"
        )
    s2 = resid @ resid / df
    xtx_inv = np.linalg.inv(x.T @ x)
    stat = float(beta[0] / np.sqrt(s2 * xtx_inv[0, 0]))

    return AdfResult(
        series_name=ts.name,
        statistic=stat,
        p_value=_interpolated_p(stat, rows, regression),
        lag_order=lag,
        regression=regression,
        n_obs=rows,
    )


def ensure_stationary(
    ts: TimeSeries,
    alpha: float = 0.05,
    max_d: int = 2,
    regression: str = "constant_and_trend",
    lag: int | None = None,
) -> tuple[TimeSeries, int]:
    """Difference ``ts`` until the unit-root null is rejected at ``alpha``.

    Returns the transformed series and the differencing order applied.
    Raises :class:`NonStationarityError` when ``max_d`` rounds are not
    enough.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    if max_d < 0:
        raise ValueError(f"max_d must be non-negative, got {max_d}")
    current = ts
    result = None
    for d in range(max_d + 1):
        result = adf_test(current, regression=regression, lag=lag)
        if result.rejects(alpha):
            return current, d
        if d < max_d:
            current = difference(current)
    raise NonStationarityError(
        f"series {ts.name!r} still non-stationary after {max_d} difference(s) "
        f"(last p-value {result.p_value:.3f} at alpha {alpha})"
    )
