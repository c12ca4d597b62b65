"""Post-fit diagnostics: cointegration rank and residual whiteness."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy import stats

from .errors import DegenerateInputError
from .series import TimeSeries, _acf_values
from .varmodel import PanelDataset

# Trace-statistic critical values (90/95/99%) with the constant restricted
# to the cointegrating relation, indexed by the number of common trends
# K - r under the null. Osterwald-Lenum (1992), Table 1*.
_TRACE_CRIT = {
    1: (7.52, 9.24, 12.97),
    2: (17.85, 19.96, 24.60),
    3: (32.00, 34.91, 41.07),
    4: (49.65, 53.12, 60.16),
    5: (71.86, 76.07, 84.45),
}


@dataclass(frozen=True)
class JohansenRankRow:
    """One null hypothesis ``rank <= r`` of the trace test."""

    rank_null: int
    statistic: float
    cv_90: float
    cv_95: float
    cv_99: float
    p_value: float


@dataclass(frozen=True)
class JohansenResult:
    eigenvalues: np.ndarray
    rows: tuple[JohansenRankRow, ...]
    lag: int
    n_obs: int

    def selected_rank(self, alpha: float = 0.05) -> int:
        """Smallest r whose null is not rejected; K if all are."""
        for row in self.rows:
            if row.p_value >= alpha:
                return row.rank_null
        return len(self.rows)


def _interp_trace_p(statistic: float, cv: tuple[float, float, float]) -> float:
    # Piecewise-linear through the tabulated tail points, clamped to
    # [0.01, 0.99] outside the table.
    xp = np.array([0.0, cv[0], cv[1], cv[2]])
    fp = np.array([0.99, 0.10, 0.05, 0.01])
    return float(np.interp(statistic, xp, fp))


def johansen_trace(data: PanelDataset, lag: int = 2) -> JohansenResult:
    """Johansen trace test with a restricted constant.

    The vector error-correction form regresses the first differences on
    the once-lagged levels (with an appended constant inside the
    cointegrating relation), ``lag - 1`` lagged differences, and any step
    dummies from ``data``; the eigenvalues of the reduced-rank problem give
    the trace statistic ``-n * sum(log(1 - lambda))`` for each null rank.
    P-values are interpolated from the tabulated critical values, so they
    live in [0.01, 0.99].
    """
    if lag < 1:
        raise ValueError(f"lag must be >= 1, got {lag}")
    k = data.n_series
    if k < 2:
        raise ValueError("cointegration testing needs at least two series")
    if k > max(_TRACE_CRIT):
        raise ValueError(
            f"critical values tabulated only up to {max(_TRACE_CRIT)} series"
        )
    y = data.endog.T
    t_total = data.n_obs
    n = t_total - lag
    if n < k * lag + k + 3:
        raise DegenerateInputError(
            f"{t_total} observations are too few for a lag-{lag} "
            "cointegration test"
        )

    dy = np.diff(y, axis=0)
    z0 = dy[lag - 1 :]
    z1 = np.column_stack([y[lag - 1 : t_total - 1], np.ones(n)])
    z2_cols = [dy[lag - 1 - i : len(dy) - i] for i in range(1, lag)]
    if data.exog.shape[0]:
        z2_cols.append(data.exog[:, lag:].T)
    if z2_cols:
        z2 = np.concatenate(z2_cols, axis=1)
        stacked = np.column_stack([z0, z1])
        proj, _, _, _ = np.linalg.lstsq(z2, stacked, rcond=None)
        resid = stacked - z2 @ proj
        r0, r1 = resid[:, :k], resid[:, k:]
    else:
        r0, r1 = z0, z1

    s00 = r0.T @ r0 / n
    s11 = r1.T @ r1 / n
    s01 = r0.T @ r1 / n
    try:
        c11 = np.linalg.cholesky(s11)
        s00_inv = np.linalg.inv(s00)
    except np.linalg.LinAlgError:
        raise DegenerateInputError(
            "degenerate moment matrices in cointegration test"
        ) from None
    # Symmetrize the generalized eigenproblem
    # |lambda*S11 - S10 S00^-1 S01| = 0 through the Cholesky factor of S11.
    c_inv = scipy.linalg.solve_triangular(c11, np.eye(k + 1), lower=True)
    m = c_inv @ s01.T @ s00_inv @ s01 @ c_inv.T
    eigvals = np.linalg.eigvalsh(m)[::-1]
    # The restricted constant adds one dimension; only K eigenvalues are
    # meaningful for the rank sequence.
    eigvals = np.clip(eigvals[:k], 0.0, 1.0 - 1e-12)

    rows = []
    for r in range(k):
        statistic = float(-n * np.sum(np.log1p(-eigvals[r:])))
        cv = _TRACE_CRIT[k - r]
        rows.append(
            JohansenRankRow(
                rank_null=r,
                statistic=statistic,
                cv_90=cv[0],
                cv_95=cv[1],
                cv_99=cv[2],
                p_value=_interp_trace_p(statistic, cv),
            )
        )
    return JohansenResult(
        eigenvalues=eigvals, rows=tuple(rows), lag=lag, n_obs=n
    )


@dataclass(frozen=True)
class LjungBoxResult:
    statistic: float
    p_value: float
    lags: int
    fit_df: int
    n_obs: int


def ljung_box(values, lags: int = 10, fit_df: int = 0) -> LjungBoxResult:
    """Portmanteau test that the first ``lags`` autocorrelations are zero.

    ``Q = n (n + 2) sum_{k=1..m} r_k^2 / (n - k)`` referred to a
    chi-square with ``lags - fit_df`` degrees of freedom; ``fit_df``
    discounts parameters already fitted to the tested residuals.
    """
    if isinstance(values, TimeSeries):
        values = values.values
    values = np.asarray(values, dtype=float)
    if values.ndim != 1:
        raise ValueError("expected a one-dimensional residual array")
    n = len(values)
    if lags < 1:
        raise ValueError(f"lags must be positive, got {lags}")
    if not 0 <= fit_df < lags:
        raise ValueError(
            f"fit_df must lie in [0, lags); got fit_df={fit_df}, lags={lags}"
        )
    if n <= lags:
        raise DegenerateInputError(
            f"need more than {lags} observations, got {n}"
        )
    corr = _acf_values(values, lags)[1:]
    ks = np.arange(1, lags + 1)
    statistic = float(n * (n + 2.0) * np.sum(corr**2 / (n - ks)))
    p_value = float(stats.chi2.sf(statistic, lags - fit_df))
    return LjungBoxResult(
        statistic=statistic,
        p_value=p_value,
        lags=lags,
        fit_df=fit_df,
        n_obs=n,
    )
