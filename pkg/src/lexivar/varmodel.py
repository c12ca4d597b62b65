"""VAR(p) estimation with exogenous step dummies, lag selection, simulation.

Estimation is equation-by-equation OLS on a shared regressor matrix whose
columns are, in order: lag blocks 1..p of all endogenous series, exogenous
dummies, constant, linear trend. Standard errors are the classical
per-equation OLS ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy import stats

from ._kernels import var_recursion
from .errors import DegenerateInputError, SingularDesignError
from .months import MonthStamp

STAR_THRESHOLDS = ((0.001, "***"), (0.01, "**"), (0.05, "*"), (0.10, "+"))


def significance_stars(p_value: float) -> str:
    """Star code for a p-value: + <0.10, * <0.05, ** <0.01, *** <0.001."""
    for cut, mark in STAR_THRESHOLDS:
        if p_value < cut:
            return mark
    return ""


@dataclass(frozen=True)
class PanelDataset:
    """Aligned endogenous series plus exogenous step dummies for one fit.

    Parameters
    ----------
    endog_names : tuple of str
        One name per endogenous series.
    endog : (K, T) array
        Endogenous observations, one row per series.
    exog_names : tuple of str
        One name per dummy row.
    exog : (E, T) array
        Step dummies: each row is 0/1 and non-decreasing over time.
    include_constant, include_trend : bool
        Deterministic terms to estimate.
    start : MonthStamp
        Month of column 0.
    """

    endog_names: tuple[str, ...]
    endog: np.ndarray
    exog_names: tuple[str, ...] = ()
    exog: np.ndarray | None = None
    include_constant: bool = True
    include_trend: bool = True
    start: MonthStamp = MonthStamp(2000, 1)

    def __post_init__(self):
        endog = np.atleast_2d(np.asarray(self.endog, dtype=float))
        if endog.shape[0] != len(self.endog_names):
            raise ValueError("endog row count does not match endog_names")
        if not np.all(np.isfinite(endog)):
            raise DegenerateInputError("endogenous data contains non-finite values")
        exog = self.exog
        if exog is None:
            exog = np.zeros((0, endog.shape[1]))
        exog = np.atleast_2d(np.asarray(exog, dtype=float))
        if exog.shape[0] != len(self.exog_names):
            raise ValueError("exog row count does not match exog_names")
        if exog.shape[0] and exog.shape[1] != endog.shape[1]:
            raise ValueError("endog and exog must share the time dimension")
        for name, row in zip(self.exog_names, exog):
            if not np.all((row == 0.0) | (row == 1.0)):
                raise ValueError(f"dummy {name!r} must contain only 0/1 values")
            if np.any(np.diff(row) < 0):
                raise ValueError(f"dummy {name!r} must be a non-decreasing step")
        object.__setattr__(self, "endog", endog)
        object.__setattr__(self, "exog", exog)
        object.__setattr__(self, "endog_names", tuple(self.endog_names))
        object.__setattr__(self, "exog_names", tuple(self.exog_names))

    @property
    def n_series(self) -> int:
        return self.endog.shape[0]

    @property
    def n_obs(self) -> int:
        return self.endog.shape[1]

    def series_index(self, name: str) -> int:
        try:
            return self.endog_names.index(name)
        except ValueError:
            raise KeyError(f"no endogenous series named {name!r}") from None


@dataclass(frozen=True)
class CoefficientCell:
    """One rendered coefficient: estimate, uncertainty, significance."""

    label: str
    estimate: float
    std_error: float
    p_value: float
    stars: str


@dataclass(frozen=True)
class CoefficientTable:
    equation: str
    rows: tuple[CoefficientCell, ...]
    nobs: int
    r2: float
    r2_adj: float


@dataclass(frozen=True)
class VarModel:
    """Fitted VAR(p): coefficients, uncertainty, residual diagnostics.

    Coefficient layout per equation follows the design matrix: lag blocks
    first (lag 1 holds all K series, then lag 2, ...), then dummies,
    constant, trend. ``coefs[l][i, j]`` is the response of series ``i`` to
    series ``j`` at lag ``l+1``.
    """

    p: int
    endog_names: tuple[str, ...]
    exog_names: tuple[str, ...]
    coefs: np.ndarray
    exog_coefs: np.ndarray
    intercepts: np.ndarray
    trend_coefs: np.ndarray
    include_constant: bool
    include_trend: bool
    params: np.ndarray
    std_errors: np.ndarray
    p_values: np.ndarray
    cov_params: np.ndarray
    residuals: np.ndarray
    sigma: np.ndarray
    sigma_mle: np.ndarray
    nobs: int
    df_resid: int
    r2: np.ndarray
    r2_adj: np.ndarray
    regressor_names: tuple[str, ...]
    data: PanelDataset = field(repr=False)
    xtx_inv: np.ndarray = field(repr=False, default=None)

    @property
    def n_series(self) -> int:
        return len(self.endog_names)

    @property
    def coef_cov(self) -> np.ndarray:
        """Covariance of all stacked coefficients, ``kron(sigma, (X'X)^-1)``.

        Row/column order: equation-major, regressors in design order
        within each equation.
        """
        return np.kron(self.sigma, self.xtx_inv)

    def equation_index(self, name: str) -> int:
        try:
            return self.endog_names.index(name)
        except ValueError:
            raise KeyError(f"no equation for series {name!r}") from None

    def companion_matrix(self) -> np.ndarray:
        return companion_matrix(self.coefs)

    def is_stable(self) -> bool:
        return spectral_radius(self.coefs) < 1.0

    def deterministic_part(self) -> np.ndarray:
        """Fitted constant + trend + dummy contribution, shape (nobs, K)."""
        t_marks = np.arange(self.p + 1, self.p + self.nobs + 1, dtype=float)
        det = np.zeros((self.nobs, self.n_series))
        if self.include_constant:
            det += self.intercepts
        if self.include_trend:
            det += t_marks[:, None] * self.trend_coefs
        if self.exog_coefs.size:
            det += self.data.exog[:, self.p :].T @ self.exog_coefs.T
        return det


def companion_matrix(coefs: np.ndarray) -> np.ndarray:
    """Stack (p, K, K) lag matrices into the pK x pK companion form."""
    coefs = np.asarray(coefs, dtype=float)
    p, k = coefs.shape[0], coefs.shape[1]
    comp = np.zeros((p * k, p * k))
    comp[:k, :] = np.concatenate([coefs[i] for i in range(p)], axis=1)
    if p > 1:
        comp[k:, :-k] = np.eye((p - 1) * k)
    return comp


def spectral_radius(coefs: np.ndarray) -> float:
    return float(np.abs(np.linalg.eigvals(companion_matrix(coefs))).max())


def build_design(data: PanelDataset, p: int, start_row: int | None = None):
    """Regressor matrix and targets for a VAR(p) fit.

    Rows run from ``start_row`` (default ``p``) through the last
    observation; trend values continue the 1-based position within the
    dataset so fits on a common sample remain comparable.

    Returns
    -------
    X : (T_eff, n_params) array
    Y : (T_eff, K) array
    names : tuple of str
        Column labels, ``"<series>.l<lag>"`` for the lag blocks.
    """
    if p < 1:
        raise ValueError(f"lag order must be >= 1, got {p}")
    first = p if start_row is None else start_row
    if first < p:
        raise ValueError("start_row cannot precede the lag order")
    y = data.endog.T
    t_total = data.n_obs
    if first >= t_total:
        raise DegenerateInputError(
            f"no regression rows left: {t_total} observations at lag {p}"
        )
    rows = t_total - first
    blocks = []
    names: list[str] = []
    for lag in range(1, p + 1):
        blocks.append(y[first - lag : t_total - lag])
        names.extend(f"{name}.l{lag}" for name in data.endog_names)
    if data.exog.shape[0]:
        blocks.append(data.exog[:, first:].T)
        names.extend(data.exog_names)
    if data.include_constant:
        blocks.append(np.ones((rows, 1)))
        names.append("const")
    if data.include_trend:
        blocks.append(np.arange(first + 1, t_total + 1, dtype=float).reshape(-1, 1))
        names.append("trend")
    x = np.concatenate(blocks, axis=1)
    return x, y[first:], tuple(names)


def _check_full_rank(x: np.ndarray, names: tuple[str, ...]):
    _, r, piv = scipy.linalg.qr(x, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    tol = max(x.shape) * np.finfo(float).eps * (diag[0] if diag.size else 0.0)
    rank = int(np.sum(diag > tol))
    if rank < x.shape[1]:
        bad = sorted(names[j] for j in piv[rank:])
        raise SingularDesignError(
            f"design matrix is rank deficient; collinear columns: {', '.join(bad)}"
        )


def fit_var(data: PanelDataset, p: int) -> VarModel:
    """Estimate a VAR(p) by per-equation OLS.

    Raises
    ------
    DegenerateInputError
        If fewer than ``n_params + 1`` usable rows remain after lagging.
    SingularDesignError
        If the regressor matrix is rank deficient; the collinear columns
        are named in the message.
    """
    x, y, names = build_design(data, p)
    t_eff, n_params = x.shape
    k = data.n_series
    if t_eff < n_params + 1:
        raise DegenerateInputError(
            f"{t_eff} rows cannot support {n_params} coefficients per equation"
        )
    _check_full_rank(x, names)

    params, _, _, _ = np.linalg.lstsq(x, y, rcond=None)
    resid = y - x @ params
    df_resid = t_eff - n_params
    xtx_inv = np.linalg.inv(x.T @ x)
    s2 = np.einsum("ij,ij->j", resid, resid) / df_resid
    std_errors = np.sqrt(np.outer(s2, np.diag(xtx_inv)))
    t_stats = params.T / std_errors
    p_values = 2.0 * stats.t.sf(np.abs(t_stats), df_resid)
    cov_params = s2[:, None, None] * xtx_inv[None, :, :]

    sst = np.sum((y - y.mean(axis=0)) ** 2, axis=0) if data.include_constant else np.sum(y**2, axis=0)
    ssr = np.sum(resid**2, axis=0)
    r2 = 1.0 - ssr / sst
    adj_scale = (t_eff - 1 if data.include_constant else t_eff) / df_resid
    r2_adj = 1.0 - (1.0 - r2) * adj_scale

    n_exog = len(data.exog_names)
    coefs = np.empty((p, k, k))
    for lag in range(p):
        coefs[lag] = params[lag * k : (lag + 1) * k].T
    pos = p * k
    exog_coefs = params[pos : pos + n_exog].T.copy()
    pos += n_exog
    intercepts = params[pos].copy() if data.include_constant else np.zeros(k)
    pos += int(data.include_constant)
    trend_coefs = params[pos].copy() if data.include_trend else np.zeros(k)

    sigma = resid.T @ resid / df_resid
    sigma_mle = resid.T @ resid / t_eff

    return VarModel(
        p=p,
        endog_names=data.endog_names,
        exog_names=data.exog_names,
        coefs=coefs,
        exog_coefs=exog_coefs,
        intercepts=intercepts,
        trend_coefs=trend_coefs,
        include_constant=data.include_constant,
        include_trend=data.include_trend,
        params=params.T,
        std_errors=std_errors,
        p_values=p_values,
        cov_params=cov_params,
        residuals=resid.T,
        sigma=sigma,
        sigma_mle=sigma_mle,
        nobs=t_eff,
        df_resid=df_resid,
        r2=r2,
        r2_adj=r2_adj,
        regressor_names=names,
        data=data,
        xtx_inv=xtx_inv,
    )


def select_lag(data: PanelDataset, max_lag: int = 6, criterion: str = "SC") -> int:
    """Pick the lag order 1..max_lag minimizing the Schwarz criterion.

    All candidate fits share the rows available at ``max_lag`` so the
    criteria are comparable; ties break toward the smaller lag. The
    criterion value is ``ln det(Sigma_mle) + (ln T*/T*) * n_coef_per_eq * K``.
    """
    if criterion.upper() not in ("SC", "BIC"):
        raise ValueError(f"unknown criterion {criterion!r}; use 'SC' or 'BIC'")
    if max_lag < 1:
        raise ValueError(f"max_lag must be >= 1, got {max_lag}")
    k = data.n_series
    best_p, best_value = 0, np.inf
    for p in range(1, max_lag + 1):
        x, y, names = build_design(data, p, start_row=max_lag)
        t_star, n_params = x.shape
        if t_star < n_params + 1:
            raise DegenerateInputError(
                f"not estimable at lag {max_lag}: {t_star} common rows for "
                f"{n_params} coefficients"
            )
        _check_full_rank(x, names)
        params, _, _, _ = np.linalg.lstsq(x, y, rcond=None)
        resid = y - x @ params
        sigma = resid.T @ resid / t_star
        sign, logdet = np.linalg.slogdet(sigma)
        if sign <= 0:
            raise DegenerateInputError(f"singular residual covariance at lag {p}")
        value = logdet + (np.log(t_star) / t_star) * n_params * k
        if value < best_value:
            best_p, best_value = p, value
    return best_p


def coefficient_table(model: VarModel, equation: str) -> CoefficientTable:
    """Rows for one equation in publication order.

    Variable-major lag rows first (all lags of the first series, then the
    next), then dummies, constant, trend; per-statistic footer fields carry
    the observation count and fit statistics.
    """
    eq = model.equation_index(equation)
    k = model.n_series
    order: list[tuple[str, int]] = []
    for j, name in enumerate(model.endog_names):
        for lag in range(1, model.p + 1):
            order.append((f"{name} (-{lag})", (lag - 1) * k + j))
    pos = model.p * k
    for name in model.exog_names:
        order.append((name, pos))
        pos += 1
    if model.include_constant:
        order.append(("Constant", pos))
        pos += 1
    if model.include_trend:
        order.append(("Trend", pos))
    rows = tuple(
        CoefficientCell(
            label=label,
            estimate=float(model.params[eq, idx]),
            std_error=float(model.std_errors[eq, idx]),
            p_value=float(model.p_values[eq, idx]),
            stars=significance_stars(float(model.p_values[eq, idx])),
        )
        for label, idx in order
    )
    return CoefficientTable(
        equation=equation,
        rows=rows,
        nobs=model.nobs,
        r2=float(model.r2[eq]),
        r2_adj=float(model.r2_adj[eq]),
    )


def simulate_var(
    coefs,
    sigma,
    intercepts=None,
    trend_coefs=None,
    exog_coefs=None,
    exog=None,
    n_obs: int = 200,
    seed: int | None = None,
    names: tuple[str, ...] | None = None,
    exog_names: tuple[str, ...] = (),
    start: MonthStamp = MonthStamp(2000, 1),
    burn: int = 100,
    include_constant: bool = True,
    include_trend: bool | None = None,
) -> PanelDataset:
    """Draw a Gaussian VAR(p) sample for oracle testing.

    Deterministic given ``seed``; at least ``burn`` pre-sample steps are
    discarded. The deterministic parameterization matches :func:`fit_var`
    (trend value is the 1-based position in the emitted window), so fitted
    coefficients estimate exactly the inputs given here.

    Raises
    ------
    ValueError
        If ``sigma`` is not symmetric positive definite, or the companion
        spectral radius is >= 1.
    """
    coefs = np.asarray(coefs, dtype=float)
    if coefs.ndim == 2:
        coefs = coefs[None, :, :]
    p, k = coefs.shape[0], coefs.shape[1]
    sigma = np.asarray(sigma, dtype=float)
    if sigma.shape != (k, k) or not np.allclose(sigma, sigma.T):
        raise ValueError("sigma must be a symmetric K x K matrix")
    try:
        chol = np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError:
        raise ValueError("sigma must be positive definite") from None
    radius = spectral_radius(coefs)
    if radius >= 1.0:
        raise ValueError(f"companion spectral radius {radius:.3f} >= 1; not stationary")
    if burn < 100:
        raise ValueError(f"burn-in must be >= 100, got {burn}")

    c = np.zeros(k) if intercepts is None else np.asarray(intercepts, dtype=float)
    tau = np.zeros(k) if trend_coefs is None else np.asarray(trend_coefs, dtype=float)
    if (exog is None) != (exog_coefs is None):
        raise ValueError("exog and exog_coefs must be supplied together")

    total = burn + n_obs
    rng = np.random.default_rng(seed)
    shocks = rng.standard_normal((total, k)) @ chol.T
    # Trend continues backward through the burn-in so the process is
    # already fluctuating around its trend line when the window opens.
    t_marks = np.arange(-burn + 1, n_obs + 1, dtype=float)
    preset = shocks + c + t_marks[:, None] * tau
    if exog is not None:
        exog = np.atleast_2d(np.asarray(exog, dtype=float))
        b = np.asarray(exog_coefs, dtype=float).reshape(k, -1)
        if exog.shape != (b.shape[1], n_obs):
            raise ValueError("exog must be (E, n_obs) matching exog_coefs")
        preset[burn:] += exog.T @ b.T
    path = var_recursion(coefs, preset, np.zeros((p, k)))

    if names is None:
        names = tuple(f"y{i + 1}" for i in range(k))
    return PanelDataset(
        endog_names=names,
        endog=path[burn:].T,
        exog_names=exog_names if exog is not None else (),
        exog=exog,
        include_constant=include_constant,
        include_trend=(trend_coefs is not None) if include_trend is None else include_trend,
        start=start,
    )
