"""Granger non-causality testing on augmented VAR fits."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy import stats

from .errors import SingularDesignError
from .varmodel import PanelDataset, VarModel, fit_var


@dataclass(frozen=True)
class GrangerResult:
    """Wald test of zero coefficients on one series in another's equation."""

    cause: str
    effect: str
    lags: int
    d_max: int
    statistic: float
    p_value: float
    df: int


def toda_yamamoto_granger(
    data: PanelDataset,
    p: int,
    cause: str,
    effect: str,
    d_max: int = 0,
) -> GrangerResult:
    """Test whether ``cause`` Granger-causes ``effect``.

    Fits a VAR(p + d_max) and Wald-tests the coefficients of ``cause`` at
    lags 1..p in the ``effect`` equation against zero; the extra ``d_max``
    lags absorb possible residual integration and are never restricted, so
    the statistic keeps its chi-square(p) reference distribution.
    """
    if cause == effect:
        raise ValueError("cause and effect must name different series")
    if d_max < 0:
        raise ValueError(f"d_max must be non-negative, got {d_max}")
    model = fit_var(data, p + d_max)
    return wald_exclusion(model, cause=cause, effect=effect, lags=p, d_max=d_max)


def wald_exclusion(
    model: VarModel,
    cause: str,
    effect: str,
    lags: int | None = None,
    d_max: int = 0,
) -> GrangerResult:
    """Wald exclusion test on an already-fitted model.

    ``lags`` defaults to the model's full order; restricting fewer lags
    than fitted is how augmented-fit testing is expressed.
    """
    if lags is None:
        lags = model.p - d_max
    if not 1 <= lags <= model.p:
        raise ValueError(f"cannot restrict {lags} lags of a VAR({model.p})")
    eq = model.equation_index(effect)
    k = model.n_series
    j = model.equation_index(cause)
    positions = [(lag - 1) * k + j for lag in range(1, lags + 1)]
    b = model.params[eq, positions]
    v = model.cov_params[eq][np.ix_(positions, positions)]
    try:
        cho = scipy.linalg.cho_factor(v)
    except scipy.linalg.LinAlgError:
        raise SingularDesignError(
            f"restriction covariance for {cause!r} -> {effect!r} is singular"
        ) from None
    statistic = float(b @ scipy.linalg.cho_solve(cho, b))
    p_value = float(stats.chi2.sf(statistic, lags))
    return GrangerResult(
        cause=cause,
        effect=effect,
        lags=lags,
        d_max=d_max,
        statistic=statistic,
        p_value=p_value,
        df=lags,
    )
