"""Impulse responses with bootstrap confidence bands."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import var_recursion
from .errors import DegenerateInputError, SingularDesignError
from .varmodel import PanelDataset, VarModel, fit_var, spectral_radius


@dataclass(frozen=True)
class IrfResult:
    """Response path of one series to a shock in another.

    ``point[h]`` is the response at horizon ``h`` to a one-standard-
    deviation orthogonalized shock (or a unit reduced-form shock when
    ``orthogonalized`` is off); the bands are bootstrap percentiles.
    ``unstable`` flags a point estimate whose companion matrix has
    spectral radius >= 1, in which case the responses do not die out and
    should be read with care.
    """

    impulse: str
    response: str
    horizons: np.ndarray
    point: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    orthogonalized: bool
    ci_level: float
    boot_reps: int
    seed: int | None
    unstable: bool
    n_failed: int


def ma_coefficients(coefs: np.ndarray, horizon: int) -> np.ndarray:
    """Moving-average matrices Phi_0..Phi_H of a VAR, Phi_0 = I.

    Computed by the standard recursion
    ``Phi_i = sum_{j=1..min(i,p)} Phi_{i-j} A_j``; for a VAR(1) this
    collapses to matrix powers of the coefficient matrix.
    """
    coefs = np.asarray(coefs, dtype=float)
    p, k = coefs.shape[0], coefs.shape[1]
    phi = np.zeros((horizon + 1, k, k))
    phi[0] = np.eye(k)
    for i in range(1, horizon + 1):
        for j in range(1, min(i, p) + 1):
            phi[i] += phi[i - j] @ coefs[j - 1]
    return phi


def orthogonal_responses(model: VarModel, horizon: int) -> np.ndarray:
    """Theta_0..Theta_H where ``Theta_h = Phi_h @ chol(sigma)``.

    ``Theta_h[i, j]`` is the response of series ``i`` at horizon ``h`` to a
    one-standard-deviation orthogonalized shock in series ``j``; impact
    responses of series ordered before the shocked one are exactly zero.
    """
    chol = np.linalg.cholesky(model.sigma)
    return ma_coefficients(model.coefs, horizon) @ chol


def _responses(model: VarModel, horizon: int, orthogonalized: bool) -> np.ndarray:
    if orthogonalized:
        return orthogonal_responses(model, horizon)
    return ma_coefficients(model.coefs, horizon)


def _rebuilt_path(model: VarModel, resampled: np.ndarray) -> np.ndarray:
    """Endogenous path (T, K) regenerated from resampled residuals."""
    p = model.p
    initial = model.data.endog[:, :p].T.copy()
    preset = model.deterministic_part() + resampled
    rest = var_recursion(model.coefs, preset, initial)
    return np.vstack([initial, rest])


def irf(
    model: VarModel,
    impulse: str,
    response: str,
    horizon: int = 10,
    orthogonalized: bool = True,
    boot_reps: int = 500,
    ci_level: float = 0.95,
    seed: int | None = None,
) -> IrfResult:
    """Impulse response of ``response`` to a shock in ``impulse``.

    Point responses are ``Phi_h @ chol(sigma)`` when orthogonalized, bare
    ``Phi_h`` otherwise. Bands come from a residual bootstrap: each
    replicate resamples the fitted residual rows with replacement,
    regenerates the sample from the fitted dynamics (first ``p``
    observations held fixed), refits, and records its response path; bands
    are the ``(1 - ci_level)/2`` and ``(1 + ci_level)/2`` percentiles
    across replicates. Replicate streams are spawned from a single seed
    sequence, so results are reproducible and independent of evaluation
    order. Replicates whose refit is singular or non-finite are dropped
    and counted in ``n_failed``.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    if boot_reps < 1:
        raise ValueError(f"boot_reps must be positive, got {boot_reps}")
    if not 0.0 < ci_level < 1.0:
        raise ValueError(f"ci_level must be in (0, 1), got {ci_level}")
    imp = model.equation_index(impulse)
    resp = model.equation_index(response)

    point = _responses(model, horizon, orthogonalized)[:, resp, imp]
    unstable = spectral_radius(model.coefs) >= 1.0

    t_eff = model.nobs
    resid_rows = model.residuals.T
    draws = np.full((boot_reps, horizon + 1), np.nan)
    n_failed = 0
    children = np.random.SeedSequence(seed).spawn(boot_reps)
    for r in range(boot_reps):
        rng = np.random.default_rng(children[r])
        resampled = resid_rows[rng.integers(0, t_eff, t_eff)]
        path = _rebuilt_path(model, resampled)
        if not np.all(np.isfinite(path)):
            n_failed += 1
            continue
        boot_data = PanelDataset(
            endog_names=model.endog_names,
            endog=path.T,
            exog_names=model.exog_names,
            exog=model.data.exog,
            include_constant=model.include_constant,
            include_trend=model.include_trend,
            start=model.data.start,
        )
        try:
            refit = fit_var(boot_data, model.p)
            draws[r] = _responses(refit, horizon, orthogonalized)[:, resp, imp]
        except (SingularDesignError, DegenerateInputError, np.linalg.LinAlgError):
            n_failed += 1

    good = draws[np.all(np.isfinite(draws), axis=1)]
    if not len(good):
        raise DegenerateInputError(
            f"all {boot_reps} bootstrap replicates failed for "
            f"{impulse!r} -> {response!r}"
        )
    half = 100.0 * (1.0 - ci_level) / 2.0
    lower = np.percentile(good, half, axis=0)
    upper = np.percentile(good, 100.0 - half, axis=0)

    return IrfResult(
        impulse=impulse,
        response=response,
        horizons=np.arange(horizon + 1),
        point=point,
        lower=lower,
        upper=upper,
        orthogonalized=orthogonalized,
        ci_level=ci_level,
        boot_reps=boot_reps,
        seed=seed,
        unstable=unstable,
        n_failed=n_failed,
    )
