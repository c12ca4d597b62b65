"""Pure-numpy implementation of the recursion kernel."""

import numpy as np


def var_recursion(coefs, preset, initial):
    """Run the autoregressive recursion y[t] = preset[t] + sum_i A_i y[t-i].

    Parameters
    ----------
    coefs : (p, K, K) array
        Lag coefficient matrices A_1..A_p.
    preset : (T, K) array
        Everything except the lag terms: deterministic part plus shocks.
    initial : (p, K) array
        Pre-sample values, oldest first (initial[-1] is y at t = -1).

    Returns
    -------
    (T, K) array
    """
    coefs = np.asarray(coefs, dtype=float)
    preset = np.asarray(preset, dtype=float)
    initial = np.asarray(initial, dtype=float)
    p, k = coefs.shape[0], coefs.shape[1]
    t_len = preset.shape[0]
    # Stacked (K, p*K) matrix applied to the concatenated lag vector
    # [y[t-1], y[t-2], ..., y[t-p]].
    stacked = np.concatenate([coefs[i] for i in range(p)], axis=1)
    out = np.empty((t_len, k))
    lagvec = initial[::-1].reshape(-1).copy()
    for t in range(t_len):
        out[t] = preset[t] + stacked @ lagvec
        if p > 1:
            lagvec[k:] = lagvec[:-k]
        lagvec[:k] = out[t]
    return out
