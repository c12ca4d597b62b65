"""Hot-loop kernels: compiled extension when available, numpy fallback otherwise.

The sequential autoregressive recursion is the one loop numpy cannot
vectorize (each step feeds the next); simulation and the residual
bootstrap both run through it.
"""

try:
    from ._native import var_recursion

    BACKEND = "native"
except ImportError:  # extension not built on this install
    from ._fallback import var_recursion

    BACKEND = "python"

__all__ = ["var_recursion", "BACKEND"]
