"""Distribution kernels used by every p-value and confidence interval.

Thin validated wrappers around ``math.erf`` and the regularized
incomplete-beta routines in ``scipy.special``. All functions are pure and
thread-safe; there is no module-level mutable state.
"""

import math

from scipy import special

__all__ = ["normal_cdf", "normal_quantile", "t_cdf", "t_quantile"]

_SQRT2 = math.sqrt(2.0)


def normal_cdf(x: float) -> float:
    """Standard normal CDF, accurate to machine precision via erf."""
    if not math.isfinite(x):
        if math.isnan(x):
            raise ValueError("normal_cdf: x must not be NaN")
        return 0.0 if x < 0 else 1.0
    return 0.5 * (1.0 + math.erf(x / _SQRT2))


def normal_quantile(q: float) -> float:
    """Inverse of the standard normal CDF for q in (0, 1)."""
    if not 0.0 < q < 1.0:
        raise ValueError(f"normal_quantile: q must be in (0, 1), got {q}")
    return float(special.ndtri(q))


def t_cdf(x: float, df: float) -> float:
    """CDF of Student's t distribution with df > 0 degrees of freedom."""
    if df <= 0:
        raise ValueError(f"t_cdf: df must be positive, got {df}")
    if math.isnan(x):
        raise ValueError("t_cdf: x must not be NaN")
    return float(special.stdtr(df, x))


def t_quantile(q: float, df: float) -> float:
    """Quantile of Student's t distribution for q in (0, 1).

    Converges to the normal quantile for large df:
    t_quantile(0.975, inf) = 1.959964.
    """
    if df <= 0:
        raise ValueError(f"t_quantile: df must be positive, got {df}")
    if not 0.0 < q < 1.0:
        raise ValueError(f"t_quantile: q must be in (0, 1), got {q}")
    return float(special.stdtrit(df, q))
