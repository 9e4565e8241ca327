"""Standard normal CDF.

Built on the error function so tails underflow gracefully; monotone, which
keeps interval probabilities non-negative no matter how close two comparison
thresholds sit.
"""

from __future__ import annotations

import math

_SQRT2 = math.sqrt(2.0)


def normal_cdf(x: float, mean: float = 0.0, sigma: float = 1.0) -> float:
    """P(X <= x) for X ~ Normal(mean, sigma^2)."""
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if math.isinf(mean):
        # Sentinel for "no feature of this class": infinitely far away.
        return 0.0 if mean > 0 else 1.0
    z = (x - mean) / sigma
    return 0.5 * math.erfc(-z / _SQRT2)
