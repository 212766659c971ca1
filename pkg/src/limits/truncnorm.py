"""Normal distribution truncated below at ``lower``: CDF and percent point function.

Both work with the standard normal CDF ``ndtr`` and its inverse ``ndtri``.
When the truncation point lies above the mean the upper tail ``ndtr(-a)``
is used instead of ``1 - ndtr(a)`` so that far-truncated cases keep their
precision.
"""

import math

from scipy.special import ndtr, ndtri

from ..errors import DomainError


def _standardize(mu: float, sigma: float, lower: float) -> float:
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    return (lower - mu) / sigma


def truncated_normal_cdf(x: float, mu: float, sigma: float, lower: float = 0.0) -> float:
    """CDF at ``x`` of Normal(mu, sigma) truncated below at ``lower``."""
    a = _standardize(mu, sigma, lower)
    if x <= lower:
        return 0.0
    z = (x - mu) / sigma
    if a > 0:
        return float((ndtr(-a) - ndtr(-z)) / ndtr(-a))
    return float((ndtr(z) - ndtr(a)) / ndtr(-a))


def truncated_normal_ppf(q: float, mu: float, sigma: float, lower: float = 0.0) -> float:
    """Return ``x >= lower`` with ``truncated_normal_cdf(x) == q``.

    Raises:
        DomainError: If ``q`` is outside (0, 1) or ``sigma`` is not positive.
    """
    if not (0.0 < q < 1.0) or math.isnan(q):
        raise DomainError(f"q must lie in (0, 1), got {q}")
    a = _standardize(mu, sigma, lower)
    if a > 0:
        z = -ndtri((1.0 - q) * ndtr(-a))
    else:
        z = ndtri(ndtr(a) + q * ndtr(-a))
    return max(float(mu + sigma * z), lower)
