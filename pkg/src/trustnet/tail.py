"""Maximum-likelihood fits of the upper tail of a rating histogram.

Two competing models on ``x >= x_min``: a discrete power law
``x**-a / zeta(a, x_min)`` with the usual continuous-approximation
estimator ``a = 1 + n / sum(log(x / (x_min - 1/2)))``, and a geometric law
``(1 - q) q**(x - x_min)``.  Whichever has the higher log-likelihood is
reported as preferred.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.special import zeta

from .dynamics import RatingHistogram
from .errors import DegenerateFitError, InsufficientTailError

__all__ = ["TailFit", "fit_tail", "MIN_TAIL"]

MIN_TAIL = 50
DEFAULT_X_MIN = 5


@dataclass(frozen=True)
class TailFit:
    x_min: int
    n_tail: int
    exponent: float
    geometric_ratio: float
    ll_power: float
    ll_geometric: float

    @property
    def model(self) -> str:
        return "power" if self.ll_power >= self.ll_geometric else "geometric"

    @property
    def geometric_rate(self) -> float:
        """Decay rate ``-log q`` of the geometric fit."""
        return -math.log(self.geometric_ratio)

    def to_dict(self):
        d = asdict(self)
        d.update(model=self.model, geometric_rate=self.geometric_rate,
                 log_likelihood_ratio=self.ll_power - self.ll_geometric)
        return d


def _tail_counts(data, x_min):
    if isinstance(data, RatingHistogram):
        counts = data.counts
        values = np.arange(len(counts))
    else:
        values, counts = np.unique(np.asarray(data, dtype=np.int64), return_counts=True)
    keep = (values >= x_min) & (counts > 0)
    return values[keep].astype(float), counts[keep].astype(float)


def fit_tail(data, x_min: int = DEFAULT_X_MIN) -> TailFit:
    """Fit power-law and geometric tails to ``data`` (a histogram or integer samples).

    Raises :class:`InsufficientTailError` with fewer than 50 observations at
    or above ``x_min`` and :class:`DegenerateFitError` when they are all equal.
    """
    if x_min < 1:
        raise ValueError("x_min must be at least 1")
    x, w = _tail_counts(data, x_min)
    n = w.sum()
    if n < MIN_TAIL:
        raise InsufficientTailError(
            f"only {int(n)} observations >= x_min = {x_min}; at least {MIN_TAIL} are needed "
            "(run a larger or longer simulation, or lower x_min)")
    if len(x) == 1:
        raise DegenerateFitError(f"all {int(n)} tail observations equal {int(x[0])}")

    sum_log = np.dot(w, np.log(x))
    a = 1.0 + n / (sum_log - n * math.log(x_min - 0.5))
    ll_power = -a * sum_log - n * math.log(zeta(a, x_min))

    excess = np.dot(w, x - x_min) / n
    q = excess / (1.0 + excess)
    ll_geom = n * math.log1p(-q) + n * excess * math.log(q)
    return TailFit(int(x_min), int(n), float(a), float(q), float(ll_power), float(ll_geom))
