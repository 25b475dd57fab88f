"""Analytic steady state of the trust process.

In the mean-field limit the share of shops rated ``l`` grows like
``t * upsilon_l`` with

    upsilon_1 = alpha*gamma_bot / (c + 1)
    upsilon_l = (l-1) gamma_{l-1} c / (l c + 1) * upsilon_{l-1}

and ``c = (1 - alpha) / (1 + alpha*gamma_bot)``.  Unrolled, this is
``alpha*gamma_bot*G_{n-1}/c * B(n, 1 + 1/c)`` with ``G_n`` the running
product of the honesty schedule, which decays like ``n**-(1 + 1/c)`` when
the infinite product ``G`` is positive.

Everything is evaluated in log space; densities far in the tail of a
trimmed schedule underflow to zero but their logarithms stay finite.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import betaln, gammaln

from . import _kernel
from .dynamics import GammaSchedule
from .errors import DomainError

__all__ = [
    "SteadyStateParams",
    "DensityTable",
    "OdeTrajectory",
    "PowerLawWarning",
    "steady_state_recurrence",
    "steady_state_closed_form",
    "log_closed_form",
    "infinite_product",
    "power_law_asymptote",
    "asymptote_ratio",
    "integrate_density_odes",
    "normalized_density",
    "sample_ratings",
]

G_CUTOFF = 10 ** 4
# below this the infinite product is treated as vanished
G_NEGLIGIBLE = 1e-12


class PowerLawWarning(UserWarning):
    """The honesty schedule's infinite product vanishes; the tail is exponential, not a power law."""


@dataclass(frozen=True)
class SteadyStateParams:
    alpha: float
    schedule: GammaSchedule

    def __post_init__(self):
        if not 0 <= self.alpha < 1:
            raise DomainError(f"alpha must lie in [0, 1) for a steady state, got {self.alpha}")

    @property
    def gamma_bot(self) -> float:
        return self.schedule.gamma_bot

    @property
    def c(self) -> float:
        return (1.0 - self.alpha) / (1.0 + self.alpha * self.gamma_bot)

    @property
    def exponent(self) -> float:
        """Power-law exponent ``1 + 1/c``."""
        return 1.0 + 1.0 / self.c

    @property
    def log_source(self) -> float:
        s = self.alpha * self.gamma_bot
        return math.log(s) if s > 0 else -math.inf

    def describe(self):
        d = {"alpha": self.alpha, "c": self.c, "exponent": self.exponent}
        d.update(self.schedule.describe())
        return d


@dataclass(frozen=True)
class DensityTable:
    """``values[k]`` is ``upsilon_{k+1}``; ``log_values`` keeps the tail when ``values`` underflow."""

    log_values: np.ndarray
    normalized: bool = False

    @property
    def values(self) -> np.ndarray:
        return np.exp(self.log_values)

    @property
    def n(self) -> np.ndarray:
        return np.arange(1, len(self.log_values) + 1)

    def __len__(self):
        return len(self.log_values)

    def normalize(self) -> "DensityTable":
        finite = self.log_values[np.isfinite(self.log_values)]
        if finite.size == 0:
            return DensityTable(self.log_values.copy(), True)
        top = finite.max()
        log_z = top + math.log(np.exp(finite - top).sum())
        return DensityTable(self.log_values - log_z, True)


def steady_state_recurrence(params: SteadyStateParams, N: int) -> DensityTable:
    """Forward evaluation of the steady-state recurrence for ``n = 1 .. N``."""
    if N < 1:
        raise DomainError("N must be at least 1")
    c = params.c
    ell = np.arange(2, N + 1, dtype=float)
    with np.errstate(divide="ignore"):
        steps = (np.log(ell - 1) + params.schedule.log_gamma(ell - 1) + math.log(c)
                 - np.log(ell * c + 1))
    first = params.log_source - math.log(c + 1)
    # ten thousand steps of size ~1 summing to ~1e3: plain cumsum drifts past 1e-9 relative
    logs = _kernel.compensated_cumsum(np.concatenate(([first], steps)))
    return DensityTable(logs)


def _log_G(schedule, n_max):
    """``log G_k`` for ``k = 0 .. n_max``."""
    with np.errstate(divide="ignore"):
        lg = schedule.log_gamma(np.arange(1, n_max + 1, dtype=float))
    return np.concatenate(([0.0], _kernel.compensated_cumsum(lg)))


def log_closed_form(params: SteadyStateParams, n):
    n = np.atleast_1d(np.asarray(n))
    if np.any(n < 1) or np.any(n != np.floor(n)):
        raise DomainError("n must be a positive integer")
    c = params.c
    log_G = _log_G(params.schedule, int(n.max()) - 1)[n.astype(np.int64) - 1]
    return params.log_source + log_G - math.log(c) + betaln(n.astype(float), 1.0 + 1.0 / c)


def steady_state_closed_form(params: SteadyStateParams, n):
    """``alpha*gamma_bot*G_{n-1}/c * B(n, 1 + 1/c)`` for scalar or array ``n``."""
    out = np.exp(log_closed_form(params, n))
    return float(out[0]) if np.ndim(n) == 0 else out


def infinite_product(schedule: GammaSchedule, cutoff: int = G_CUTOFF):
    """``G = prod gamma_l`` truncated at ``cutoff``, with a bound on the neglected tail.

    The bound is ``sum_{l > cutoff} (1 - gamma_l)``.  Since
    ``-log(gamma) <= (1 - gamma) / gamma`` and the schedules are nondecreasing
    in ``l``, the true product lies between ``G * exp(-bound / gamma_{cutoff+1})``
    and ``G``.  The bound is ``inf`` when the tail sum diverges.
    """
    G = math.exp(_log_G(schedule, cutoff)[-1])
    if schedule.kind == "geometric":
        g1, rho = schedule.params
        bound = (1.0 - g1) * rho ** cutoff / (1.0 - rho)
    elif schedule.kind == "constant":
        bound = 0.0 if schedule.params[0] == 1.0 else math.inf
    else:
        bound = math.inf
    return G, bound


def power_law_asymptote(params: SteadyStateParams, n, cutoff: int = G_CUTOFF):
    """``(alpha*gamma_bot*G/c) * n**-(1 + 1/c)``, a per-shop density.

    Issues :class:`PowerLawWarning` if ``G`` is negligible, in which case
    the exponential factor ``G_n`` dominates and no power law holds.
    """
    G, _ = infinite_product(params.schedule, cutoff)
    if G < G_NEGLIGIBLE and params.alpha * params.gamma_bot > 0:
        warnings.warn(f"infinite honesty product G = {G:.3g} is negligible; "
                      "the tail is trimmed exponentially", PowerLawWarning, stacklevel=2)
    n = np.asarray(n, dtype=float)
    out = params.alpha * params.gamma_bot * G / params.c * n ** -params.exponent
    return float(out) if out.ndim == 0 else out


def asymptote_ratio(params: SteadyStateParams, n):
    """``closed_form(n) / asymptote(n)`` and its large-``n`` limit ``Gamma(1 + 1/c)``.

    The asymptote uses ``B(n, y) ~ n**-y`` and so drops the constant
    ``Gamma(y)``; the ratio makes that visible.
    """
    n = np.atleast_1d(np.asarray(n, dtype=float))
    G, _ = infinite_product(params.schedule)
    log_asym = (params.log_source + math.log(G) - math.log(params.c)
                - params.exponent * np.log(n)) if G > 0 else np.full(n.shape, -math.inf)
    # where both sides vanish (G = 0 past a sleeper threshold) the ratio is undefined
    with np.errstate(invalid="ignore"):
        ratio = np.exp(log_closed_form(params, n.astype(np.int64)) - log_asym)
    return ratio, math.exp(gammaln(1.0 + 1.0 / params.c))


@dataclass(frozen=True)
class OdeTrajectory:
    t: np.ndarray
    v: np.ndarray  # shape (len(t), N); column l-1 is v_l
    step: float  # log-time step of the returned solution

    @property
    def v_over_t(self):
        return self.v / self.t[:, None]


def _rhs(params, N):
    c = params.c
    src = params.alpha * params.gamma_bot
    ell = np.arange(1, N + 1, dtype=float)
    feed = np.zeros(N)
    if N > 1:
        feed[1:] = params.schedule.gamma(ell[:-1]) * ell[:-1] * c

    def f(s, v):
        # d v / d(ln t) = t * dv/dt
        dv = -c * ell * v
        dv[1:] += feed[1:] * v[:-1]
        dv[0] += src * math.exp(s)
        return dv

    return f


def _rk4(f, v0, h, s_out):
    """Classical RK4 from ``s = 0``, landing exactly on each of the sorted ``s_out``."""
    v = v0.astype(float).copy()
    s = 0.0
    out = np.empty((len(s_out), len(v)))
    for k, target in enumerate(s_out):
        span = target - s
        n = int(math.ceil(span / h - 1e-9)) if span > 0 else 0
        for i in range(n):
            hh = span / n
            s0 = s + i * hh
            k1 = f(s0, v)
            k2 = f(s0 + hh / 2, v + hh / 2 * k1)
            k3 = f(s0 + hh / 2, v + hh / 2 * k2)
            k4 = f(s0 + hh, v + hh * k3)
            v = v + hh / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        s = max(s, target)
        out[k] = v
    return out


def integrate_density_odes(params: SteadyStateParams, t_max: float, N: int, v0=None,
                           h: float = 0.01, t_eval=None, rtol: float = 1e-6,
                           max_halvings: int = 8) -> OdeTrajectory:
    """Integrate the continuous-time density equations from ``t = 1`` to ``t_max``.

        dv_1/dt = alpha*gamma_bot - (c/t) v_1
        dv_l/dt = (gamma_{l-1} c (l-1) v_{l-1} - c l v_l) / t

    The system is solved with RK4 in ``s = ln t`` (step ``h <= 0.01`` in
    ``s``).  Each run is repeated with half the step; if the two disagree by
    more than ``rtol`` (relative) the step keeps halving.
    """
    if not t_max > 1:
        raise DomainError("t_max must exceed t0 = 1")
    if not 0 < h <= 0.01:
        raise DomainError("step size must lie in (0, 0.01]")
    v0 = np.zeros(N) if v0 is None else np.asarray(v0, dtype=float)
    if v0.shape != (N,):
        raise DomainError(f"initial densities must have length {N}")
    if t_eval is None:
        t_eval = np.geomspace(1.0, t_max, 50)
    t_eval = np.sort(np.asarray(t_eval, dtype=float))
    if t_eval[0] < 1 or t_eval[-1] > t_max:
        raise DomainError("t_eval must lie in [1, t_max]")
    s_out = np.log(t_eval)
    f = _rhs(params, N)

    coarse = _rk4(f, v0, h, s_out)
    for _ in range(max_halvings):
        fine = _rk4(f, v0, h / 2, s_out)
        if np.all(np.abs(coarse - fine) <= rtol * np.abs(fine)):
            return OdeTrajectory(t_eval, fine, h / 2)
        coarse, h = fine, h / 2
    return OdeTrajectory(t_eval, coarse, h)


def normalized_density(params: SteadyStateParams, ratings, n_max: int = 10 ** 6):
    """Analytic share of shops at ``ratings`` among all shops rated ``>= 1``.

    The steady state fixes the shape of the rating distribution but not its
    overall scale, so both sides of an empirical comparison are normalized
    over ratings ``>= 1``.
    """
    logs = log_closed_form(params, np.arange(1, n_max + 1))
    ratings = np.asarray(ratings)
    top = logs.max()
    if not np.isfinite(top):
        return np.zeros(ratings.shape)
    log_z = top + math.log(np.exp(logs - top).sum())
    return np.exp(logs[ratings - 1] - log_z)


def sample_ratings(params: SteadyStateParams, size: int, rng, n_max: int = 10 ** 6):
    """Draw ratings ``>= 1`` from the normalized steady-state distribution."""
    p = normalized_density(params, np.arange(1, n_max + 1), n_max)
    return rng.choice(np.arange(1, n_max + 1), size=size, p=p / p.sum())
