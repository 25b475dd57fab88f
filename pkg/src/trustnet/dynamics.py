"""Stochastic simulation of private trust building.

A shopper keeps integer ratings ``tau`` for ``J`` shops.  Every tick she
either (probability ``alpha``) swaps a minimally rated shop for a new,
untested one, or picks a shop with probability proportional to its rating.
An honest transaction raises the rating by one (a new shop starts at 1);
a dishonest one resets it to 0.  Honesty is drawn from a
:class:`GammaSchedule` that depends only on the current rating.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Literal

import numpy as np

from . import _kernel
from .errors import ConfigurationError, DomainError, StuckStateError
from .graph import TrustMatrix
from .rig import get_rig, RigKind

__all__ = [
    "GammaSchedule",
    "SimConfig",
    "TrustState",
    "RatingHistogram",
    "Selection",
    "SimResult",
    "select_shop",
    "update_trust",
    "sample_honesty",
    "step",
    "initial_state",
    "run_simulation",
    "run_simulations",
    "derive_tau_from_sigma",
    "snapshot_times",
]

DEFAULT_SEED = 20090101
# gamma is looked up from a table; ratings past this are clamped to the last entry
GAMMA_TABLE_CAP = 1 << 22
_BLOCK = 1 << 16


@dataclass(frozen=True)
class GammaSchedule:
    """Probability ``gamma_l`` that a shop rated ``l`` acts honestly.

    ``gamma_bot`` is the probability for a new, untested shop.

    kinds
        ``constant``  -- ``params = (gamma,)``
        ``geometric`` -- ``params = (gamma1, rho)``: ``1 - (1 - gamma1) rho**(l-1)``
        ``sleeper``   -- ``params = (L,)``: honest below rating ``L``, dishonest from ``L`` on
    """

    kind: Literal["constant", "geometric", "sleeper"]
    params: tuple
    gamma_bot: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        arity = {"constant": 1, "geometric": 2, "sleeper": 1}
        if self.kind not in arity:
            raise DomainError(f"unknown schedule kind {self.kind!r}")
        if len(self.params) != arity[self.kind]:
            raise DomainError(f"{self.kind} schedule takes {arity[self.kind]} parameter(s), "
                              f"got {len(self.params)}")
        if not 0 <= self.gamma_bot <= 1:
            raise DomainError(f"gamma_bot must lie in [0, 1], got {self.gamma_bot}")
        if self.kind == "constant":
            (g,) = self.params
            if not 0 <= g <= 1:
                raise DomainError(f"constant gamma must lie in [0, 1], got {g}")
        elif self.kind == "geometric":
            g1, rho = self.params
            if not 0 <= g1 <= 1:
                raise DomainError(f"gamma1 must lie in [0, 1], got {g1}")
            if not 0 < rho < 1:
                raise DomainError(f"rho must lie in (0, 1), got {rho}")
        elif self.kind == "sleeper":
            (L,) = self.params
            if L < 1 or L != int(L):
                raise DomainError(f"sleeper threshold must be a positive integer, got {L}")

    @classmethod
    def constant(cls, gamma, gamma_bot=1.0):
        return cls("constant", (gamma,), gamma_bot)

    @classmethod
    def geometric(cls, gamma1, rho, gamma_bot=1.0):
        return cls("geometric", (gamma1, rho), gamma_bot)

    @classmethod
    def sleeper(cls, L, gamma_bot=1.0):
        return cls("sleeper", (L,), gamma_bot)

    def gamma(self, ell):
        """Vectorized ``gamma_l`` for ratings ``l >= 1``."""
        ell = np.asarray(ell, dtype=float)
        if self.kind == "constant":
            out = np.full(ell.shape, self.params[0])
        elif self.kind == "geometric":
            g1, rho = self.params
            out = 1.0 - (1.0 - g1) * rho ** (ell - 1)
        else:
            out = np.where(ell < self.params[0], 1.0, 0.0)
        return float(out) if out.ndim == 0 else out

    def log_gamma(self, ell):
        ell = np.asarray(ell, dtype=float)
        if self.kind == "geometric":
            g1, rho = self.params
            out = np.log1p(-(1.0 - g1) * rho ** (ell - 1))
        else:
            with np.errstate(divide="ignore"):
                out = np.log(np.asarray(self.gamma(ell), dtype=float))
        return float(out) if np.ndim(out) == 0 else out

    def table(self, top):
        """``gamma_l`` for ``l = 0 .. top``; index 0 is unused and holds ``gamma_bot``."""
        tab = np.empty(top + 1)
        tab[0] = self.gamma_bot
        tab[1:] = self.gamma(np.arange(1, top + 1))
        return tab

    def describe(self):
        return {"gamma_kind": self.kind, "gamma_params": list(self.params),
                "gamma_bot": self.gamma_bot}


@dataclass(frozen=True)
class SimConfig:
    J: int
    alpha: float
    schedule: GammaSchedule
    steps: int
    seed: int = DEFAULT_SEED
    init: Literal["uniform-tau-one", "from-sigma"] = "uniform-tau-one"
    # required for init="from-sigma": the derived tau(0), already integral
    tau0: tuple | None = None
    # "geometric" (t = 2**k plus final), "none", or a positive tick interval
    snapshot: str | int = "geometric"

    def __post_init__(self):
        if int(self.J) != self.J or self.J < 2:
            raise ConfigurationError(f"J must be an integer >= 2, got {self.J}")
        if not 0 <= self.alpha <= 1:
            raise ConfigurationError(f"alpha must lie in [0, 1], got {self.alpha}")
        if int(self.steps) != self.steps or self.steps < 1:
            raise ConfigurationError(f"steps must be a positive integer, got {self.steps}")
        if self.init not in ("uniform-tau-one", "from-sigma"):
            raise ConfigurationError(f"unknown init {self.init!r}")
        if self.init == "from-sigma":
            if self.tau0 is None or len(self.tau0) != self.J:
                raise ConfigurationError("init=from-sigma needs tau0 of length J")
            if any(x < 0 or x != int(x) for x in self.tau0):
                raise ConfigurationError("tau0 entries must be nonnegative integers")
        if not (self.snapshot in ("geometric", "none")
                or (isinstance(self.snapshot, (int, np.integer)) and self.snapshot > 0)):
            raise ConfigurationError(f"bad snapshot cadence {self.snapshot!r}")

    def initial_tau(self):
        if self.init == "uniform-tau-one":
            return np.ones(self.J, dtype=np.int64)
        return np.asarray(self.tau0, dtype=np.int64)

    def describe(self):
        d = {"J": self.J, "alpha": self.alpha, "steps": self.steps, "seed": self.seed,
             "init": self.init, "snapshot": self.snapshot}
        d.update(self.schedule.describe())
        return d


@dataclass
class TrustState:
    tau: np.ndarray
    t: int
    rng: np.random.Generator
    replacements: int = 0
    resets: int = 0

    @property
    def total(self) -> int:
        return int(self.tau.sum())


@dataclass(frozen=True)
class Selection:
    kind: Literal["replace-minimal", "proportional"]
    index: int


@dataclass(frozen=True)
class RatingHistogram:
    """``counts[l]`` is the number of shops rated ``l``."""

    counts: np.ndarray

    @classmethod
    def from_tau(cls, tau):
        return cls(np.bincount(np.asarray(tau, dtype=np.int64)))

    @classmethod
    def from_mapping(cls, mapping):
        mapping = {int(k): int(v) for k, v in mapping.items() if v}
        top = max(mapping, default=0)
        counts = np.zeros(top + 1, dtype=np.int64)
        for k, v in mapping.items():
            if k < 0 or v < 0:
                raise DomainError("histogram ratings and counts must be nonnegative")
            counts[k] = v
        return cls(counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def mass(self) -> int:
        """Sum of all ratings."""
        return int(np.dot(np.arange(len(self.counts)), self.counts))

    def as_dict(self):
        return {int(k): int(v) for k, v in enumerate(self.counts) if v}

    def samples(self):
        """One rating per shop, ascending."""
        return np.repeat(np.arange(len(self.counts)), self.counts)

    def density(self, ratings):
        """Empirical share of shops at each of ``ratings``."""
        ratings = np.asarray(ratings)
        c = np.zeros(ratings.shape)
        ok = ratings < len(self.counts)
        c[ok] = self.counts[ratings[ok]]
        return c / self.total


@dataclass
class SimResult:
    config: SimConfig
    state: TrustState
    histogram: RatingHistogram
    snapshots: list = field(default_factory=list)

    def csv_rows(self):
        for t, h in self.snapshots:
            for ell, w in h.as_dict().items():
                yield t, ell, w

    def summary(self):
        h = self.histogram
        return {
            "params": self.config.describe(),
            "final_t": self.state.t,
            "total_trust": self.state.total,
            "max_rating": int(len(h.counts) - 1),
            "mean_rating": h.mass / h.total,
            "zero_rated": int(h.counts[0]) if len(h.counts) else 0,
            "replacements": self.state.replacements,
            "resets": self.state.resets,
            "snapshots": len(self.snapshots),
        }


def initial_state(config: SimConfig) -> TrustState:
    return TrustState(config.initial_tau(), 0, np.random.default_rng(config.seed))


def _pick_minimal(tau, u):
    candidates = np.flatnonzero(tau == tau.min())
    return int(candidates[int(u * len(candidates))])


def select_shop(state: TrustState, alpha: float) -> Selection:
    """Draw the next shop.

    A Bernoulli(``alpha``) coin picks the branch.  On heads a shop is chosen
    uniformly among those with minimal rating, to be replaced by a new one;
    on tails shop ``i`` is chosen with probability ``tau_i / sum(tau)``.  If
    every rating is zero only replacement is possible.
    """
    tau = state.tau
    branch, u = state.rng.random(), state.rng.random()
    total = int(tau.sum())
    if branch < alpha or total == 0:
        if alpha == 0:
            raise StuckStateError("all shops are rated 0 and alpha = 0: nothing can be selected")
        return Selection("replace-minimal", _pick_minimal(tau, u))
    idx = int(np.searchsorted(np.cumsum(tau), int(u * total), side="right"))
    return Selection("proportional", idx)


def sample_honesty(schedule: GammaSchedule, context, rng) -> bool:
    """Bernoulli honesty draw; ``context`` is ``"new"`` or the shop's current rating."""
    if context == "new":
        p = schedule.gamma_bot
    else:
        p = schedule.gamma(int(context))
    return bool(rng.random() < p)


def update_trust(state: TrustState, sel: Selection, honest: bool) -> TrustState:
    """Apply one transaction outcome, returning the next state."""
    tau = state.tau.copy()
    i = sel.index
    replacements, resets = state.replacements, state.resets
    if sel.kind == "replace-minimal":
        replacements += 1
        tau[i] = 1 if honest else 0
    else:
        tau[i] = tau[i] + 1 if honest else 0
    if not honest:
        resets += 1
    return replace(state, tau=tau, t=state.t + 1, replacements=replacements, resets=resets)


def step(state: TrustState, alpha: float, schedule: GammaSchedule) -> TrustState:
    sel = select_shop(state, alpha)
    context = "new" if sel.kind == "replace-minimal" else int(state.tau[sel.index])
    return update_trust(state, sel, sample_honesty(schedule, context, state.rng))


def snapshot_times(steps, cadence):
    if cadence == "none":
        return [steps]
    if cadence == "geometric":
        times, k = [], 0
        while (1 << k) < steps:
            times.append(1 << k)
            k += 1
        return times + [steps]
    return list(range(cadence, steps, cadence)) + [steps]


def run_simulation(config: SimConfig) -> SimResult:
    """Run ``config.steps`` ticks and collect histogram snapshots.

    Deterministic in ``config.seed``.  Snapshots are taken at the ticks given
    by the configured cadence; the last one is the final state.
    """
    state = initial_state(config)
    tau = state.tau.copy()
    tree = _kernel.fenwick_build(tau)
    total = int(tau.sum())
    table = config.schedule.table(min(int(tau.max()) + config.steps + 1, GAMMA_TABLE_CAP))
    stats = np.zeros(2, dtype=np.int64)
    rng = state.rng
    snapshots = []
    t = 0
    for target in snapshot_times(config.steps, config.snapshot):
        while t < target:
            n = min(_BLOCK, target - t)
            u = rng.random((n, 3))
            status, total, done = _kernel.run_ticks(
                tau, tree, total, float(config.alpha), float(config.schedule.gamma_bot), table, u, stats)
            t += done
            if status == _kernel.STUCK:
                raise StuckStateError(
                    f"all shops rated 0 with alpha = 0 at tick {t}: nothing can be selected")
        snapshots.append((t, RatingHistogram.from_tau(tau)))
    final = TrustState(tau, t, rng, int(stats[0]), int(stats[1]))
    return SimResult(config, final, snapshots[-1][1], snapshots)


def default_workers():
    env = os.environ.get("TRUSTNET_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_simulations(configs, workers=None):
    """Run independent configurations, returning results in input order."""
    configs = list(configs)
    workers = workers or default_workers()
    if workers == 1 or len(configs) < 2:
        return [run_simulation(c) for c in configs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_simulation, configs))


def derive_tau_from_sigma(sigma, A, rig=RigKind.NONNEG_REALS):
    """Object trust induced by recommender trust: ``tau_i = sum_u sigma_u A_ui``."""
    values = A.values if isinstance(A, TrustMatrix) else np.asarray(A)
    sigma = np.asarray(sigma)
    if values.ndim != 2 or sigma.shape != (values.shape[0],):
        raise ConfigurationError(
            f"sigma of shape {sigma.shape} does not match matrix of shape {values.shape}")
    R = get_rig(rig)
    if R.kind in (RigKind.NONNEG_REALS, RigKind.NATURALS):
        return sigma @ values
    out = []
    for i in range(values.shape[1]):
        acc = R.zero
        for u in range(values.shape[0]):
            acc = R.add(acc, R.mul(sigma[u].item(), values[u, i].item()))
        out.append(acc)
    return np.asarray(out)
