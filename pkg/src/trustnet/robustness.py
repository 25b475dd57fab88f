"""Percolation experiments on graphs whose degrees follow a trust distribution.

Each shop becomes a node whose degree is its rating; a configuration-model
graph realizes the sequence, and nodes are then removed either at random
or in order of decreasing degree ("hubs").  The size of the largest
surviving component, as a share of all nodes, measures how much of the
network still hangs together.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .dynamics import RatingHistogram
from .errors import ConfigurationError, DomainError

__all__ = [
    "SimpleGraph",
    "AttackResult",
    "degree_sequence_from_histogram",
    "match_stubs",
    "sample_configuration_graph",
    "giant_component_fraction",
    "removal_order",
    "attack_experiment",
]

STRATEGIES = ("random", "hubs")


@dataclass(frozen=True)
class SimpleGraph:
    n: int
    edges: np.ndarray  # (E, 2), u < v, no duplicates

    @property
    def degrees(self):
        return np.bincount(self.edges.ravel(), minlength=self.n)


def degree_sequence_from_histogram(hist) -> np.ndarray:
    """One degree per shop, ``max(rating, 1)``, ascending; the first is bumped to make the sum even."""
    if not isinstance(hist, RatingHistogram):
        hist = RatingHistogram.from_mapping(hist)
    if hist.total == 0:
        raise DomainError("empty histogram")
    if hist.total < 2:
        raise DomainError("need at least two shops to build a graph")
    seq = np.maximum(hist.samples(), 1)
    if seq.sum() % 2:
        seq[0] += 1
    return seq


def match_stubs(seq, rng) -> np.ndarray:
    """Uniformly pair up the stubs of ``seq``; loops and repeated pairs are kept."""
    seq = np.asarray(seq, dtype=np.int64)
    if np.any(seq < 0):
        raise DomainError("degrees must be nonnegative")
    if seq.sum() % 2:
        raise DomainError("total degree must be even")
    stubs = rng.permutation(np.repeat(np.arange(len(seq)), seq))
    return stubs.reshape(-1, 2)


def _simple(pairs, n):
    pairs = np.sort(pairs, axis=1)
    pairs = pairs[pairs[:, 0] != pairs[:, 1]]
    if len(pairs) == 0:
        return SimpleGraph(n, np.empty((0, 2), dtype=np.int64))
    return SimpleGraph(n, np.unique(pairs, axis=0))


def sample_configuration_graph(seq, seed) -> SimpleGraph:
    """Configuration-model graph for ``seq`` with self-loops and multi-edges dropped."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return _simple(match_stubs(seq, rng), len(seq))


def giant_component_fraction(g: SimpleGraph, removed=None) -> float:
    """Largest connected component over ``g.n``; ``removed`` nodes count as absent."""
    if g.n < 1:
        raise DomainError("graph has no nodes")
    alive = np.ones(g.n, dtype=bool)
    if removed is not None and len(removed):
        alive[np.asarray(removed)] = False
    if not alive.any():
        return 0.0
    e = g.edges
    if len(e):
        e = e[alive[e[:, 0]] & alive[e[:, 1]]]
    adj = coo_matrix((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(g.n, g.n))
    _, labels = connected_components(adj, directed=False)
    sizes = np.bincount(labels[alive])
    return float(sizes.max()) / g.n


def removal_order(g: SimpleGraph, strategy: str, rng) -> np.ndarray:
    """Node order for an attack; ties between equal degrees are broken at random."""
    if strategy == "random":
        return rng.permutation(g.n)
    if strategy == "hubs":
        return np.lexsort((rng.random(g.n), -g.degrees))
    raise ConfigurationError(f"unknown attack strategy {strategy!r}")


@dataclass(frozen=True)
class AttackResult:
    strategies: tuple
    fractions: tuple
    seeds: tuple
    # giant[s, f, r]: strategy s, fraction f, seed r
    giant: np.ndarray

    def mean(self, strategy):
        return self.giant[self.strategies.index(strategy)].mean(axis=1)

    def std(self, strategy):
        return self.giant[self.strategies.index(strategy)].std(axis=1, ddof=1) \
            if len(self.seeds) > 1 else np.zeros(len(self.fractions))

    def rows(self):
        for s, name in enumerate(self.strategies):
            for f, frac in enumerate(self.fractions):
                for r, seed in enumerate(self.seeds):
                    yield name, frac, seed, float(self.giant[s, f, r])

    def summary(self):
        out = {"fractions": list(self.fractions), "seeds": list(self.seeds), "strategies": {}}
        for name in self.strategies:
            out["strategies"][name] = {"mean": self.mean(name).tolist(),
                                       "std": self.std(name).tolist()}
        if set(STRATEGIES) <= set(self.strategies):
            gap = self.mean("random") - self.mean("hubs")
            se = np.sqrt((self.std("random") ** 2 + self.std("hubs") ** 2) / len(self.seeds))
            with np.errstate(divide="ignore", invalid="ignore"):
                sig = np.where(se > 0, gap / se, np.where(gap > 0, np.inf, 0.0))
            out["random_minus_hubs"] = gap.tolist()
            out["separation_sigma"] = sig.tolist()
        return out


def attack_experiment(hist, strategies=STRATEGIES, fractions=(0.0, 0.01, 0.02, 0.05),
                      seeds=range(20)) -> AttackResult:
    """Giant-component share after removing ``ceil(f * n)`` nodes, per strategy, fraction and seed.

    ``hist`` is a :class:`RatingHistogram` or a ready degree sequence.  Each
    seed draws one graph shared by all strategies; within a seed the removal
    sets are nested across fractions.
    """
    fractions = tuple(float(f) for f in fractions)
    if any(not 0 <= f < 1 for f in fractions):
        raise DomainError("removal fractions must lie in [0, 1)")
    strategies = tuple(strategies)
    for s in strategies:
        if s not in STRATEGIES:
            raise ConfigurationError(f"unknown attack strategy {s!r}")
    if isinstance(hist, RatingHistogram) or isinstance(hist, dict):
        seq = degree_sequence_from_histogram(hist)
    else:
        seq = np.asarray(hist, dtype=np.int64)
    seeds = tuple(int(s) for s in seeds)
    n = len(seq)
    counts = [math.ceil(f * n - 1e-9) for f in fractions]

    giant = np.empty((len(strategies), len(fractions), len(seeds)))
    for r, seed in enumerate(seeds):
        graph_ss, order_ss = np.random.SeedSequence(seed).spawn(2)
        g = sample_configuration_graph(seq, np.random.default_rng(graph_ss))
        order_rngs = [np.random.default_rng(ss) for ss in order_ss.spawn(len(strategies))]
        for s, name in enumerate(strategies):
            order = removal_order(g, name, order_rngs[s])
            for f, k in enumerate(counts):
                giant[s, f, r] = giant_component_fraction(g, order[:k])
    return AttackResult(strategies, fractions, seeds, giant)
