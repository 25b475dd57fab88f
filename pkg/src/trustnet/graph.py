"""Recommendation and endorsement networks.

A recommendation network is a bipartite multigraph of certificates
``u -> i`` from recommenders to objects; an endorsement network is a
multigraph of certificates ``u -> v`` between recommenders.  Both reduce to
matrices by aggregating parallel certificates.  Over ratings in ``[0, 1]``
an endorsement network can be *path completed* (chains of endorsements
become new endorsements, discounted by a per-hop penalty and cut at a trust
threshold) and folded into a recommendation network (*endorsement
completion*).
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigurationError, DomainError
from .rig import RigKind, get_rig

__all__ = [
    "Certificate",
    "Endorsement",
    "RecommendationNetwork",
    "EndorsementNetwork",
    "TrustNetwork",
    "TrustMatrix",
    "CompletionParams",
    "reduce_to_matrix",
    "path_complete",
    "endorsement_complete",
    "is_path_complete",
    "edge_multiset_equal",
]

POLICIES = ("sum", "average", "last")


@dataclass(frozen=True)
class Certificate:
    """Recommendation ``source -> target`` (recommender to object)."""

    id: str
    source: str
    target: str
    rating: float
    revoked: bool = False
    # endorsement chain (base ids) this certificate was derived through
    via: tuple = ()
    literal: str | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.rating >= 0:
            raise DomainError(f"certificate {self.id}: negative rating {self.rating}")


@dataclass(frozen=True)
class Endorsement:
    """Endorsement ``source -> target`` between recommenders.

    ``path`` holds the ids of the base endorsements a composite edge stands
    for; it is empty for an edge read from the outside world, which then
    stands for itself.
    """

    id: str
    source: str
    target: str
    rating: float
    revoked: bool = False
    path: tuple = ()
    literal: str | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.rating >= 0:
            raise DomainError(f"endorsement {self.id}: negative rating {self.rating}")

    @property
    def chain(self) -> tuple:
        return self.path or (self.id,)


def _ordered_unique(items):
    return tuple(dict.fromkeys(items))


@dataclass(frozen=True)
class RecommendationNetwork:
    recommenders: tuple
    objects: tuple
    certificates: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "recommenders", tuple(self.recommenders))
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "certificates", tuple(self.certificates))
        us, js = set(self.recommenders), set(self.objects)
        for c in self.certificates:
            if c.source not in us:
                raise ConfigurationError(f"certificate {c.id}: unknown recommender {c.source!r}")
            if c.target not in js:
                raise ConfigurationError(f"certificate {c.id}: unknown object {c.target!r}")

    @classmethod
    def from_certificates(cls, certificates, recommenders=(), objects=()):
        certificates = tuple(certificates)
        us = _ordered_unique(list(recommenders) + [c.source for c in certificates])
        js = _ordered_unique(list(objects) + [c.target for c in certificates])
        return cls(us, js, certificates)

    def live(self):
        return [c for c in self.certificates if not c.revoked]


@dataclass(frozen=True)
class EndorsementNetwork:
    recommenders: tuple
    endorsements: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "recommenders", tuple(self.recommenders))
        object.__setattr__(self, "endorsements", tuple(self.endorsements))
        us = set(self.recommenders)
        for e in self.endorsements:
            if e.source not in us or e.target not in us:
                raise ConfigurationError(f"endorsement {e.id}: endpoint outside recommender set")

    @classmethod
    def from_edges(cls, edges, recommenders=()):
        edges = tuple(edges)
        us = _ordered_unique(list(recommenders) + [x for e in edges for x in (e.source, e.target)])
        return cls(us, edges)

    @property
    def self_loops(self):
        return [e for e in self.endorsements if e.source == e.target]

    def live(self):
        return [e for e in self.endorsements if not e.revoked]


@dataclass(frozen=True)
class TrustNetwork:
    """A recommendation network paired with an endorsement network over the same recommenders."""

    recommendations: RecommendationNetwork
    endorsements: EndorsementNetwork


@dataclass(frozen=True)
class TrustMatrix:
    rows: tuple
    cols: tuple
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "cols", tuple(self.cols))
        values = np.asarray(self.values)
        if values.shape != (len(self.rows), len(self.cols)):
            raise ConfigurationError(
                f"matrix shape {values.shape} does not match index sets "
                f"({len(self.rows)}, {len(self.cols)})")
        object.__setattr__(self, "values", values)

    def __getitem__(self, key):
        u, i = key
        return self.values[self.rows.index(u), self.cols.index(i)]


@dataclass(frozen=True)
class CompletionParams:
    eta: float
    epsilon: float
    max_path_len: int = 8

    def __post_init__(self):
        if not 0 <= self.eta <= 1:
            raise DomainError(f"trust threshold eta must lie in [0, 1], got {self.eta}")
        if not 0 <= self.epsilon <= 1:
            raise DomainError(f"composition penalty epsilon must lie in [0, 1], got {self.epsilon}")
        if int(self.max_path_len) != self.max_path_len or self.max_path_len < 1:
            raise DomainError(f"max_path_len must be a positive integer, got {self.max_path_len}")


def reduce_to_matrix(net, policy="sum", rig=RigKind.NONNEG_REALS) -> TrustMatrix:
    """Aggregate live certificates into a ``U x J`` (or ``U x U``) matrix.

    ``policy`` is ``"sum"`` (rig sum), ``"average"`` (arithmetic mean) or
    ``"last"`` (the last live certificate in network order wins).  Absent
    pairs hold the rig zero.
    """
    if policy not in POLICIES:
        raise ConfigurationError(f"unknown aggregation policy {policy!r}")
    if isinstance(net, RecommendationNetwork):
        rows, cols = net.recommenders, net.objects
    elif isinstance(net, EndorsementNetwork):
        rows, cols = net.recommenders, net.recommenders
    else:
        raise TypeError(f"cannot reduce {type(net).__name__}")
    R = get_rig(rig)
    if policy == "average" and R.kind not in (RigKind.NONNEG_REALS, RigKind.NATURALS):
        raise ConfigurationError("the average policy needs real-valued ratings")

    ridx = {u: k for k, u in enumerate(rows)}
    cidx = {i: k for k, i in enumerate(cols)}
    groups = defaultdict(list)
    for c in net.live():
        groups[ridx[c.source], cidx[c.target]].append(R.check(c.rating))

    dtype = np.int64 if R.kind in (RigKind.NATURALS, RigKind.BOOLEAN) and policy != "average" else float
    values = np.full((len(rows), len(cols)), R.zero, dtype=dtype)
    for (r, k), ratings in groups.items():
        if policy == "sum":
            acc = R.zero
            for x in ratings:
                acc = R.add(acc, x)
        elif policy == "average":
            acc = sum(ratings) / len(ratings)
        else:
            acc = ratings[-1]
        values[r, k] = acc
    return TrustMatrix(rows, cols, values)


def _check_unit(edges, what):
    for e in edges:
        if not 0 <= e.rating <= 1:
            raise DomainError(f"{what} {e.id}: rating {e.rating} outside [0, 1]")


def _primitive(edges: Sequence[Endorsement], epsilon):
    """Drop composite edges that other edges already spell out.

    A composite is redundant when its chain splits into two or more chains
    present in ``edges`` whose penalized product gives its rating.  Any path
    through it is then also a path through the pieces, with the same chain
    and rating, so leaving it out of the search loses nothing.
    """
    if all(len(e.chain) == 1 for e in edges):
        return list(edges)
    rated = {}
    for e in edges:
        rated.setdefault(e.chain, e.rating)
    keep = []
    for e in edges:
        chain = e.chain
        n = len(chain)
        # best[i]: rating of some split of chain[:i]
        best = [None] * (n + 1)
        for i in range(1, n + 1):
            for j in range(i):
                if j == 0 and i == n:
                    continue
                r = rated.get(chain[j:i])
                if r is None or (j and best[j] is None):
                    continue
                best[i] = r if j == 0 else best[j] * epsilon * r
                break
        if best[n] is None or abs(best[n] - e.rating) > 1e-12:
            keep.append(e)
    return keep


def _iter_paths(edges: Sequence[Endorsement], starts, epsilon, floor, max_len, include_empty=False):
    """Depth-first enumeration of endorsement paths.

    Yields ``(source, target, rating, chain)`` where ``rating`` is
    ``epsilon**(n-1) * prod(ratings)`` over the ``n`` edges of the path and
    ``chain`` concatenates the base chains of those edges.  Length is
    measured in base edges.  A prefix whose rating drops below ``floor`` is
    cut: with all factors in ``[0, 1]`` no extension can climb back.

    Each chain is yielded once.  On a network of composite edges the same
    base path can be spelled in many ways; every spelling ends at the same
    node with the same rating, so only the first one is expanded.
    """
    out = defaultdict(list)
    for e in _primitive(edges, epsilon):
        out[e.source].append(e)

    seen = set()
    for u in starts:
        if include_empty:
            yield u, u, 1.0, ()
        stack = [(e, e.rating, e.chain) for e in reversed(out[u])]
        while stack:
            e, rating, chain = stack.pop()
            if rating < floor or len(chain) > max_len or chain in seen:
                continue
            seen.add(chain)
            yield u, e.target, rating, chain
            for nxt in reversed(out[e.target]):
                stack.append((nxt, rating * epsilon * nxt.rating, chain + nxt.chain))


def path_complete(net: EndorsementNetwork, params: CompletionParams) -> EndorsementNetwork:
    """Replace the edges of ``net`` by all its paths rated at least ``eta``.

    Paths may revisit nodes; their length (counted in base endorsements) is
    capped at ``params.max_path_len``.  Each output edge records the base
    chain it stands for, so completing an already completed network adds
    nothing new: a path of composite edges collapses onto the base path it
    spells out.
    """
    edges = net.live()
    _check_unit(edges, "endorsement")
    result = []
    for u, v, rating, chain in _iter_paths(
            edges, net.recommenders, params.epsilon, params.eta, params.max_path_len):
        result.append(Endorsement("+".join(chain), u, v, rating, path=chain if len(chain) > 1 else ()))
    return EndorsementNetwork(net.recommenders, result)


def endorsement_complete(rec: RecommendationNetwork, end: EndorsementNetwork,
                         params: CompletionParams) -> RecommendationNetwork:
    """Fold endorsement chains into direct recommendations.

    For every endorsement path ``u -> ... -> v`` (the empty path when
    ``u == v``, rated 1) and every certificate ``v -> i``, emit ``u -> i``
    rated ``delta(path) * beta(c)`` when that reaches ``eta``.  Parallel
    results are all kept; aggregate them with :func:`reduce_to_matrix`.
    """
    if set(rec.recommenders) != set(end.recommenders):
        raise ConfigurationError("recommendation and endorsement networks have different recommenders")
    certs = rec.live()
    edges = end.live()
    _check_unit(certs, "certificate")
    _check_unit(edges, "endorsement")
    by_source = defaultdict(list)
    for c in certs:
        by_source[c.source].append(c)

    result = []
    for u, v, delta, chain in _iter_paths(
            edges, rec.recommenders, params.epsilon, params.eta, params.max_path_len,
            include_empty=True):
        for c in by_source[v]:
            rating = delta * c.rating
            if rating < params.eta:
                continue
            if chain:
                cid = "+".join(chain) + ">" + c.id
                result.append(Certificate(cid, u, c.target, rating, via=chain))
            else:
                result.append(Certificate(c.id, u, c.target, rating, literal=c.literal))
    return RecommendationNetwork(rec.recommenders, rec.objects, result)


def _edge_key_groups(edges: Iterable):
    groups = defaultdict(list)
    for e in edges:
        groups[e.source, e.target].append(e.rating)
    return {k: sorted(v) for k, v in groups.items()}


def edge_multiset_equal(a: Iterable, b: Iterable, atol: float = 1e-12) -> bool:
    """Compare two edge collections as multisets of ``(source, target, rating)``."""
    ga, gb = _edge_key_groups(a), _edge_key_groups(b)
    if ga.keys() != gb.keys():
        return False
    for k, ra in ga.items():
        rb = gb[k]
        if len(ra) != len(rb):
            return False
        if any(abs(x - y) > atol for x, y in zip(ra, rb)):
            return False
    return True


def is_path_complete(net: EndorsementNetwork, params: CompletionParams) -> bool:
    """True iff completing ``net`` gives back the same edge multiset."""
    return edge_multiset_equal(net.live(), path_complete(net, params).endorsements)

