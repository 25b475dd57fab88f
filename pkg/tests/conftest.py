
import numpy as np
import pytest

from trustnet.graph import Endorsement, EndorsementNetwork


def random_endorsement_network(rng, max_nodes=12, max_edges=30, low=0.05):
    n = int(rng.integers(2, max_nodes + 1))
    m = int(rng.integers(1, max_edges + 1))
    nodes = [f"u{k}" for k in range(n)]
    edges = []
    for k in range(m):
        s, t = rng.integers(0, n, size=2)
        edges.append(Endorsement(f"e{k}", nodes[s], nodes[t], float(rng.uniform(low, 1.0))))
    return EndorsementNetwork(nodes, edges)


def brute_force_paths(net, epsilon, eta, max_len):
    """Every edge sequence that chains up, rated eps**(n-1) * prod, kept if >= eta.

    No pruning and no dedup: all walks of 1..max_len edges are generated and
    only then filtered.
    """
    edges = net.live()
    out_edges = {}
    for e in edges:
        out_edges.setdefault(e.source, []).append(e)
    found = []
    layer = [(e.source, e.target, e.rating) for e in edges]
    for n in range(1, max_len + 1):
        scale = epsilon ** (n - 1)
        found += [(s, t, scale * p) for s, t, p in layer if scale * p >= eta]
        layer = [(s, e.target, p * e.rating) for s, t, p in layer for e in out_edges.get(t, ())]
    return found


def walk_count(net, max_len):
    """Number of edge sequences of length 1..max_len, from powers of the edge-count matrix."""
    idx = {u: k for k, u in enumerate(net.recommenders)}
    M = np.zeros((len(idx), len(idx)), dtype=object)
    for e in net.live():
        M[idx[e.source], idx[e.target]] += 1
    total, P = 0, np.identity(len(idx), dtype=object)
    for _ in range(max_len):
        P = P.dot(M)
        total += int(P.sum())
    return total


def small_network(rng, max_walks=200_000):
    """A <= 6-node network whose full walk set is small enough to enumerate."""
    while True:
        net = random_endorsement_network(rng, max_nodes=6, max_edges=12, low=0.3)
        if walk_count(net, 8) <= max_walks:
            return net


class _Edge:
    def __init__(self, s, t, r):
        self.source, self.target, self.rating, self.revoked = s, t, r, False


def as_edges(triples):
    return [_Edge(*t) for t in triples]


@pytest.fixture
def report(request):
    """Write one line straight to the terminal, bypassing capture."""
    tr = request.config.pluginmanager.get_plugin("terminalreporter")

    def emit(line):
        if tr is not None:
            tr.write_line(line)
        else:
            print(line)

    return emit
