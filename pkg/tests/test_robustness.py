import numpy as np
import pytest

from trustnet.dynamics import RatingHistogram
from trustnet.errors import ConfigurationError, DomainError
from trustnet.robustness import (SimpleGraph, attack_experiment, degree_sequence_from_histogram,
                                 giant_component_fraction, match_stubs, removal_order,
                                 sample_configuration_graph)


def test_degree_sequences():
    assert degree_sequence_from_histogram({1: 3}).tolist() == [2, 1, 1]
    assert degree_sequence_from_histogram({2: 2}).tolist() == [2, 2]
    assert degree_sequence_from_histogram({0: 2, 3: 2}).tolist() == [1, 1, 3, 3]
    with pytest.raises(DomainError):
        degree_sequence_from_histogram({})
    with pytest.raises(DomainError):
        degree_sequence_from_histogram({4: 1})


def test_stub_matching_conserves_degree():
    rng = np.random.default_rng(0)
    seq = rng.integers(0, 8, size=200)
    seq[0] += seq.sum() % 2
    pairs = match_stubs(seq, rng)
    assert np.array_equal(np.bincount(pairs.ravel(), minlength=200), seq)
    with pytest.raises(DomainError):
        match_stubs([1, 2], rng)


def test_small_graphs():
    g = sample_configuration_graph([1, 1], 0)
    assert g.edges.tolist() == [[0, 1]]
    # (2,2,2): the triangle, or after dropping loops and repeats a single edge or nothing
    shapes = set()
    for seed in range(200):
        g = sample_configuration_graph([2, 2, 2], seed)
        shapes.add(len(g.edges))
        assert np.all(g.degrees <= 2)
        assert np.all(g.edges[:, 0] < g.edges[:, 1])
    assert shapes == {0, 1, 3}


def test_realized_degrees_bounded():
    seq = np.array([5, 4, 4, 3, 2, 2, 1, 1])
    for seed in range(20):
        g = sample_configuration_graph(seq, seed)
        assert np.all(g.degrees <= seq)
        assert len(np.unique(g.edges, axis=0)) == len(g.edges)


def test_graph_determinism():
    seq = np.full(100, 3)
    a, b = sample_configuration_graph(seq, 42), sample_configuration_graph(seq, 42)
    assert np.array_equal(a.edges, b.edges)


def test_giant_fraction():
    path = SimpleGraph(4, np.array([[0, 1], [1, 2], [2, 3]]))
    assert giant_component_fraction(path) == 1.0
    two = SimpleGraph(4, np.array([[0, 1], [2, 3]]))
    assert giant_component_fraction(two) == 0.5
    assert giant_component_fraction(SimpleGraph(5, np.empty((0, 2), dtype=int))) == 0.2
    assert giant_component_fraction(path, removed=[1]) == 0.5
    assert giant_component_fraction(path, removed=[0, 1, 2, 3]) == 0.0


def test_hubs_order():
    g = SimpleGraph(4, np.array([[0, 1], [0, 2], [0, 3], [1, 2]]))
    order = removal_order(g, "hubs", np.random.default_rng(0))
    assert order[0] == 0
    assert set(order[1:3]) == {1, 2}
    with pytest.raises(ConfigurationError):
        removal_order(g, "sideways", np.random.default_rng(0))


def test_attack_shape_and_monotone():
    hist = RatingHistogram.from_mapping({1: 300, 2: 100, 3: 60, 5: 20, 12: 5, 40: 1})
    res = attack_experiment(hist, fractions=(0, 0.01, 0.05, 0.2), seeds=range(5))
    assert res.giant.shape == (2, 4, 5)
    # the unattacked graph is the same for both strategies
    np.testing.assert_array_equal(res.giant[0, 0], res.giant[1, 0])
    assert np.all(res.giant[:, 0] > 0) and np.all(res.giant <= 1)
    assert np.all(np.diff(res.giant, axis=1) <= 0)
    rows = list(res.rows())
    assert len(rows) == 40 and rows[0][0] == "random"
    s = res.summary()
    assert len(s["random_minus_hubs"]) == 4 and s["random_minus_hubs"][0] == 0


def test_attack_determinism():
    seq = np.r_[np.full(199, 2), 4]
    a = attack_experiment(seq, seeds=[3, 4])
    b = attack_experiment(seq, seeds=[3, 4])
    np.testing.assert_array_equal(a.giant, b.giant)


def test_attack_rejects():
    with pytest.raises(DomainError):
        attack_experiment({1: 10}, fractions=(1.0,))
    with pytest.raises(ConfigurationError):
        attack_experiment({1: 10}, strategies=("random", "degree"))
