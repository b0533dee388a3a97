"""Hypergraph and neighbor-network protocols."""

import itertools

import pytest

from psmt import fixtures
from psmt.errors import PreconditionError
from psmt.field import GF
from psmt.netsim import AdversarySpec
from psmt.protocols.hypernet import (
    exchange_network,
    hypergraph_private,
    hypergraph_reliable,
    neighbor_exchange,
)
from psmt.randomness import Randomness
from psmt.strategies import (
    constant_replacer,
    format_corruptor,
    random_tamperer,
    shift_tamperer,
    stop_forger,
)
from psmt.topology import Hypergraph, to_hypergraph

BIG = GF(2**16)


def _strategies(spec):
    return [shift_tamperer(), random_tamperer(spec), format_corruptor(),
            stop_forger(), constant_replacer(spec.element(0))]


def duo_graph() -> Hypergraph:
    """Two independent relays x and y between A and B, fully two-way:
    strongly 1-connected and not 2-separable in either direction."""
    return Hypergraph.build(
        "ABxy",
        [("A", {"B"}), ("A", {"x"}), ("A", {"y"}),
         ("x", {"B"}), ("y", {"B"}),
         ("B", {"A"}), ("B", {"x"}), ("B", {"y"}),
         ("x", {"A"}), ("y", {"A"})],
        "A", "B")


def test_hypergraph_reliable_honest_and_adversarial():
    graph = fixtures.get("fig5")
    m = BIG.element(1000)
    out = hypergraph_reliable(m, graph, 1, seed=0)
    assert out.succeeded and out.delivered == m
    internal = sorted(graph.nodes - {"A", "B"})
    for node in internal:
        for s, strategy in enumerate(_strategies(BIG)):
            out = hypergraph_reliable(
                m, graph, 1,
                AdversarySpec(frozenset({node}), strategy, seed=s), seed=3)
            assert out.succeeded and out.delivered == m


def test_hypergraph_reliable_precondition():
    # fig3's hypergraph is 2-separable, so k=1 (needing non-2-separable)
    # must be refused
    graph = to_hypergraph(fixtures.get("fig3"))
    with pytest.raises(PreconditionError):
        hypergraph_reliable(BIG.element(1), graph, 1)


def test_hypergraph_private_honest_and_adversarial():
    graph = duo_graph()
    rng = Randomness("hp-honest")
    for _ in range(10):
        m = BIG.sample(rng)
        out = hypergraph_private(m, graph, 1, seed=m.value)
        assert out.succeeded and out.delivered == m
    m = BIG.element(555)
    for node in ("x", "y"):
        for s, strategy in enumerate(_strategies(BIG)):
            out = hypergraph_private(
                m, graph, 1,
                AdversarySpec(frozenset({node}), strategy, seed=s), seed=4)
            assert out.delivered == m, (node, s, out.detail)


def test_hypergraph_private_preconditions():
    # fig5 is one-way only: B cannot reach A, so the feedback step fails
    with pytest.raises(PreconditionError):
        hypergraph_private(BIG.element(1), fixtures.get("fig5"), 1)
    with pytest.raises(PreconditionError):
        hypergraph_private(BIG.element(1), to_hypergraph(fixtures.get("fig3")), 1)


def test_neighbor_exchange_honest():
    rng = Randomness("ne-honest")
    for _ in range(20):
        m = BIG.sample(rng)
        out = neighbor_exchange(m, seed=m.value)
        assert out.succeeded and out.delivered == m


def test_neighbor_exchange_single_corruption():
    # the design tolerates one corrupted node among {C, D, F}
    m = BIG.element(31415)
    for node in ("C", "D", "F"):
        for s, strategy in enumerate(_strategies(BIG)):
            out = neighbor_exchange(
                m, AdversarySpec(frozenset({node}), strategy, seed=s), seed=8)
            if out.succeeded:
                assert out.delivered == m
            else:
                assert out.failed


def test_neighbor_exchange_passive_curiosity_is_harmless():
    # every passive single-node adversary still sees correct delivery
    m = BIG.element(2718)
    for node in ("C", "D", "F"):
        out = neighbor_exchange(m, AdversarySpec(frozenset({node})), seed=2)
        assert out.succeeded and out.delivered == m


def test_neighbor_exchange_reliable_channel_failures():
    # with delta_r > 0 the run can abort, but never delivers wrongly
    m = BIG.element(99)
    aborted = delivered = 0
    for t in range(300):
        out = neighbor_exchange(m, seed=t, delta_r=0.2)
        if out.failed:
            aborted += 1
        else:
            assert out.succeeded and out.delivered == m
            delivered += 1
    assert aborted > 0 and delivered > 0
    # two reliable uses per run: abort rate ~ 1 - 0.8^2 = 0.36
    assert 60 <= aborted <= 160


def test_exchange_network_is_fig2():
    assert exchange_network() == fixtures.get("fig2")
