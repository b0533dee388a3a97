"""Transmission protocols over multicast hypergraphs and neighbor networks.

Corruption here is node-level: a corrupted node overhears every
hyperedge it can receive on and may replace anything it forwards or
originates.  Reliable sub-channels (disjoint-path majorities or an
idealized reliable channel) carry public data only.
"""

from __future__ import annotations

import itertools

from ..authcodes import LinearKey, auth_linear, verify
from ..errors import PreconditionError
from ..field import FieldElement
from ..netsim import (
    AdversarySpec,
    HyperNet,
    IdealizedReliableChannel,
    Outcome,
    majority_of,
)
from ..randomness import Randomness
from ..topology import (
    Hypergraph,
    NeighborNet,
    is_k_separable,
    max_disjoint_paths,
    strong_witness_path,
    strongly_k_connected,
    to_hypergraph,
)
from .common import as_field, as_field_vec


def _rngs(rng_a, rng_b, seed):
    if rng_a is None:
        rng_a = Randomness((seed, "A"))
    if rng_b is None:
        rng_b = Randomness((seed, "B"))
    return rng_a, rng_b


def _reverse(h: Hypergraph) -> Hypergraph:
    return Hypergraph(h.nodes, h.hyperedges, h.receiver, h.sender)


def _route_majority(net: HyperNet, paths, payload, tie_rng):
    """Send one copy per node-disjoint path; majority at the far end."""
    routes = {i: (p, payload) for i, p in enumerate(paths)}
    delivered = net.transmit(routes)
    return majority_of([delivered.get(i) for i in range(len(paths))], tie_rng)


def reliable_transmit(net: HyperNet, graph: Hypergraph, payload, k: int,
                      tie_rng, public: bool = True):
    """Majority transmission over 2k+1 disjoint paths; the value is public."""
    ok, witness = is_k_separable(graph, 2 * k)
    if ok:
        raise PreconditionError(
            f"endpoints are {2 * k}-separable (witness {sorted(witness)})")
    paths = max_disjoint_paths(graph).paths[: 2 * k + 1]
    if public:
        net.view.announce(net.round, (graph.sender, graph.receiver), payload)
    return _route_majority(net, paths, payload, tie_rng)


def hypergraph_reliable(message: FieldElement, graph: Hypergraph, k: int,
                        adversary: AdversarySpec | None = None,
                        rng_a=None, rng_b=None, seed=0) -> Outcome:
    """Reliable (not private) transmission whenever the endpoints cannot
    be cut off by 2k nodes."""
    rng_a, rng_b = _rngs(rng_a, rng_b, seed)
    net = HyperNet(graph, adversary)
    got = reliable_transmit(net, graph, message, k, rng_b, public=False)
    return Outcome(got, got == message, False, net.round, net.view,
                   net.transcript)


def hypergraph_private(message: FieldElement, graph: Hypergraph, k: int,
                       adversary: AdversarySpec | None = None,
                       rng_a=None, rng_b=None, seed=0) -> Outcome:
    """Private transmission built from per-suspect-set key paths.

    For every candidate corrupted set S a key pair travels along a path
    that S can neither read nor touch; the receiver's authenticated
    nonces tell the sender which keys arrived intact, and their sum pads
    the message over a public reliable channel.
    """
    spec = message.spec
    rng_a, rng_b = _rngs(rng_a, rng_b, seed)
    if not strongly_k_connected(graph, k):
        raise PreconditionError("endpoints are not strongly k-connected")
    back = _reverse(graph)
    for g in (graph, back):
        sep, witness = is_k_separable(g, 2 * k)
        if sep:
            raise PreconditionError(
                f"{g.sender}->{g.receiver} is {2 * k}-separable"
                f" (witness {sorted(witness)})")
    net = HyperNet(graph, adversary)
    net_back = HyperNet(back, adversary)
    net_back.view = net.view
    net_back.round = net.round

    internal = sorted(graph.nodes - {graph.sender, graph.receiver})
    suspects = list(itertools.combinations(internal, k))
    witness_paths = {}
    for s in suspects:
        path = strong_witness_path(graph, frozenset(s))
        if path is None:
            raise PreconditionError(f"no path avoiding the closure of {s}")
        witness_paths[s] = path

    # step 1: one key pair per suspect set, along its witness path
    keys_a = {s: LinearKey.random(spec, rng_a) for s in suspects}
    routes = {s: (witness_paths[s], (keys_a[s].a, keys_a[s].b))
              for s in suspects}
    delivered = net.transmit(routes)
    keys_b = {}
    for s in suspects:
        a, b = as_field_vec(spec, delivered.get(s), 2)
        keys_b[s] = LinearKey(a, b)

    # step 2: authenticated nonces back to the sender, publicly
    nonces_b = {s: spec.sample(rng_b) for s in suspects}
    bundle = tuple((nonces_b[s], auth_linear(nonces_b[s], keys_b[s]))
                   for s in suspects)
    net_back.round = net.round
    got = reliable_transmit(net_back, back, bundle, k, rng_a)
    net.round = net_back.round

    # step 3: the verified keys' sum pads the message, publicly
    got = got if isinstance(got, tuple) else ()
    k_index = []
    pad_a = spec.zero()
    for i, s in enumerate(suspects):
        pair = got[i] if i < len(got) else None
        r, t = as_field_vec(spec, pair, 2)
        if verify(r, t, keys_a[s]):
            k_index.append(i)
            pad_a = pad_a + keys_a[s].a
    final = reliable_transmit(net, graph, (tuple(k_index), message + pad_a),
                              k, rng_b)

    final = final if isinstance(final, tuple) and len(final) == 2 else ((), None)
    idx = final[0] if isinstance(final[0], tuple) else ()
    cipher = as_field(spec, final[1])
    pad_b = spec.zero()
    for i in idx:
        if isinstance(i, int) and 0 <= i < len(suspects):
            pad_b = pad_b + keys_b[suspects[i]].a
    result = cipher - pad_b
    return Outcome(result, result == message, False, net.round, net.view,
                   net.transcript)


# ---------------------------------------------------------------------------
# neighbor-network protocol on the two-chain network with relay-masked keys


def exchange_network() -> NeighborNet:
    """The five-node neighbor network this protocol is designed for."""
    return NeighborNet.build(
        "ABCDF",
        [("A", "C"), ("A", "D"), ("C", "B"), ("D", "B"), ("C", "F"), ("F", "D")],
        "A", "B")


def neighbor_exchange(message: FieldElement,
                      adversary: AdversarySpec | None = None,
                      rng_a=None, rng_b=None, seed=0,
                      delta_r: float = 0.0, rng_t=None) -> Outcome:
    """Private transmission over the two-chain neighbor network.

    Both ends hand one-time masks to the relays C and D; each relay
    multicasts a key pair masked for both ends, so neither the other
    relay nor the bystander F learns it.  Authenticated nonces over a
    reliable channel (failure probability ``delta_r``, contents public,
    never modified) tell the sender which keys survived.
    """
    spec = message.spec
    rng_a, rng_b = _rngs(rng_a, rng_b, seed)
    if rng_t is None:
        rng_t = Randomness((seed, "relays"))
    graph = to_hypergraph(exchange_network())
    net = HyperNet(graph, adversary)
    reliable = IdealizedReliableChannel(delta_r, net.view,
                                        Randomness((seed, "channel")))

    # round 1: fresh masks from both ends (relays C and D both hear both)
    masks_a = [spec.sample(rng_a) for _ in range(4)]
    masks_b = [spec.sample(rng_b) for _ in range(4)]
    heard_a = net.multicast("A", ("masks", tuple(masks_a[:2]), tuple(masks_a[2:])))
    heard_b = net.multicast("B", ("masks", tuple(masks_b[:2]), tuple(masks_b[2:])))
    net.advance_round()

    # round 2: each relay multicasts one key pair masked for either end
    relay_out = {}
    for slot, relay in enumerate(("C", "D")):
        key = LinearKey.random(spec, rng_t)
        ga = heard_a.get(relay)
        gb = heard_b.get(relay)
        ma = as_field_vec(spec, ga[slot + 1] if isinstance(ga, tuple)
                          and len(ga) == 3 else None, 2)
        mb = as_field_vec(spec, gb[slot + 1] if isinstance(gb, tuple)
                          and len(gb) == 3 else None, 2)
        out = net.multicast(relay, (key.a + ma[0], key.b + ma[1],
                                    key.a + mb[0], key.b + mb[1]))
        relay_out[relay] = out
    net.advance_round()

    def unmask(end: str, masks) -> list[LinearKey]:
        keys = []
        for slot, relay in enumerate(("C", "D")):
            got = relay_out[relay].get(end)
            vec = as_field_vec(spec, got, 4)
            base = 0 if end == "A" else 2
            keys.append(LinearKey(vec[base] - masks[2 * slot],
                                  vec[base + 1] - masks[2 * slot + 1]))
        return keys
    keys_a = unmask("A", masks_a)
    keys_b = unmask("B", masks_b)

    # authenticated nonce from the receiver over the reliable channel
    r_b = spec.sample(rng_b)
    bundle = reliable.send(net.round, "BA",
                           (r_b, auth_linear(r_b, keys_b[0]),
                            auth_linear(r_b, keys_b[1])))
    net.advance_round()
    if bundle is IdealizedReliableChannel.FAILED:
        return Outcome(None, False, True, net.round, net.view, net.transcript,
                       "reliable channel failed")
    r_a = as_field(spec, bundle[0])
    k_index = [i for i in range(2)
               if verify(r_a, as_field(spec, bundle[i + 1]), keys_a[i])]
    pad_a = sum((keys_a[i].a for i in k_index), spec.zero())
    final = reliable.send(net.round, "AB", (tuple(k_index), message + pad_a))
    net.advance_round()
    if final is IdealizedReliableChannel.FAILED:
        return Outcome(None, False, True, net.round, net.view, net.transcript,
                       "reliable channel failed")
    idx = final[0] if isinstance(final[0], tuple) else ()
    pad_b = sum((keys_b[i].a for i in idx if i in (0, 1)), spec.zero())
    result = as_field(spec, final[1]) - pad_b
    return Outcome(result, result == message, False, net.round, net.view,
                   net.transcript)
