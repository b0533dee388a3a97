"""Round-synchronous network simulators with a byzantine adversary.

Two models:

* ``PathNetwork`` — the abstract channel model.  The sender and receiver
  are joined by unidirectional atomic channels ("AB", i) forward and
  ("BA", j) backward.  Anything sent during a round is exposed to the
  adversary at the end of the round (on corrupted channels), possibly
  replaced (active mode), and delivered at the start of the next round.

* ``HyperNet`` — node-level multicast.  Messages travel hop by hop along
  node paths; every recipient of a used hyperedge overhears the payload,
  and corrupted relay nodes may replace what they forward.

Payloads are arbitrary nested tuples of field elements, ints and
strings; they must stay hashable so that majority votes work.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Any, Callable

from .errors import ParamError, PreconditionError
from .field import ExtElement, FieldElement
from .randomness import Randomness
from .topology import Hypergraph

Channel = tuple  # ("AB"|"BA", index)


@dataclass
class AdversaryView:
    """Everything the adversary observes during a run."""

    events: list = dc_field(default_factory=list)   # (round, where, payload)
    public: list = dc_field(default_factory=list)   # (round, label, payload)

    def record(self, rnd: int, where, payload) -> None:
        self.events.append((rnd, where, payload))

    def announce(self, rnd: int, label, payload) -> None:
        self.public.append((rnd, label, payload))

    def leaves(self) -> list:
        """Flatten to (path, leaf) pairs; field elements keep their taints."""
        out = []

        def walk(prefix, value):
            if isinstance(value, tuple) and not isinstance(value, FieldElement):
                for i, v in enumerate(value):
                    walk(prefix + (i,), v)
            elif isinstance(value, ExtElement):
                out.append((prefix + ("len",), len(value)))
                for i, v in enumerate(value.payload):
                    out.append((prefix + (i,), v))
            else:
                out.append((prefix, value))

        for i, (rnd, where, payload) in enumerate(self.events):
            walk(("event", i, rnd, where), payload)
        for i, (rnd, label, payload) in enumerate(self.public):
            walk(("public", i, rnd, label), payload)
        return out

    def canonical(self) -> tuple:
        """Hashable value of the whole view (taints dropped)."""

        def conv(value):
            if isinstance(value, FieldElement):
                return ("F", value.value)
            if isinstance(value, ExtElement):
                return ("E",) + tuple(v.value for v in value.payload)
            if isinstance(value, tuple):
                return tuple(conv(v) for v in value)
            return value

        return (tuple((r, w, conv(p)) for r, w, p in self.events),
                tuple((r, l, conv(p)) for r, l, p in self.public))


@dataclass
class TamperContext:
    """Arguments handed to an active strategy for one corrupted payload."""

    round: int
    where: Any            # channel or node
    payload: Any
    view: AdversaryView
    rng: Randomness
    state: dict           # persists across calls within one run


@dataclass(frozen=True)
class AdversarySpec:
    """Which channels/nodes are corrupted and what the adversary does.

    ``strategy(ctx) -> payload`` returns the replacement for each payload
    crossing a corrupted channel or node; ``None`` strategy = passive.
    """

    corrupted: frozenset = frozenset()
    strategy: Callable | None = None
    seed: Any = 0

    @property
    def active(self) -> bool:
        return self.strategy is not None


class PathNetwork:
    """Atomic-channel model with end-of-round adversarial tampering."""

    def __init__(self, n_forward: int, n_backward: int,
                 adversary: AdversarySpec | None = None):
        if n_forward < 1 or n_backward < 0:
            raise ParamError("need at least one forward channel")
        self.n_forward = n_forward
        self.n_backward = n_backward
        self.adversary = adversary or AdversarySpec()
        self.round = 0
        self.view = AdversaryView()
        self.transcript: list = []
        self._pending: dict = {}
        self._adv_rng = Randomness(("adversary", self.adversary.seed))
        self._adv_state: dict = {}
        for ch in self.adversary.corrupted:
            if not self._valid_channel(ch):
                raise ParamError(f"corrupted channel {ch!r} does not exist")

    def _valid_channel(self, ch) -> bool:
        return (isinstance(ch, tuple) and len(ch) == 2 and
                ((ch[0] == "AB" and 0 <= ch[1] < self.n_forward) or
                 (ch[0] == "BA" and 0 <= ch[1] < self.n_backward)))

    # -- sending -----------------------------------------------------------

    def send_ab(self, i: int, payload) -> None:
        self._stage(("AB", i), payload)

    def send_ba(self, j: int, payload) -> None:
        self._stage(("BA", j), payload)

    def _stage(self, ch: Channel, payload) -> None:
        if not self._valid_channel(ch):
            raise ParamError(f"no such channel {ch!r}")
        if ch in self._pending:
            raise ParamError(f"channel {ch!r} already used this round")
        self._pending[ch] = payload

    def broadcast_ab(self, payload) -> None:
        """Same payload on every forward channel; its value is public."""
        for i in range(self.n_forward):
            self.send_ab(i, payload)
        self.view.announce(self.round, "AB", payload)

    def broadcast_ba(self, payload) -> None:
        for j in range(self.n_backward):
            self.send_ba(j, payload)
        self.view.announce(self.round, "BA", payload)

    # -- round boundary ----------------------------------------------------

    def end_round(self) -> dict:
        """Tamper, deliver, and advance the round counter.

        Returns {channel: payload} for every channel that carried data.
        """
        delivered = {}
        for ch in sorted(self._pending, key=str):
            payload = self._pending[ch]
            if ch in self.adversary.corrupted:
                self.view.record(self.round, ch, payload)
                if self.adversary.active:
                    ctx = TamperContext(self.round, ch, payload, self.view,
                                        self._adv_rng, self._adv_state)
                    payload = self.adversary.strategy(ctx)
            delivered[ch] = payload
            self.transcript.append((self.round, ch, self._pending[ch], payload))
        self._pending = {}
        self.round += 1
        return delivered


def majority_of(values, tie_rng: Randomness):
    """Most frequent value; ties broken by a uniform coin of the receiver."""
    counts: dict = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    if not counts:
        return None
    top = max(counts.values())
    tied = sorted((v for v, c in counts.items() if c == top), key=str)
    if len(tied) == 1:
        return tied[0]
    idx, _ = tie_rng.draw(len(tied))
    return tied[idx]


def reliable_broadcast(net: PathNetwork, payload, k: int) -> None:
    """Broadcast tolerating k corrupted forward channels.

    Requires at least 2k+1 forward channels so that the majority at the
    receiver is guaranteed; the broadcast value is public knowledge.
    """
    if net.n_forward < 2 * k + 1:
        raise PreconditionError(
            f"reliable broadcast needs >= {2 * k + 1} channels, have {net.n_forward}")
    net.broadcast_ab(payload)


def recv_broadcast(delivered: dict, direction: str, n: int, tie_rng: Randomness):
    """Receiver side of a broadcast: majority over all channels."""
    values = [delivered.get((direction, i)) for i in range(n)]
    return majority_of(values, tie_rng)


def majority_transmit(net: PathNetwork, payload) -> None:
    """Send on every forward channel with no channel-count precondition.

    Unlike ``reliable_broadcast`` the value is not treated as public and
    the majority at the receiver carries no guarantee.
    """
    for i in range(net.n_forward):
        net.send_ab(i, payload)


# ---------------------------------------------------------------------------
# node-level multicast simulation


class HyperNet:
    """Hop-by-hop routing over a multicast hypergraph.

    A corrupted node overhears every hyperedge whose recipient set it
    belongs to (or that it originates) and may replace payloads it is
    asked to forward.
    """

    def __init__(self, graph: Hypergraph, adversary: AdversarySpec | None = None):
        self.graph = graph
        self.adversary = adversary or AdversarySpec()
        bad = self.adversary.corrupted - graph.nodes
        if bad:
            raise ParamError(f"corrupted nodes {sorted(bad)} not in graph")
        if {graph.sender, graph.receiver} & self.adversary.corrupted:
            raise ParamError("sender and receiver are incorruptible")
        self.round = 0
        self.view = AdversaryView()
        self.transcript: list = []
        self._adv_rng = Randomness(("adversary", self.adversary.seed))
        self._adv_state: dict = {}
        self._edges_from: dict = {}
        for origin, recipients in graph.hyperedges:
            self._edges_from.setdefault(origin, []).append(recipients)
        for origin in self._edges_from:
            self._edges_from[origin].sort(key=lambda r: sorted(r))

    def multicast(self, origin, payload):
        """Origin sends on its hyperedge; every recipient hears the same
        value.  Returns {recipient: payload}.  A corrupted origin may
        substitute the payload; corrupted listeners record it.
        """
        edges = self._edges_from.get(origin)
        if not edges:
            raise ParamError(f"{origin} has no hyperedge to send on")
        recipients = edges[0]
        if origin in self.adversary.corrupted and self.adversary.active:
            ctx = TamperContext(self.round, origin, payload, self.view,
                                self._adv_rng, self._adv_state)
            payload = self.adversary.strategy(ctx)
        if (recipients | {origin}) & self.adversary.corrupted:
            self.view.record(self.round, (origin, tuple(sorted(recipients))),
                             payload)
        self.transcript.append((self.round, "multicast", origin, payload))
        return {r: payload for r in recipients}

    def advance_round(self) -> None:
        self.round += 1

    def _edge_to(self, origin, nxt) -> frozenset:
        for recipients in self._edges_from.get(origin, ()):
            if nxt in recipients:
                return recipients
        raise ParamError(f"no hyperedge from {origin} reaching {nxt}")

    def validate_path(self, path) -> None:
        for a, b in zip(path, path[1:]):
            self._edge_to(a, b)

    def transmit(self, routes: dict) -> dict:
        """Route {route_id: (path, payload)}; one hop per round, in parallel.

        Returns {route_id: delivered payload}.  The round counter advances
        by the length of the longest path.
        """
        state = {}
        for rid in sorted(routes, key=str):
            path, payload = routes[rid]
            if path[0] != self.graph.sender and path[-1] != self.graph.sender:
                pass  # paths may run in either direction
            self.validate_path(path)
            state[rid] = [list(path), payload]
        delivered = {}
        while state:
            for rid in sorted(state, key=str):
                path, payload = state[rid]
                origin, nxt = path[0], path[1]
                recipients = self._edge_to(origin, nxt)
                if origin in self.adversary.corrupted:
                    # a corrupted relay may replace what it forwards
                    if self.adversary.active:
                        ctx = TamperContext(self.round, origin, payload,
                                            self.view, self._adv_rng,
                                            self._adv_state)
                        payload = self.adversary.strategy(ctx)
                if (recipients | {origin}) & self.adversary.corrupted:
                    self.view.record(self.round, (origin, tuple(sorted(recipients))),
                                     payload)
                self.transcript.append((self.round, rid, origin, payload))
                if nxt == path[-1] and len(path) == 2:
                    delivered[rid] = payload
                    del state[rid]
                else:
                    state[rid] = [path[1:], payload]
            self.round += 1
        return delivered


class IdealizedReliableChannel:
    """Two-way channel that may fail to deliver but never modifies data.

    Each transmission independently fails with probability ``delta_r``
    (the receiver sees ``None``).  Contents are public: the adversary
    observes every payload sent through the channel.
    """

    FAILED = None

    def __init__(self, delta_r: float, view: AdversaryView, rng: Randomness,
                 resolution: int = 10**6):
        if not 0 <= delta_r < 1:
            raise ParamError("delta_r must be in [0, 1)")
        self.delta_r = delta_r
        self.view = view
        self._rng = rng
        self._resolution = resolution
        self.uses = 0

    def send(self, rnd: int, label, payload):
        self.uses += 1
        self.view.announce(rnd, ("reliable", label), payload)
        coin, _ = self._rng.draw(self._resolution)
        if coin < self.delta_r * self._resolution:
            return self.FAILED
        return payload


@dataclass
class Outcome:
    """Result of one protocol execution."""

    delivered: Any          # receiver's output message (or None)
    succeeded: bool         # delivered == sent message
    failed: bool            # receiver detected failure / gave up
    rounds: int
    view: AdversaryView
    transcript: list
    detail: str = ""
