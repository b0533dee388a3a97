"""Graph models and exhaustive connectivity analysis.

Three network models: directed graphs, multicast hypergraphs, and
neighbor networks (undirected multicast).  All predicates are exact
exhaustive-search implementations sized for desk-scale instances; the
documented limit is |V| <= 20 for k <= 3.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field as dc_field

from .errors import ParamError, SizeLimit

_NODE_LIMIT = 20


def _check_size(nodes, k: int) -> None:
    if len(nodes) > _NODE_LIMIT and k > 3:
        raise SizeLimit(f"exhaustive search limited to |V| <= {_NODE_LIMIT} for k <= 3")
    if len(nodes) > _NODE_LIMIT:
        raise SizeLimit(f"exhaustive search limited to |V| <= {_NODE_LIMIT}")


@dataclass(frozen=True)
class Digraph:
    nodes: frozenset
    edges: frozenset  # of (tail, head) pairs
    sender: str
    receiver: str

    def __post_init__(self):
        if self.sender == self.receiver:
            raise ParamError("sender and receiver must differ")
        for a, b in self.edges:
            if a not in self.nodes or b not in self.nodes:
                raise ParamError(f"edge ({a},{b}) references unknown node")
        if self.sender not in self.nodes or self.receiver not in self.nodes:
            raise ParamError("sender/receiver missing from node set")

    def successors(self, v) -> list:
        return sorted(b for a, b in self.edges if a == v)

    @classmethod
    def build(cls, nodes, edges, sender, receiver) -> "Digraph":
        return cls(frozenset(nodes), frozenset(tuple(e) for e in edges),
                   sender, receiver)


@dataclass(frozen=True)
class Hypergraph:
    nodes: frozenset
    hyperedges: tuple  # of (origin, frozenset(recipients))
    sender: str
    receiver: str

    def __post_init__(self):
        if self.sender == self.receiver:
            raise ParamError("sender and receiver must differ")
        for origin, recipients in self.hyperedges:
            if origin not in self.nodes or not recipients <= self.nodes:
                raise ParamError("hyperedge references unknown node")

    @classmethod
    def build(cls, nodes, hyperedges, sender, receiver) -> "Hypergraph":
        canon = tuple(sorted(
            (origin, frozenset(recipients)) for origin, recipients in hyperedges))
        return cls(frozenset(nodes), canon, sender, receiver)

    def direct_links(self) -> frozenset:
        """(X, Y) pairs with a hyperedge (X, X*) where Y is in X*."""
        links = set()
        for origin, recipients in self.hyperedges:
            for r in recipients:
                if r != origin:
                    links.add((origin, r))
        return frozenset(links)

    def induced_digraph(self) -> Digraph:
        return Digraph(self.nodes, self.direct_links(), self.sender, self.receiver)

    def restricted(self, removed: frozenset) -> tuple:
        """Hyperedges surviving removal of the node set `removed`."""
        return tuple(
            (origin, recipients) for origin, recipients in self.hyperedges
            if not (removed & (recipients | {origin})))


@dataclass(frozen=True)
class NeighborNet:
    nodes: frozenset
    edges: frozenset  # of frozenset({a, b}) pairs
    sender: str
    receiver: str

    def __post_init__(self):
        if self.sender == self.receiver:
            raise ParamError("sender and receiver must differ")
        for e in self.edges:
            if len(e) != 2 or not e <= self.nodes:
                raise ParamError("edges must be 2-subsets of the node set")

    @classmethod
    def build(cls, nodes, edges, sender, receiver) -> "NeighborNet":
        return cls(frozenset(nodes), frozenset(frozenset(e) for e in edges),
                   sender, receiver)

    def neighbors(self, v) -> frozenset:
        return frozenset(next(iter(e - {v})) for e in self.edges if v in e)


@dataclass(frozen=True)
class PathSet:
    """Internally node-disjoint directed sender->receiver paths."""

    paths: tuple  # of node tuples

    def __len__(self) -> int:
        return len(self.paths)

    def internal_nodes(self) -> tuple:
        return tuple(frozenset(p[1:-1]) for p in self.paths)

    def validate(self, links: frozenset, sender, receiver) -> None:
        seen = set()
        for p in self.paths:
            if p[0] != sender or p[-1] != receiver:
                raise ParamError("path endpoints wrong")
            for a, b in zip(p, p[1:]):
                if (a, b) not in links:
                    raise ParamError(f"({a},{b}) is not a link")
            internal = set(p[1:-1])
            if internal & seen:
                raise ParamError("paths share an internal node")
            seen |= internal


# ---------------------------------------------------------------------------
# disjoint paths via node-splitting max flow


def max_disjoint_paths(g) -> PathSet:
    """Maximum set of internally node-disjoint directed sender->receiver paths."""
    if isinstance(g, Hypergraph):
        g = g.induced_digraph()
    src, dst = g.sender, g.receiver
    # split every node v into v_in -> v_out with unit capacity
    # (endpoints get unbounded "capacity" by using a large count)
    arcs: dict = {}

    def add_arc(u, v, cap):
        arcs.setdefault(u, {})[v] = arcs.get(u, {}).get(v, 0) + cap
        arcs.setdefault(v, {}).setdefault(u, 0)

    big = len(g.nodes) + 1
    for v in sorted(g.nodes):
        add_arc(("in", v), ("out", v), big if v in (src, dst) else 1)
    for a, b in sorted(g.edges):
        add_arc(("out", a), ("in", b), 1)

    s, t = ("out", src), ("in", dst)
    flow = 0
    while True:
        # BFS over residual arcs, smallest-successor first for determinism
        prev = {s: None}
        queue = deque([s])
        while queue and t not in prev:
            u = queue.popleft()
            for v in sorted(arcs.get(u, {}), key=str):
                if v not in prev and arcs[u][v] > 0:
                    prev[v] = u
                    queue.append(v)
        if t not in prev:
            break
        v = t
        while prev[v] is not None:
            u = prev[v]
            arcs[u][v] -= 1
            arcs[v][u] += 1
            v = u
        flow += 1

    # decompose the flow into node sequences, smallest successor first;
    # per-arc flow = original capacity minus remaining residual capacity
    paths = []
    fwd = {}
    orig_caps: dict = {}
    for v in sorted(g.nodes):
        orig_caps[(("in", v), ("out", v))] = big if v in (src, dst) else 1
    for a, b in sorted(g.edges):
        key = (("out", a), ("in", b))
        orig_caps[key] = orig_caps.get(key, 0) + 1
    for (u, v), cap in orig_caps.items():
        f = cap - arcs[u][v]
        if f > 0:
            fwd[(u, v)] = f
    for _ in range(flow):
        path = [src]
        node = ("out", src)
        while node != t:
            nxt = min((v for v in arcs.get(node, {}) if fwd.get((node, v), 0) > 0),
                      key=str)
            fwd[(node, nxt)] -= 1
            node = nxt
            if node[0] == "in" and node[1] != dst:
                node2 = ("out", node[1])
                fwd[(node, node2)] -= 1
                path.append(node[1])
                node = node2
        path.append(dst)
        paths.append(tuple(path))
    return PathSet(tuple(sorted(paths)))


def min_vertex_separator(g) -> frozenset | None:
    """Brute-force smallest W in V-{A,B} meeting every directed A->B path.

    Returns None when no such set exists (a direct sender->receiver edge).
    """
    if isinstance(g, Hypergraph):
        g = g.induced_digraph()
    internal = sorted(g.nodes - {g.sender, g.receiver})
    for size in range(len(internal) + 1):
        for w in itertools.combinations(internal, size):
            if not _digraph_connected(g, frozenset(w)):
                return frozenset(w)
    return None


def _digraph_connected(g: Digraph, removed: frozenset) -> bool:
    reach = {g.sender}
    queue = deque([g.sender])
    while queue:
        u = queue.popleft()
        for v in g.successors(u):
            if v not in removed and v not in reach:
                reach.add(v)
                queue.append(v)
    return g.receiver in reach


# ---------------------------------------------------------------------------
# hypergraph predicates


def is_k_separable(h: Hypergraph, k: int):
    """(True, witness W) if some W (|W| <= k) meets every directed path."""
    g = h.induced_digraph()
    internal = sorted(h.nodes - {h.sender, h.receiver})
    for size in range(min(k, len(internal)) + 1):
        for w in itertools.combinations(internal, size):
            if not _digraph_connected(g, frozenset(w)):
                return True, frozenset(w)
    return False, None


def _hyper_connected(h: Hypergraph, removed: frozenset, directed: bool) -> bool:
    """Path survival after removing `removed` and every touched hyperedge."""
    surviving = h.restricted(removed)
    links = set()
    for origin, recipients in surviving:
        for r in recipients:
            if r != origin:
                links.add((origin, r))
                if not directed:
                    links.add((r, origin))
    reach = {h.sender}
    queue = deque([h.sender])
    while queue:
        u = queue.popleft()
        for a, b in links:
            if a == u and b not in reach and b not in removed:
                reach.add(b)
                queue.append(b)
    return h.receiver in reach


def strongly_k_connected(h: Hypergraph, k: int) -> bool:
    _check_size(h.nodes, k)
    internal = sorted(h.nodes - {h.sender, h.receiver})
    for size in range(min(k - 1, len(internal)) + 1):
        for s in itertools.combinations(internal, size):
            if not _hyper_connected(h, frozenset(s), directed=True):
                return False
    return True


def weakly_k_connected(h: Hypergraph, k: int) -> bool:
    _check_size(h.nodes, k)
    internal = sorted(h.nodes - {h.sender, h.receiver})
    for size in range(min(k - 1, len(internal)) + 1):
        for s in itertools.combinations(internal, size):
            if not _hyper_connected(h, frozenset(s), directed=False):
                return False
    return True


def strong_witness_path(h: Hypergraph, removed: frozenset) -> tuple | None:
    """A directed path surviving removal of `removed` and touched hyperedges."""
    surviving = h.restricted(removed)
    links = {}
    for origin, recipients in surviving:
        for r in recipients:
            if r != origin and r not in removed and origin not in removed:
                links.setdefault(origin, set()).add(r)
    prev = {h.sender: None}
    queue = deque([h.sender])
    while queue:
        u = queue.popleft()
        if u == h.receiver:
            path = []
            while u is not None:
                path.append(u)
                u = prev[u]
            return tuple(reversed(path))
        for v in sorted(links.get(u, ())):
            if v not in prev:
                prev[v] = u
                queue.append(v)
    return None


# ---------------------------------------------------------------------------
# neighbor networks


def to_hypergraph(g: NeighborNet) -> Hypergraph:
    """Equivalent hypergraph: one hyperedge (v, neighbors(v)) per node."""
    return Hypergraph.build(
        g.nodes,
        [(v, g.neighbors(v)) for v in sorted(g.nodes)],
        g.sender, g.receiver)


def _undirected_digraph(g: NeighborNet) -> Digraph:
    edges = set()
    for e in g.edges:
        a, b = sorted(e)
        edges.add((a, b))
        edges.add((b, a))
    return Digraph(g.nodes, frozenset(edges), g.sender, g.receiver)


def k_connected(g: NeighborNet, k: int) -> bool:
    """At least k internally node-disjoint undirected paths."""
    return len(max_disjoint_paths(_undirected_digraph(g))) >= k


def weakly_k_hyper_connected(g: NeighborNet, k: int) -> bool:
    return weakly_k_connected(to_hypergraph(g), k)


def neighbor_closure(g: NeighborNet, v1: frozenset) -> frozenset:
    closure = set(v1)
    for v in v1:
        closure |= g.neighbors(v)
    return frozenset(closure - {g.sender, g.receiver})


def neighbor_k_connected(g: NeighborNet, k: int) -> bool:
    _check_size(g.nodes, k)
    internal = sorted(g.nodes - {g.sender, g.receiver})
    base = _undirected_digraph(g)
    for size in range(min(k - 1, len(internal)) + 1):
        for v1 in itertools.combinations(internal, size):
            removed = neighbor_closure(g, frozenset(v1))
            if not _digraph_connected(base, removed):
                return False
    return True


def _all_simple_paths(g: NeighborNet) -> list:
    out = []
    target = g.receiver

    def extend(path, visited):
        u = path[-1]
        if u == target:
            out.append(tuple(path))
            return
        for v in sorted(g.neighbors(u)):
            if v not in visited:
                extend(path + [v], visited | {v})

    extend([g.sender], {g.sender})
    return out


def weakly_nk_connected(g: NeighborNet, n: int, k: int):
    """(True, witness path family) per the disjoint-neighborhood definition."""
    _check_size(g.nodes, k)
    internal = sorted(g.nodes - {g.sender, g.receiver})
    paths = _all_simple_paths(g)
    tsets = [frozenset(t)
             for size in range(min(k, len(internal)) + 1)
             for t in itertools.combinations(internal, size)]

    def path_clear(path, t) -> bool:
        return all(not (g.neighbors(v) & t) for v in path)

    for family in itertools.combinations(paths, n):
        internals = [frozenset(p[1:-1]) for p in family]
        if any(internals[i] & internals[j]
               for i in range(n) for j in range(i + 1, n)):
            continue
        if all(any(path_clear(p, t) for p in family) for t in tsets):
            return True, tuple(family)
    return False, None


def connectivity_hierarchy(g: NeighborNet, k: int) -> dict:
    """All four predicates at level k, with the implication chain asserted."""
    kc = k_connected(g, k)
    wh = weakly_k_hyper_connected(g, k)
    nc = neighbor_k_connected(g, k)
    max_n = len(max_disjoint_paths(_undirected_digraph(g)))
    wnk = any(weakly_nk_connected(g, n, k - 1)[0]
              for n in range(k, max_n + 1))
    report = {
        "k_connected": kc,
        "weakly_k_hyper_connected": wh,
        "k_neighbor_connected": nc,
        "weakly_nk_connected": wnk,
        "k": k,
    }
    # implication chain on this instance
    if wnk and not nc:
        raise AssertionError("hierarchy violated: weak (n,k-1) without neighbor")
    if nc and not wh:
        raise AssertionError("hierarchy violated: neighbor without weak hyper")
    if wh and not kc:
        raise AssertionError("hierarchy violated: weak hyper without k-connected")
    return report
