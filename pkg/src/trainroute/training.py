"""Train-on-miss route caching.

A node that lacks an entry for a destination asks a discovery backend for a
route once, then writes the next-hop edge ordinal into the table of every
node on that route. Later packets follow the cached masks hop by hop with no
further discovery traffic.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .cache import Miss, RouteTable
from .discovery import BACKENDS, discover
from .graph import Graph, GraphError


@dataclass
class DeliveryReport:
    source: int
    dest: int
    delivered: bool
    path: list[int] = field(default_factory=list)
    data_hops: int = 0
    discoveries_triggered: int = 0
    control_messages: int = 0

    @property
    def outcome(self) -> str:
        return "delivered" if self.delivered else "undeliverable"

    @property
    def cache_hit(self) -> bool:
        return self.discoveries_triggered == 0

    def as_record(self) -> dict:
        return {
            "source": self.source,
            "dest": self.dest,
            "outcome": self.outcome,
            "path": list(self.path),
            "data_hops": self.data_hops,
            "discoveries_triggered": self.discoveries_triggered,
            "control_messages": self.control_messages,
            "cache_hit": self.cache_hit,
        }


class Network:
    """Topology plus one training table per node, driven by one backend."""

    def __init__(self, graph: Graph, backend: str = "link_state") -> None:
        if backend not in BACKENDS:
            raise ValueError(f"unknown discovery backend {backend!r}")
        self.graph = graph
        self.backend = backend
        n = graph.node_count
        self.tables = {v: RouteTable(v, n) for v in range(1, n + 1)}

    def table(self, v: int) -> RouteTable:
        try:
            return self.tables[v]
        except KeyError:
            raise GraphError(f"unknown node {v!r}") from None

    def _usable(self, s: int, d: int) -> bool:
        t = self.tables[s]
        hop = t.get_next_hop(self.graph, d)
        if hop is Miss.STALE:
            t.clear(d)
        return not isinstance(hop, Miss)

    def train(self, s: int, d: int) -> tuple[int, int, bool]:
        """Train ``s`` toward ``d`` unless it already holds a usable entry.

        Returns ``(discoveries, control_messages, ok)``; ``ok`` is false only
        when a discovery ran and found ``d`` unreachable.
        """
        if s == d or self._usable(s, d):
            return 0, 0, True
        outcome = discover(self.backend, self.graph, s, d)
        if outcome.route is None:
            return 1, outcome.control_messages, False
        self.send_update(outcome.route, d)
        return 1, outcome.control_messages, True

    def send_update(self, route: list[int], d: int) -> int:
        """Write ``d``'s next-hop ordinal at every node of ``route`` except the last."""
        written = 0
        for here, nxt in zip(route, route[1:]):
            try:
                k = self.graph.index_edge(here, nxt)
            except GraphError:
                # a hop died or lost its link since discovery; stop here
                break
            self.tables[here].set_entry(d, k)
            written += 1
        return written

    def transfer_data(self, s: int, d: int) -> DeliveryReport:
        """Forward one packet along cached masks, retraining at whichever node misses."""
        g = self.graph
        for v in (s, d):
            if not g.is_alive(v):
                raise GraphError(f"node {v} is not alive")
        report = DeliveryReport(s, d, delivered=False, path=[s])
        here = s
        while here != d:
            hop = self.tables[here].get_next_hop(g, d)
            if isinstance(hop, Miss):
                found, msgs, ok = self.train(here, d)
                report.discoveries_triggered += found
                report.control_messages += msgs
                if not ok or found == 0:
                    return report
                continue
            if len(report.path) >= g.node_count:
                # routing loop guard: a loop-free walk never needs more than n nodes
                return report
            self.tables[here].traffic[d] += 1
            report.path.append(hop)
            report.data_hops += 1
            here = hop
        report.delivered = True
        return report

    def send_data(self, s: int, d: int) -> DeliveryReport:
        found, msgs, ok = self.train(s, d)
        if not ok:
            return DeliveryReport(
                s, d, delivered=False, path=[s], discoveries_triggered=found, control_messages=msgs
            )
        report = self.transfer_data(s, d)
        report.discoveries_triggered += found
        report.control_messages += msgs
        return report

    def handle_departure(self, v: int) -> int:
        """Remove ``v`` and wipe every table whose ordinals it shifted.

        Returns the number of tables wiped, i.e. the alive former neighbours.
        """
        former = self.graph.remove_node(v)
        for u in self.graph.alive_nodes():
            self.tables[u].invalidate_for_departure(self.graph, v)
        return len(former)

    def handle_arrival(self, v: int, neighbors: list[int]) -> int:
        """Add node ``v``; its neighbours drop their tables like on a departure."""
        nbrs = self.graph.add_node(v, neighbors)
        n = self.graph.node_count
        for t in self.tables.values():
            t.grow(n)
        self.tables[v] = RouteTable(v, n)
        for u in nbrs:
            self.tables[u].clear()
        return len(nbrs)

    def traffic_count(self, node: int, dest: int) -> int:
        t = self.table(node)
        if not 1 <= dest < len(t.traffic):
            raise GraphError(f"unknown node {dest!r}")
        return t.traffic[dest]

    def table_bytes(self) -> int:
        return sum(self.tables[v].byte_size(self.graph) for v in self.graph.alive_nodes())
