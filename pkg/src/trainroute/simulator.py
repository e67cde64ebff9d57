"""Deterministic event engine over a :class:`~trainroute.training.Network`.

Logical time is the event index. All randomness (graph generation and
workload sampling) comes from a single ``random.Random`` seeded per call.
"""
from __future__ import annotations

import random
from collections import defaultdict, deque
from collections.abc import Callable
from dataclasses import dataclass, field

from .discovery import BACKENDS
from .graph import Graph, GraphError, build_graph
from .training import DeliveryReport, Network

MAX_GRAPH_ATTEMPTS = 200


class ScenarioError(ValueError):
    """Scenario failed validation; ``errors`` lists every problem found."""

    def __init__(self, errors: list[str]) -> None:
        super().__init__("; ".join(errors))
        self.errors = errors


@dataclass(frozen=True)
class Transfer:
    source: int
    dest: int


@dataclass(frozen=True)
class Remove:
    node: int


@dataclass(frozen=True)
class AddNode:
    node: int
    neighbors: tuple[int, ...]


Event = Transfer | Remove | AddNode


@dataclass(frozen=True)
class GraphGenerator:
    nodes: int
    edge_prob: float
    seed: int


@dataclass(frozen=True)
class Workload:
    """Random transfers appended after the explicit events, drawn from the run seed."""

    transfers: int
    pairs: int | None = None  # size of the distinct pair pool; None = any pair


@dataclass
class Scenario:
    node_count: int = 0
    edges: list[tuple[int, int]] = field(default_factory=list)
    weights: dict[tuple[int, int], float] = field(default_factory=dict)
    generator: GraphGenerator | None = None
    backend: str = "link_state"
    seed: int = 0
    events: list[Event] = field(default_factory=list)
    workload: Workload | None = None
    name: str = "scenario"

    def build_graph(self) -> Graph:
        if self.generator is not None:
            gen = self.generator
            return build_graph(gen.nodes, random_connected_edges(gen.nodes, gen.edge_prob, random.Random(gen.seed)))
        return build_graph(self.node_count, self.edges, self.weights)

    def resolved_events(self) -> list[Event]:
        """Explicit events followed by the seeded workload, if any."""
        events = list(self.events)
        if self.workload is not None:
            alive = _alive_after(self.build_graph(), events)
            rng = random.Random(self.seed)
            events += _random_transfers(sorted(alive), self.workload.transfers, self.workload.pairs, rng)
        return events

    def has_churn(self) -> bool:
        return any(not isinstance(e, Transfer) for e in self.events)


def _alive_after(g: Graph, events: list[Event]) -> set[int]:
    alive = set(g.alive_nodes())
    for e in events:
        if isinstance(e, Remove):
            alive.discard(e.node)
        elif isinstance(e, AddNode):
            alive.add(e.node)
    return alive


def validate(sc: Scenario) -> list[Event]:
    """Check a scenario without running it; returns its resolved event list."""
    errors: list[str] = []
    if sc.backend not in BACKENDS:
        errors.append(f"unknown backend {sc.backend!r}")
    try:
        g = sc.build_graph()
    except (GraphError, ValueError) as exc:
        raise ScenarioError(errors + [f"graph: {exc}"]) from None
    alive = set(g.alive_nodes())
    next_id = g.node_count + 1
    for t, e in enumerate(sc.events):
        where = f"event {t + 1}"
        if isinstance(e, Transfer):
            for v in (e.source, e.dest):
                if v not in alive:
                    errors.append(f"{where}: transfer references node {v} which is not alive")
        elif isinstance(e, Remove):
            if e.node not in alive:
                errors.append(f"{where}: remove of node {e.node} which is not alive")
            alive.discard(e.node)
        elif isinstance(e, AddNode):
            if e.node != next_id:
                errors.append(f"{where}: added node must take id {next_id}, got {e.node}")
            for v in e.neighbors:
                if v not in alive:
                    errors.append(f"{where}: added node links to {v} which is not alive")
            alive.add(e.node)
            next_id = max(next_id, e.node) + 1
        else:
            errors.append(f"{where}: unknown event {e!r}")
    if sc.workload is not None:
        if sc.workload.transfers < 0:
            errors.append("workload: transfers must be non-negative")
        if sc.workload.pairs is not None and sc.workload.pairs < 1:
            errors.append("workload: pairs must be positive")
        if sc.workload.transfers and len(alive) < 2:
            errors.append("workload: needs at least two alive nodes")
    if errors:
        raise ScenarioError(errors)
    return sc.resolved_events()


@dataclass
class Metrics:
    transfers: int = 0
    deliveries: int = 0
    failures: int = 0
    cache_hits: int = 0
    discovery_transfers: int = 0
    discoveries: int = 0
    control_messages: int = 0
    data_hops_total: int = 0
    table_bytes: int = 0
    table_bytes_by_epoch: list[int] = field(default_factory=list)
    pair_hops: dict[tuple[int, int], list[int]] = field(default_factory=dict)
    traffic: dict[tuple[int, int], int] = field(default_factory=dict)

    def record(self, report: DeliveryReport) -> None:
        self.transfers += 1
        self.discoveries += report.discoveries_triggered
        self.control_messages += report.control_messages
        self.data_hops_total += report.data_hops
        if not report.delivered:
            self.failures += 1
        else:
            self.deliveries += 1
            if report.cache_hit:
                self.cache_hits += 1
            else:
                self.discovery_transfers += 1
        self.pair_hops.setdefault((report.source, report.dest), []).append(report.data_hops)

    def reconciles(self) -> bool:
        return (
            self.cache_hits + self.discovery_transfers + self.failures == self.transfers
            and self.deliveries + self.failures == self.transfers
            and sum(self.traffic.values()) == self.data_hops_total
        )


@dataclass
class RunResult:
    scenario: Scenario
    backend: str
    metrics: Metrics
    log: list[dict]
    network: Network


def run_scenario(
    sc: Scenario,
    backend: str | None = None,
    on_event: Callable[[Network, int, Event], None] | None = None,
) -> RunResult:
    """Execute every event in order. ``on_event`` runs after each event (test hook)."""
    events = validate(sc)
    backend = backend or sc.backend
    net = Network(sc.build_graph(), backend)
    metrics = Metrics()
    log: list[dict] = []
    for t, e in enumerate(events):
        if isinstance(e, Transfer):
            report = net.send_data(e.source, e.dest)
            metrics.record(report)
            log.append({"t": t, "event": "transfer", **report.as_record()})
        else:
            metrics.table_bytes_by_epoch.append(net.table_bytes())
            if isinstance(e, Remove):
                cleared = net.handle_departure(e.node)
                log.append({"t": t, "event": "remove", "node": e.node, "tables_cleared": cleared})
            else:
                cleared = net.handle_arrival(e.node, list(e.neighbors))
                log.append({"t": t, "event": "add", "node": e.node,
                            "neighbors": list(e.neighbors), "tables_cleared": cleared})
        if on_event is not None:
            on_event(net, t, e)
    metrics.table_bytes = net.table_bytes()
    metrics.table_bytes_by_epoch.append(metrics.table_bytes)
    for v, table in sorted(net.tables.items()):
        for d, count in enumerate(table.traffic):
            if count:
                metrics.traffic[(v, d)] = count
    return RunResult(sc, backend, metrics, log, net)


def compare_backends(sc: Scenario) -> dict[str, RunResult]:
    return {b: run_scenario(sc, backend=b) for b in BACKENDS}


def is_connected(nodes: list[int], edges: list[tuple[int, int]]) -> bool:
    if not nodes:
        return True
    adj: dict[int, list[int]] = defaultdict(list)
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    seen = {nodes[0]}
    queue = deque(seen)
    while queue:
        v = queue.popleft()
        for j in adj[v]:
            if j not in seen:
                seen.add(j)
                queue.append(j)
    return len(seen) == len(nodes)


def random_connected_edges(n: int, edge_prob: float, rng: random.Random) -> list[tuple[int, int]]:
    """Sample G(n, p) until connected; gives up after ``MAX_GRAPH_ATTEMPTS`` draws."""
    if n < 1:
        raise ValueError(f"node count must be positive, got {n}")
    if not 0 < edge_prob <= 1:
        raise ValueError(f"edge probability must be in (0, 1], got {edge_prob}")
    nodes = list(range(1, n + 1))
    for _ in range(MAX_GRAPH_ATTEMPTS):
        edges = [(i, j) for i in nodes for j in range(i + 1, n + 1) if rng.random() < edge_prob]
        if is_connected(nodes, edges):
            return edges
    raise ValueError(
        f"no connected graph with n={n}, p={edge_prob} after {MAX_GRAPH_ATTEMPTS} attempts; "
        "try a higher edge probability"
    )


def _random_transfers(
    alive: list[int], count: int, pairs: int | None, rng: random.Random
) -> list[Event]:
    if count == 0:
        return []
    if pairs is None:
        return [Transfer(*rng.sample(alive, 2)) for _ in range(count)]
    all_pairs = [(s, d) for s in alive for d in alive if s != d]
    pool = rng.sample(all_pairs, min(pairs, len(all_pairs)))
    return [Transfer(*rng.choice(pool)) for _ in range(count)]


def generate_random_scenario(
    n: int,
    edge_prob: float,
    transfers: int,
    churn: int = 0,
    seed: int = 0,
    pairs: int | None = None,
    allow_partition: bool = False,
    backend: str = "link_state",
) -> Scenario:
    """Random connected graph plus ``transfers`` transfers and ``churn`` node removals.

    Removals skip cut vertices (so the survivors stay connected) unless
    ``allow_partition`` is set. With ``pairs`` the transfers are drawn from
    a fixed pool of that many distinct (source, dest) pairs.
    """
    if n < 2:
        raise ValueError(f"need at least 2 nodes, got {n}")
    rng = random.Random(seed)
    edges = random_connected_edges(n, edge_prob, rng)
    alive = list(range(1, n + 1))
    all_pairs = [(s, d) for s in alive for d in alive if s != d]
    pool = rng.sample(all_pairs, min(pairs, len(all_pairs))) if pairs else None
    churn_slots = set(rng.sample(range(transfers + churn), churn))
    live_edges = list(edges)
    events: list[Event] = []
    for slot in range(transfers + churn):
        if slot in churn_slots:
            candidates = [
                v for v in alive
                if allow_partition or is_connected(
                    [u for u in alive if u != v],
                    [e for e in live_edges if v not in e],
                )
            ]
            if len(alive) <= 2 or not candidates:
                continue
            v = rng.choice(candidates)
            alive.remove(v)
            live_edges = [e for e in live_edges if v not in e]
            events.append(Remove(v))
        else:
            usable = [p for p in pool if p[0] in alive and p[1] in alive] if pool else None
            if usable:
                events.append(Transfer(*rng.choice(usable)))
            else:
                events.append(Transfer(*rng.sample(alive, 2)))
    return Scenario(
        node_count=n,
        edges=edges,
        backend=backend,
        seed=seed,
        events=events,
        name=f"random-n{n}-p{edge_prob}-s{seed}",
    )
