"""Route discovery backends.

The training layer only needs *a* route; these two stand-ins cover the
proactive family (``link_state``: converged tables, no control traffic) and
the reactive family (``flood``: request flood plus reply walk).
"""
from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass

from .graph import Graph, GraphError

BACKENDS = ("link_state", "flood")


@dataclass(frozen=True)
class DiscoveryOutcome:
    route: list[int] | None  # None when the destination is unreachable
    control_messages: int
    backend: str

    @property
    def reachable(self) -> bool:
        return self.route is not None


def link_state_route(g: Graph, s: int, d: int) -> list[int] | None:
    """Minimum-weight path; equal costs resolve to the lexicographically smallest node sequence.

    Distances to ``d`` are settled first, then the path is walked from ``s``
    always taking the smallest-id neighbour that stays on a shortest path.
    """
    if s == d:
        raise GraphError("source and destination must differ")
    to_d: dict[int, float] = {}
    heap: list[tuple[float, int]] = [(0.0, d)]
    while heap:
        cost, v = heapq.heappop(heap)
        if v in to_d:
            continue
        to_d[v] = cost
        if v == s:
            break
        for j, w in g.weighted_neighbors(v):
            if j not in to_d:
                heapq.heappush(heap, (cost + w, j))
    if s not in to_d:
        return None
    route = [s]
    while route[-1] != d:
        v = route[-1]
        for j, w in g.weighted_neighbors(v):
            if j in to_d and math.isclose(w + to_d[j], to_d[v], rel_tol=1e-12, abs_tol=1e-12):
                route.append(j)
                break
    return route


def flood_route(g: Graph, s: int, d: int) -> tuple[list[int] | None, int]:
    """Breadth-first request flood from ``s`` with a reply walked back along parents.

    Every node the request reaches rebroadcasts it once to all neighbours
    except the one it first heard it from; each such per-neighbour
    transmission is one control message. The reply adds one message per hop.
    """
    if s == d:
        raise GraphError("source and destination must differ")
    parent: dict[int, int | None] = {s: None}
    queue = deque([s])
    requests = 0
    while queue:
        v = queue.popleft()
        nbrs = g.neighbors(v)
        requests += len(nbrs) - (parent[v] is not None)
        for j in nbrs:
            if j not in parent:
                parent[j] = v
                queue.append(j)
    if d not in parent:
        return None, requests
    route = [d]
    while route[-1] != s:
        route.append(parent[route[-1]])
    route.reverse()
    return route, requests + len(route) - 1


def discover(backend: str, g: Graph, s: int, d: int) -> DiscoveryOutcome:
    if not g.is_alive(s) or not g.is_alive(d):
        raise GraphError(f"discovery endpoints must be alive: {s} -> {d}")
    if backend == "link_state":
        return DiscoveryOutcome(link_state_route(g, s, d), 0, backend)
    if backend == "flood":
        route, msgs = flood_route(g, s, d)
        return DiscoveryOutcome(route, msgs, backend)
    raise ValueError(f"unknown discovery backend {backend!r} (choose from {', '.join(BACKENDS)})")
