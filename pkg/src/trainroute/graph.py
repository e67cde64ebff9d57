"""Adjacency-matrix topology over numbered nodes.

Node ids run from 1 to ``node_count``. Edge ordinals at a node are the
1-based ranks of its alive neighbours taken in increasing id order, which
is exactly the order of the set cells in that node's adjacency row.

Each matrix row is held as a Python int: bit ``j - 1`` of row ``i`` is the
cell for column ``j``.
"""
from __future__ import annotations

from collections.abc import Iterable, Mapping


class GraphError(ValueError):
    """Raised for malformed topology input or invalid node/edge references."""


class NotAdjacentError(GraphError):
    def __init__(self, i: int, j: int) -> None:
        super().__init__(f"nodes {i} and {j} are not adjacent")
        self.i, self.j = i, j


class OrdinalError(GraphError):
    def __init__(self, i: int, k: int, degree: int) -> None:
        super().__init__(f"node {i} has no edge ordinal {k} (degree {degree})")
        self.i, self.k, self.degree = i, k, degree


def _key(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


class Graph:
    """Undirected graph stored as a symmetric adjacency matrix of bit rows.

    Departed nodes keep their id (flagged dead, row and column cleared) so
    ids stay stable for the whole run.
    """

    def __init__(self, node_count: int) -> None:
        if node_count < 1:
            raise GraphError(f"node_count must be positive, got {node_count}")
        self._adj: list[int] = [0] * node_count
        self._alive: list[bool] = [True] * node_count
        self._weights: dict[tuple[int, int], float] = {}
        self._former: dict[int, list[int]] = {}

    @property
    def node_count(self) -> int:
        return len(self._alive)

    def _check_id(self, v: int) -> None:
        if not (isinstance(v, int) and 0 < v <= len(self._alive)):
            raise GraphError(f"unknown node {v!r} (ids are 1..{self.node_count})")

    def _check_alive(self, v: int) -> None:
        try:
            if v > 0 and self._alive[v - 1]:
                return
        except (IndexError, TypeError):
            pass
        self._check_id(v)
        raise GraphError(f"node {v} is not alive")

    def is_alive(self, v: int) -> bool:
        try:
            if v > 0:
                return self._alive[v - 1]
        except (IndexError, TypeError):
            pass
        self._check_id(v)
        return False

    def alive_nodes(self) -> list[int]:
        return [v for v in range(1, self.node_count + 1) if self._alive[v - 1]]

    def _link(self, i: int, j: int, weight: float) -> None:
        if weight <= 0:
            raise GraphError(f"edge ({i}, {j}) has non-positive weight {weight}")
        self._adj[i - 1] |= 1 << (j - 1)
        self._adj[j - 1] |= 1 << (i - 1)
        self._weights[_key(i, j)] = float(weight)

    def has_edge(self, i: int, j: int) -> bool:
        self._check_id(i)
        self._check_id(j)
        return bool(self._adj[i - 1] >> (j - 1) & 1)

    def weight(self, i: int, j: int) -> float:
        if not self.has_edge(i, j):
            raise NotAdjacentError(i, j)
        return self._weights[_key(i, j)]

    def edges(self) -> list[tuple[int, int]]:
        """Alive edges as sorted ``(i, j)`` pairs with ``i < j``."""
        return sorted(self._weights)

    def weights(self) -> dict[tuple[int, int], float]:
        return dict(sorted(self._weights.items()))

    def row(self, i: int) -> list[bool]:
        """Row ``i`` of the adjacency matrix as booleans for columns 1..n."""
        self._check_id(i)
        bits = self._adj[i - 1]
        return [bool(bits >> c & 1) for c in range(self.node_count)]

    def neighbors(self, i: int) -> list[int]:
        self._check_alive(i)
        bits, out = self._adj[i - 1], []
        while bits:
            low = bits & -bits
            out.append(low.bit_length())
            bits ^= low
        return out

    def weighted_neighbors(self, i: int) -> list[tuple[int, float]]:
        w = self._weights
        return [(j, w[(i, j) if i < j else (j, i)]) for j in self.neighbors(i)]

    def degree(self, i: int) -> int:
        self._check_alive(i)
        return self._adj[i - 1].bit_count()

    def max_degree(self) -> int:
        return max((row.bit_count() for row in self._adj), default=0)

    def index_edge(self, i: int, j: int) -> int:
        """Ordinal of edge (i, j) at node i: set cells in row i up to column j."""
        self._check_alive(i)
        self._check_alive(j)
        row = self._adj[i - 1]
        if not row >> (j - 1) & 1:
            raise NotAdjacentError(i, j)
        return (row & ((1 << j) - 1)).bit_count()

    def index_vertex(self, i: int, k: int) -> int:
        """Neighbour reached over edge ordinal ``k`` of node ``i`` (the k-th set cell of row i)."""
        self._check_alive(i)
        row = self._adj[i - 1]
        if not 0 < k <= row.bit_count():
            raise OrdinalError(i, k, row.bit_count())
        for _ in range(k - 1):
            row &= row - 1
        return (row & -row).bit_length()

    def scan_row(self, i: int, k: int) -> tuple[int, int]:
        """Like :meth:`index_vertex` but also reports cells compared.

        A left-to-right scan stops on the column of the k-th set cell, so the
        comparison count equals that column number.
        """
        col = self.index_vertex(i, k)
        return col, col

    def remove_node(self, v: int) -> list[int]:
        """Mark ``v`` dead, clear its row and column, return its former neighbours."""
        self._check_alive(v)
        former = self.neighbors(v)
        for j in former:
            self._adj[j - 1] &= ~(1 << (v - 1))
            del self._weights[_key(v, j)]
        self._adj[v - 1] = 0
        self._alive[v - 1] = False
        self._former[v] = former
        return former

    def former_neighbors(self, v: int) -> list[int]:
        """Neighbours ``v`` had at the moment it departed (empty if still alive)."""
        self._check_id(v)
        return list(self._former.get(v, ()))

    def add_node(
        self,
        v: int,
        neighbors: Iterable[int],
        weights: Mapping[int, float] | None = None,
    ) -> list[int]:
        """Append a fresh node ``v`` (must be ``node_count + 1``) linked to ``neighbors``."""
        if v != self.node_count + 1:
            raise GraphError(
                f"new node must take the next unused id {self.node_count + 1}, got {v}"
            )
        nbrs = sorted(set(neighbors))
        for j in nbrs:
            self._check_alive(j)
        self._adj.append(0)
        self._alive.append(True)
        weights = weights or {}
        for j in nbrs:
            self._link(v, j, weights.get(j, 1.0))
        return nbrs

    def copy(self) -> Graph:
        g = Graph.__new__(Graph)
        g._adj = list(self._adj)
        g._alive = list(self._alive)
        g._weights = dict(self._weights)
        g._former = {v: list(n) for v, n in self._former.items()}
        return g

    def __repr__(self) -> str:
        return f"Graph(node_count={self.node_count}, edges={self.edges()})"


def build_graph(
    node_count: int,
    edges: Iterable[tuple[int, int]],
    weights: Mapping[tuple[int, int], float] | None = None,
) -> Graph:
    """Build a graph from unordered id pairs; missing weights default to 1."""
    g = Graph(node_count)
    seen: set[tuple[int, int]] = set()
    weights = {_key(*pair): w for pair, w in (weights or {}).items()}
    for pair in edges:
        i, j = pair
        for v in (i, j):
            if not isinstance(v, int) or not 1 <= v <= node_count:
                raise GraphError(f"edge {pair}: id {v!r} out of range 1..{node_count}")
        if i == j:
            raise GraphError(f"edge {pair}: self-loop")
        key = _key(i, j)
        if key in seen:
            raise GraphError(f"edge {pair}: duplicate")
        seen.add(key)
        g._link(i, j, weights.get(key, 1.0))
    return g


DESK_EDGES = [(1, 3), (1, 4), (2, 4), (3, 5), (4, 5)]


def desk_graph() -> Graph:
    """The 5-node worked-example graph: node 1's second edge leads to node 4."""
    return build_graph(5, DESK_EDGES)
