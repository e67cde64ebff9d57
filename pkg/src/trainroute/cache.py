"""Per-node training tables: one single-bit edge mask per destination."""
from __future__ import annotations

import enum

from .graph import Graph, OrdinalError


class MaskError(ValueError):
    pass


class UntrainedMask(MaskError):
    pass


class CorruptMask(MaskError):
    pass


class Miss(enum.Enum):
    """Why a lookup produced no next hop."""

    UNTRAINED = "untrained"
    STALE = "stale"

    def __str__(self) -> str:
        return self.value


def encode_edge(k: int) -> int:
    """Mask caching edge ordinal ``k``: bit ``k - 1`` set, so the second edge is 0b10."""
    if k < 1:
        raise ValueError(f"edge ordinal must be >= 1, got {k}")
    return 1 << (k - 1)


def decode_ordinal(mask: int) -> int:
    """Inverse of :func:`encode_edge` (floor log2 of the mask, plus one)."""
    if mask == 0:
        raise UntrainedMask("mask is zero (untrained entry)")
    if mask < 0 or mask.bit_count() != 1:
        raise CorruptMask(f"mask {mask:#b} does not have exactly one bit set")
    return mask.bit_length()


def mask_width(degree: int) -> int:
    """Bits needed to hold any ordinal up to ``degree`` (at least one)."""
    return max(degree, 1)


class RouteTable:
    """Training array owned by one node, indexed by destination id.

    Index 0 is unused so ``entries[d]`` is the mask for destination ``d``.
    ``traffic[d]`` counts packets this node sent toward ``d``.
    """

    def __init__(self, owner: int, node_count: int) -> None:
        self.owner = owner
        self.entries: list[int] = [0] * (node_count + 1)
        self.traffic: list[int] = [0] * (node_count + 1)

    def grow(self, node_count: int) -> None:
        extra = node_count + 1 - len(self.entries)
        if extra > 0:
            self.entries.extend([0] * extra)
            self.traffic.extend([0] * extra)

    def set_entry(self, dest: int, k: int) -> None:
        if dest == self.owner:
            raise ValueError(f"node {self.owner} cannot hold an entry for itself")
        self.entries[dest] = encode_edge(k)

    def ordinal(self, dest: int) -> int | None:
        mask = self.entries[dest]
        return decode_ordinal(mask) if mask else None

    def get_next_hop(self, graph: Graph, dest: int) -> int | Miss:
        mask = self.entries[dest]
        if not mask:
            return Miss.UNTRAINED
        if mask & (mask - 1):
            decode_ordinal(mask)  # raises CorruptMask
        try:
            return graph.index_vertex(self.owner, mask.bit_length())
        except OrdinalError:
            # ordinal beyond the current degree: the topology changed under it
            return Miss.STALE

    def clear(self, dest: int | None = None) -> int:
        """Zero one entry, or the whole table; returns how many were nonzero."""
        if dest is not None:
            cleared = int(self.entries[dest] != 0)
            self.entries[dest] = 0
            return cleared
        cleared = sum(1 for m in self.entries if m)
        self.entries = [0] * len(self.entries)
        return cleared

    def invalidate_for_departure(self, graph: Graph, dead: int) -> int:
        # Every ordinal above the departed column shifts down by one, so any
        # mask at a former neighbour may now name the wrong edge.
        if self.owner in graph.former_neighbors(dead):
            return self.clear()
        return 0

    def byte_size(self, graph: Graph) -> int:
        degree = graph.degree(self.owner) if graph.is_alive(self.owner) else 0
        return graph.node_count * -(-mask_width(degree) // 8)

    def trained(self) -> list[tuple[int, int]]:
        """``(dest, ordinal)`` for every nonzero entry, by destination."""
        return [(d, decode_ordinal(m)) for d, m in enumerate(self.entries) if m]

    def __repr__(self) -> str:
        return f"RouteTable(owner={self.owner}, trained={self.trained()})"
