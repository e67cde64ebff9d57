"""Training-based route caching for ad-hoc networks."""
from .cache import Miss, RouteTable, decode_ordinal, encode_edge
from .discovery import BACKENDS, DiscoveryOutcome, discover, flood_route, link_state_route
from .graph import Graph, GraphError, build_graph, desk_graph
from .simulator import (
    AddNode,
    Metrics,
    Remove,
    Scenario,
    ScenarioError,
    Transfer,
    compare_backends,
    generate_random_scenario,
    run_scenario,
)
from .training import DeliveryReport, Network

__all__ = [
    "BACKENDS", "AddNode", "DeliveryReport", "DiscoveryOutcome", "Graph", "GraphError",
    "Metrics", "Miss", "Network", "Remove", "RouteTable", "Scenario", "ScenarioError",
    "Transfer", "build_graph", "compare_backends", "decode_ordinal", "desk_graph",
    "discover", "encode_edge", "flood_route", "generate_random_scenario",
    "link_state_route", "run_scenario",
]
