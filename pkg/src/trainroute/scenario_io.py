"""Plain-text scenario files.

Example::

    # desk fixture
    [graph]
    nodes = 5
    edges = 1-3 1-4 2-4 3-5 4-5

    [run]
    name = desk
    backend = link_state
    seed = 0

    [events]
    transfer 1 2
    remove 4
    add 6: 1 3

``[graph]`` takes either ``edges`` (repeatable; ``i-j`` or ``i-j:weight``)
or a generator block (``edge_prob`` and ``seed`` alongside ``nodes``).
An optional ``[workload]`` section (``transfers``, ``pairs``) appends seeded
random transfers after the explicit events.
"""
from __future__ import annotations

import logging
import re

from .simulator import AddNode, Event, GraphGenerator, Remove, Scenario, Transfer, Workload

log = logging.getLogger(__name__)

SECTION_KEYS = {
    "graph": {"nodes", "edges", "edge_prob", "seed"},
    "run": {"name", "backend", "seed"},
    "workload": {"transfers", "pairs"},
    "events": set(),
}

_EDGE = re.compile(r"^(\d+)-(\d+)(?::([0-9.eE+-]+))?$")


class ParseError(ValueError):
    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


def _int(value: str, line: int, what: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ParseError(line, f"{what} must be an integer, got {value!r}") from None


def _float(value: str, line: int, what: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ParseError(line, f"{what} must be a number, got {value!r}") from None


def _parse_event(text: str, line: int) -> Event:
    head, _, rest = text.partition(" ")
    if head == "transfer":
        parts = rest.split()
        if len(parts) != 2:
            raise ParseError(line, f"expected 'transfer S D', got {text!r}")
        return Transfer(_int(parts[0], line, "source"), _int(parts[1], line, "dest"))
    if head == "remove":
        parts = rest.split()
        if len(parts) != 1:
            raise ParseError(line, f"expected 'remove V', got {text!r}")
        return Remove(_int(parts[0], line, "node"))
    if head == "add":
        node, colon, nbrs = rest.partition(":")
        if not colon:
            raise ParseError(line, f"expected 'add V: N1 N2 ...', got {text!r}")
        return AddNode(
            _int(node.strip(), line, "node"),
            tuple(_int(v, line, "neighbour") for v in nbrs.split()),
        )
    raise ParseError(line, f"unknown event {head!r}")


def parse_scenario(text: str, strict: bool = False) -> Scenario:
    """Parse scenario text. Unknown sections/keys raise when ``strict``, else warn."""
    values: dict[str, dict[str, tuple[str, int]]] = {s: {} for s in SECTION_KEYS}
    edge_lines: list[tuple[str, int]] = []
    events: list[Event] = []
    section: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        if stripped.startswith("[") and stripped.endswith("]"):
            section = stripped[1:-1].strip()
            if section not in SECTION_KEYS:
                if strict:
                    raise ParseError(lineno, f"unknown section [{section}]")
                log.warning("line %d: ignoring unknown section [%s]", lineno, section)
            continue
        if section is None:
            raise ParseError(lineno, "content before the first [section]")
        if section not in SECTION_KEYS:
            continue
        if section == "events":
            events.append(_parse_event(stripped, lineno))
            continue
        key, eq, value = stripped.partition("=")
        key, value = key.strip(), value.strip()
        if not eq or not key:
            raise ParseError(lineno, f"expected 'key = value', got {stripped!r}")
        if key not in SECTION_KEYS[section]:
            if strict:
                raise ParseError(lineno, f"unknown key {key!r} in [{section}]")
            log.warning("line %d: ignoring unknown key %r in [%s]", lineno, key, section)
            continue
        if section == "graph" and key == "edges":
            edge_lines.append((value, lineno))
            continue
        if key in values[section]:
            raise ParseError(lineno, f"duplicate key {key!r} in [{section}]")
        values[section][key] = (value, lineno)

    graph, run, work = values["graph"], values["run"], values["workload"]
    if "nodes" not in graph:
        raise ParseError(0, "[graph] needs 'nodes'")
    nodes = _int(*graph["nodes"], "nodes")
    sc = Scenario(node_count=nodes, events=events)
    if "edge_prob" in graph:
        if edge_lines:
            raise ParseError(edge_lines[0][1], "give either 'edges' or a generator block, not both")
        gseed = _int(*graph["seed"], "seed") if "seed" in graph else 0
        sc.generator = GraphGenerator(nodes, _float(*graph["edge_prob"], "edge_prob"), gseed)
    elif "seed" in graph:
        raise ParseError(graph["seed"][1], "graph 'seed' only applies to a generator block")
    for value, lineno in edge_lines:
        for token in value.replace(",", " ").split():
            m = _EDGE.match(token)
            if not m:
                raise ParseError(lineno, f"malformed edge {token!r} (expected i-j or i-j:weight)")
            pair = (int(m[1]), int(m[2]))
            sc.edges.append(pair)
            if m[3] is not None:
                sc.weights[pair] = _float(m[3], lineno, "weight")
    if "name" in run:
        sc.name = run["name"][0]
    if "backend" in run:
        sc.backend = run["backend"][0]
    if "seed" in run:
        sc.seed = _int(*run["seed"], "seed")
    if work:
        if "transfers" not in work:
            raise ParseError(next(iter(work.values()))[1], "[workload] needs 'transfers'")
        pairs = _int(*work["pairs"], "pairs") if "pairs" in work else None
        sc.workload = Workload(_int(*work["transfers"], "transfers"), pairs)
    return sc


def _fmt_num(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def format_event(e: Event) -> str:
    if isinstance(e, Transfer):
        return f"transfer {e.source} {e.dest}"
    if isinstance(e, Remove):
        return f"remove {e.node}"
    return f"add {e.node}: " + " ".join(map(str, e.neighbors))


def format_scenario(sc: Scenario, edges_per_line: int = 10) -> str:
    out = ["[graph]", f"nodes = {sc.node_count}"]
    if sc.generator is not None:
        out += [f"edge_prob = {sc.generator.edge_prob!r}", f"seed = {sc.generator.seed}"]
    tokens = []
    for i, j in sc.edges:
        w = sc.weights.get((i, j))
        tokens.append(f"{i}-{j}" if w is None else f"{i}-{j}:{_fmt_num(w)}")
    for start in range(0, len(tokens), edges_per_line):
        out.append("edges = " + " ".join(tokens[start:start + edges_per_line]))
    out += ["", "[run]", f"name = {sc.name}", f"backend = {sc.backend}", f"seed = {sc.seed}"]
    if sc.workload is not None:
        out += ["", "[workload]", f"transfers = {sc.workload.transfers}"]
        if sc.workload.pairs is not None:
            out.append(f"pairs = {sc.workload.pairs}")
    out += ["", "[events]"]
    out += [format_event(e) for e in sc.events]
    return "\n".join(out) + "\n"
