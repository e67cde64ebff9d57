"""Command line entry point: ``trainroute run|generate|compare|oracle-check``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from collections import deque
from pathlib import Path

from .discovery import BACKENDS
from .scenario_io import ParseError, format_scenario, parse_scenario
from .simulator import (
    RunResult,
    Scenario,
    ScenarioError,
    compare_backends,
    generate_random_scenario,
    run_scenario,
)

SUMMARY_VERSION = 1
SUMMARY_COLUMNS = [
    "scenario",
    "backend",
    "transfers",
    "deliveries",
    "cache_hits",
    "discoveries",
    "control_messages",
    "data_hops_total",
    "table_bytes",
]

EXIT_OK, EXIT_MISMATCH, EXIT_INVALID = 0, 1, 2


def summary_row(result: RunResult) -> list:
    m = result.metrics
    return [
        result.scenario.name,
        result.backend,
        m.transfers,
        m.deliveries,
        m.cache_hits,
        m.discoveries,
        m.control_messages,
        m.data_hops_total,
        m.table_bytes,
    ]


def summary_csv(results: list[RunResult]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SUMMARY_COLUMNS)
    for r in results:
        writer.writerow(summary_row(r))
    return buf.getvalue()


def event_log(result: RunResult) -> str:
    """One JSON record per line: a header, every event, then the final tables."""
    net = result.network
    records = [{"event": "header", "summary_version": SUMMARY_VERSION,
                "scenario": result.scenario.name, "backend": result.backend}]
    records += result.log
    records.append({
        "event": "tables",
        "entries": [[v, d, k] for v, t in sorted(net.tables.items()) for d, k in t.trained()],
        "table_bytes": result.metrics.table_bytes,
    })
    return "".join(json.dumps(r, separators=(",", ":")) + "\n" for r in records)


def load_scenario(path: str, strict: bool = False) -> Scenario:
    return parse_scenario(Path(path).read_text(), strict=strict)


def _apply_overrides(sc: Scenario, args: argparse.Namespace) -> Scenario:
    if args.backend:
        sc.backend = args.backend
    if args.seed is not None:
        sc.seed = args.seed
    return sc


def _write_outputs(out: str | None, results: list[RunResult]) -> None:
    # everything is rendered before the first write so failures leave no partial files
    summary = summary_csv(results)
    if out is None:
        sys.stdout.write(summary)
        return
    logs = "".join(event_log(r) for r in results)
    out_path = Path(out)
    out_path.write_text(summary)
    out_path.with_suffix(".jsonl").write_text(logs)


def bfs_distance(result: RunResult, s: int, d: int) -> int | None:
    """Hop distance on the scenario's initial graph, computed from its edge list."""
    g = result.scenario.build_graph()
    adj: dict[int, list[int]] = {v: [] for v in range(1, g.node_count + 1)}
    for i, j in g.edges():
        adj[i].append(j)
        adj[j].append(i)
    dist = {s: 0}
    queue = deque([s])
    while queue:
        v = queue.popleft()
        for j in adj[v]:
            if j not in dist:
                dist[j] = dist[v] + 1
                queue.append(j)
    return dist.get(d)


def oracle_mismatches(result: RunResult) -> list[dict]:
    """Delivered transfers whose hop count exceeds the shortest-hop distance."""
    bad = []
    for rec in result.log:
        if rec["event"] != "transfer" or rec["outcome"] != "delivered":
            continue
        best = bfs_distance(result, rec["source"], rec["dest"])
        if best is None or rec["data_hops"] > best:
            bad.append({**rec, "shortest": best})
    return bad


def cmd_run(args: argparse.Namespace) -> int:
    sc = _apply_overrides(load_scenario(args.scenario, args.strict), args)
    _write_outputs(args.out, [run_scenario(sc)])
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    sc = _apply_overrides(load_scenario(args.scenario, args.strict), args)
    results = compare_backends(sc)
    _write_outputs(args.out, [results[b] for b in BACKENDS])
    return EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    sc = generate_random_scenario(
        args.nodes,
        args.edge_prob,
        args.transfers,
        churn=args.churn,
        seed=args.seed if args.seed is not None else 0,
        pairs=args.pairs,
        allow_partition=args.allow_partition,
        backend=args.backend or "link_state",
    )
    text = format_scenario(sc)
    if args.out is None:
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    return EXIT_OK


def cmd_oracle_check(args: argparse.Namespace) -> int:
    sc = _apply_overrides(load_scenario(args.scenario, args.strict), args)
    if sc.has_churn():
        print("oracle-check needs a static graph; this scenario has remove/add events",
              file=sys.stderr)
        return EXIT_INVALID
    result = run_scenario(sc)
    bad = oracle_mismatches(result)
    checked = sum(1 for r in result.log if r["event"] == "transfer" and r["outcome"] == "delivered")
    for rec in bad:
        print(f"MISMATCH t={rec['t']} {rec['source']}->{rec['dest']}: "
              f"{rec['data_hops']} hops, shortest {rec['shortest']} (path {rec['path']})")
    print(f"{result.backend}: {checked} delivered transfers checked, {len(bad)} mismatches")
    return EXIT_MISMATCH if bad else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trainroute", description="Training-based route caching simulator")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, scenario: bool = True) -> None:
        if scenario:
            p.add_argument("scenario", help="scenario file")
            p.add_argument("--strict", action="store_true", help="reject unknown sections and keys")
        p.add_argument("--backend", choices=BACKENDS)
        p.add_argument("--seed", type=int)
        p.add_argument("--out", help="output path (default: stdout)")

    common(sub.add_parser("run", help="run a scenario and write metrics"))
    common(sub.add_parser("compare", help="run a scenario under every backend"))
    common(sub.add_parser("oracle-check", help="check delivered hop counts against BFS"))
    gen = sub.add_parser("generate", help="write a random scenario file")
    common(gen, scenario=False)
    gen.add_argument("nodes", type=int)
    gen.add_argument("--edge-prob", type=float, default=0.3)
    gen.add_argument("--transfers", type=int, default=100)
    gen.add_argument("--churn", type=int, default=0)
    gen.add_argument("--pairs", type=int)
    gen.add_argument("--allow-partition", action="store_true",
                     help="let removals disconnect the graph")
    return parser


COMMANDS = {
    "run": cmd_run,
    "compare": cmd_compare,
    "generate": cmd_generate,
    "oracle-check": cmd_oracle_check,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"{getattr(args, 'scenario', '<input>')}: {exc}", file=sys.stderr)
    except ScenarioError as exc:
        for err in exc.errors:
            print(f"invalid scenario: {err}", file=sys.stderr)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
