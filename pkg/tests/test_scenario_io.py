import logging

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trainroute.scenario_io import ParseError, format_scenario, parse_scenario
from trainroute.simulator import (
    AddNode,
    GraphGenerator,
    Remove,
    Scenario,
    Transfer,
    Workload,
    generate_random_scenario,
)


def test_parse_desk_file(scenario_dir):
    sc = parse_scenario((scenario_dir / "desk.txt").read_text(), strict=True)
    assert sc.node_count == 5
    assert sc.edges == [(1, 3), (1, 4), (2, 4), (3, 5), (4, 5)]
    assert sc.name == "desk" and sc.backend == "link_state" and sc.seed == 0
    assert sc.events == [Transfer(1, 2), Transfer(1, 2), Transfer(4, 2)]


def test_parse_all_features():
    text = """
    # comment
    [graph]
    nodes = 4
    edges = 1-2, 2-3:2.5
    edges = 3-4   # continued
    [run]
    backend = flood
    seed = 11
    [workload]
    transfers = 10
    pairs = 2
    [events]
    transfer 1 4
    remove 2
    add 5: 1 4
    """
    sc = parse_scenario(text, strict=True)
    assert sc.edges == [(1, 2), (2, 3), (3, 4)]
    assert sc.weights == {(2, 3): 2.5}
    assert sc.backend == "flood" and sc.seed == 11
    assert sc.workload == Workload(10, 2)
    assert sc.events == [Transfer(1, 4), Remove(2), AddNode(5, (1, 4))]


def test_parse_generator_block():
    sc = parse_scenario("[graph]\nnodes = 8\nedge_prob = 0.5\nseed = 3\n")
    assert sc.generator == GraphGenerator(8, 0.5, 3)
    assert sc.build_graph().node_count == 8


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("[graph]\nnodes = 3\nedges = 1-\n", 3, "malformed edge '1-'"),
        ("[graph]\nnodes = x\n", 2, "integer"),
        ("nodes = 3\n", 1, "before the first"),
        ("[graph]\nnodes = 3\n[events]\nteleport 1 2\n", 4, "unknown event"),
        ("[graph]\nnodes = 3\n[events]\ntransfer 1\n", 4, "transfer S D"),
        ("[graph]\nnodes = 3\n[events]\nadd 4 1 2\n", 4, "add V:"),
        ("[graph]\nnodes = 3\nnodes = 4\n", 3, "duplicate"),
        ("[graph]\nnodes 3\n", 2, "key = value"),
        ("[graph]\nnodes = 3\nedges = 1-2\nedge_prob = 0.3\n", 3, "not both"),
        ("[graph]\nnodes = 3\nseed = 2\n", 3, "generator"),
        ("[graph]\nnodes = 3\n[workload]\npairs = 2\n", 4, "transfers"),
    ],
)
def test_parse_errors_have_line_numbers(text, line, fragment):
    with pytest.raises(ParseError) as exc:
        parse_scenario(text)
    assert exc.value.line == line
    assert fragment in str(exc.value)
    assert str(exc.value).startswith(f"line {line}:")


def test_strict_mode_rejects_unknown(caplog):
    text = "[graph]\nnodes = 2\ncolour = red\n[extra]\nx = 1\n"
    with pytest.raises(ParseError, match="unknown key 'colour'"):
        parse_scenario(text, strict=True)
    with pytest.raises(ParseError, match=r"unknown section \[extra\]"):
        parse_scenario("[graph]\nnodes = 2\n[extra]\n", strict=True)
    with caplog.at_level(logging.WARNING):
        sc = parse_scenario(text)
    assert sc.node_count == 2
    assert "colour" in caplog.text and "extra" in caplog.text


def test_round_trip_generated():
    sc = generate_random_scenario(15, 0.3, 50, churn=3, seed=2)
    text = format_scenario(sc)
    again = parse_scenario(text, strict=True)
    assert again == sc
    assert format_scenario(again) == text


events = st.lists(st.one_of(
    st.builds(Transfer, st.integers(1, 30), st.integers(1, 30)),
    st.builds(Remove, st.integers(1, 30)),
    st.builds(AddNode, st.integers(1, 30), st.lists(st.integers(1, 30), max_size=4).map(tuple)),
), max_size=15)


@settings(max_examples=100)
@given(
    n=st.integers(2, 12),
    raw_edges=st.sets(st.tuples(st.integers(1, 12), st.integers(1, 12))),
    weights=st.lists(st.floats(0.1, 50, allow_nan=False), max_size=3),
    backend=st.sampled_from(["link_state", "flood"]),
    seed=st.integers(0, 2**31),
    workload=st.none() | st.builds(Workload, st.integers(0, 50), st.none() | st.integers(1, 9)),
    evs=events,
)
def test_parse_print_parse_fixed_point(n, raw_edges, weights, backend, seed, workload, evs):
    edges = sorted({(min(a, b), max(a, b)) for a, b in raw_edges if a != b and max(a, b) <= n})
    sc = Scenario(node_count=n, edges=edges, backend=backend, seed=seed,
                  weights={e: w for e, w in zip(edges, weights)}, workload=workload,
                  events=evs, name="prop")
    parsed = parse_scenario(format_scenario(sc), strict=True)
    assert parsed == sc
    assert parse_scenario(format_scenario(parsed), strict=True) == parsed
