import csv
import json

import pytest

from trainroute.cli import SUMMARY_COLUMNS, main, oracle_mismatches
from trainroute.scenario_io import parse_scenario
from trainroute.simulator import generate_random_scenario, run_scenario

HEADER = "scenario,backend,transfers,deliveries,cache_hits,discoveries,control_messages,data_hops_total,table_bytes"


def read_rows(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_header_is_pinned():
    assert ",".join(SUMMARY_COLUMNS) == HEADER


def test_run_desk(tmp_path, scenario_dir):
    out = tmp_path / "desk.csv"
    assert main(["run", str(scenario_dir / "desk.txt"), "--out", str(out)]) == 0
    text = out.read_text()
    assert text.splitlines()[0] == HEADER
    (row,) = read_rows(out)
    assert row["discoveries"] == "1" and row["cache_hits"] == "2" and row["backend"] == "link_state"
    log = [json.loads(line) for line in out.with_suffix(".jsonl").read_text().splitlines()]
    assert log[0]["event"] == "header"
    transfers = [r for r in log if r["event"] == "transfer"]
    assert [r["path"] for r in transfers] == [[1, 4, 2], [1, 4, 2], [4, 2]]
    assert log[-1] == {"event": "tables", "entries": [[1, 2, 2], [4, 2, 2]], "table_bytes": 25}


def test_run_to_stdout(capsys, scenario_dir):
    assert main(["run", str(scenario_dir / "desk.txt"), "--backend", "flood"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines == [HEADER, "desk,flood,3,3,2,1,8,5,25"]


def test_malformed_edge(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("[graph]\nnodes = 3\nedges = 1-\n")
    out = tmp_path / "out.csv"
    assert main(["run", str(bad), "--out", str(out)]) != 0
    assert "line 3" in capsys.readouterr().err
    assert not out.exists()


def test_invalid_scenario_writes_nothing(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("[graph]\nnodes = 3\nedges = 1-2\n[events]\ntransfer 1 7\n")
    out = tmp_path / "out.csv"
    assert main(["run", str(bad), "--out", str(out)]) == 2
    assert "node 7" in capsys.readouterr().err
    assert not out.exists()


def test_strict_flag(tmp_path):
    f = tmp_path / "s.txt"
    f.write_text("[graph]\nnodes = 2\nedges = 1-2\ncolour = red\n")
    assert main(["run", str(f)]) == 0
    assert main(["run", str(f), "--strict"]) == 2


def test_seed_override_changes_workload_only(tmp_path):
    f = tmp_path / "w.txt"
    f.write_text("[graph]\nnodes = 12\nedge_prob = 0.4\nseed = 1\n[workload]\ntransfers = 30\n"
                 "[events]\ntransfer 1 2\n")
    logs = []
    for seed in ("1", "2"):
        out = tmp_path / f"o{seed}.csv"
        assert main(["run", str(f), "--seed", seed, "--out", str(out)]) == 0
        logs.append([json.loads(x) for x in out.with_suffix(".jsonl").read_text().splitlines()])
    pairs = [[(r["source"], r["dest"]) for r in log if r["event"] == "transfer"] for log in logs]
    assert pairs[0][0] == pairs[1][0] == (1, 2)
    assert pairs[0][1:] != pairs[1][1:]


def test_generate_then_run(tmp_path):
    scn = tmp_path / "g.txt"
    args = ["generate", "14", "--edge-prob", "0.3", "--transfers", "40", "--churn", "2", "--seed", "5"]
    assert main(args + ["--out", str(scn)]) == 0
    again = tmp_path / "g2.txt"
    assert main(args + ["--out", str(again)]) == 0
    assert scn.read_bytes() == again.read_bytes()
    assert parse_scenario(scn.read_text(), strict=True) == generate_random_scenario(14, 0.3, 40, churn=2, seed=5)
    assert main(["run", str(scn), "--out", str(tmp_path / "r.csv")]) == 0


def test_generate_failure(capsys):
    assert main(["generate", "40", "--edge-prob", "0.001"]) == 2
    assert "higher edge probability" in capsys.readouterr().err


def test_compare(tmp_path, scenario_dir):
    out = tmp_path / "cmp.csv"
    assert main(["compare", str(scenario_dir / "desk.txt"), "--out", str(out)]) == 0
    rows = read_rows(out)
    assert [r["backend"] for r in rows] == ["link_state", "flood"]
    assert rows[0]["control_messages"] == "0" and rows[1]["control_messages"] == "8"
    assert rows[0]["data_hops_total"] == rows[1]["data_hops_total"]


@pytest.mark.parametrize("backend", ["link_state", "flood"])
def test_oracle_check_desk(backend, capsys, scenario_dir):
    assert main(["oracle-check", str(scenario_dir / "desk.txt"), "--backend", backend]) == 0
    assert "0 mismatches" in capsys.readouterr().out


def test_oracle_check_refuses_churn(capsys, scenario_dir):
    assert main(["oracle-check", str(scenario_dir / "churn.txt")]) == 2
    assert "static graph" in capsys.readouterr().err


def test_oracle_detects_corrupted_cache(scenario_dir):
    sc = parse_scenario((scenario_dir / "desk.txt").read_text())

    def corrupt(net, t, event):
        if t == 0:
            net.tables[1].set_entry(2, 1)  # point 1 -> 2 traffic at node 3

    res = run_scenario(sc, on_event=corrupt)
    bad = oracle_mismatches(res)
    assert len(bad) == 1
    assert bad[0]["path"] == [1, 3, 1, 4, 2] and bad[0]["shortest"] == 2
    assert oracle_mismatches(run_scenario(sc)) == []


def test_churn_fixture_runs(tmp_path, scenario_dir):
    out = tmp_path / "c.csv"
    assert main(["run", str(scenario_dir / "churn.txt"), "--out", str(out)]) == 0
    (row,) = read_rows(out)
    assert row["discoveries"] == "2" and row["deliveries"] == "4"
