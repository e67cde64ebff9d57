import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from trainroute import desk_graph  # noqa: E402

REPO = Path(__file__).resolve().parent.parent


@pytest.fixture
def desk():
    return desk_graph()


@pytest.fixture
def scenario_dir():
    return REPO / "scenarios"


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        title, ok, detail = RESULTS[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {title} {detail}")
