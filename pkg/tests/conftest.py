import io
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from flangsim.cli import run_cli  # noqa: E402

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"

_criteria: dict[int, dict] = {}


@pytest.fixture
def corpus_dir():
    return CORPUS


@pytest.fixture
def cli():
    """Run the CLI in-process; returns ``(code, stdout, stderr)``."""
    def invoke(argv, stdin_text=""):
        out, err = io.StringIO(), io.StringIO()
        code = run_cli(argv, io.StringIO(stdin_text), out, err)
        return code, out.getvalue(), err.getvalue()
    return invoke


def pytest_runtest_logreport(report):
    marker = report.__dict__.get("criterion")
    if marker is None:
        return
    number, title = marker
    entry = _criteria.setdefault(number, {"title": title, "ok": True, "ran": False})
    if report.when == "call" or report.outcome != "passed":
        entry["ran"] = True
    if report.outcome == "failed":
        entry["ok"] = False


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        report.__dict__["criterion"] = tuple(marker.args)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        status = "PASS" if entry["ok"] and entry["ran"] else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {status}  {entry['title']}")
