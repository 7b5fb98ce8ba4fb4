import numpy as np
import pytest


def pytest_addoption(parser):
    parser.addoption(
        "--slow", action="store_true", default=False,
        help="run the 4-qubit robustness LP tests (minutes)",
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--slow"):
        return
    skip = pytest.mark.skip(reason="needs --slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE_RESULTS: list[tuple[str, str]] = []


@pytest.fixture
def acceptance_log():
    def log(criterion: str, detail: str = ""):
        _ACCEPTANCE_RESULTS.append((criterion, detail))
    return log


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    reports = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            name = getattr(rep, "nodeid", "")
            if "test_acceptance" in name and "::test_criterion" in name:
                reports.append((name.split("::", 1)[1], outcome.upper()))
    if not reports:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in sorted(reports):
        terminalreporter.write_line(f"{outcome:6s} {name}")
