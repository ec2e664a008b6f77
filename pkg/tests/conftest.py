import numpy as np
import pytest

from ldbp.volume import VideoVolume

# number -> (title, outcomes, measured notes)
_CRITERIA: dict[int, tuple[str, list[str], list[str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = getattr(report, "_criterion", None)
    if marker is None:
        return
    number, title = marker
    entry = _CRITERIA.setdefault(number, (title, [], []))
    entry[1].append(report.outcome)
    entry[2].extend(v for k, v in report.user_properties if k == "measured")
    if report.outcome == "skipped" and isinstance(report.longrepr, tuple):
        entry[2].append(report.longrepr[2].removeprefix("Skipped: "))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is not None:
        report._criterion = (m.args[0], m.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, outcomes, notes = _CRITERIA[number]
        if any(o == "failed" for o in outcomes):
            status = "FAIL"
        elif any(o == "passed" for o in outcomes):
            status = "PASS"
        else:
            status = "SKIP"
        line = f"[{status}] criterion {number:2d}: {title}"
        if notes:
            line += " (" + "; ".join(notes) + ")"
        terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def worked_volume():
    """The three gray patches of the worked VLDBP(1,4,1) example as a 3x3x3 volume."""
    return VideoVolume(np.array([
        [[65, 154, 34], [187, 131, 131], [78, 56, 243]],
        [[45, 86, 21], [96, 89, 87], [176, 85, 241]],
        [[32, 189, 245], [45, 230, 230], [252, 9, 42]],
    ]))
