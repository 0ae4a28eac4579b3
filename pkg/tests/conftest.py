import pytest

from qift.transform_spec import TransformSpec

CRITERIA = {}


@pytest.fixture
def integral():
    return TransformSpec.parse("integral")


@pytest.fixture
def qft():
    return TransformSpec.parse("qft")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    num = report.user_properties and dict(report.user_properties).get("criterion")
    if num:
        CRITERIA.setdefault(num, []).append(report.outcome == "passed")


def pytest_runtest_setup(item):
    mark = item.get_closest_marker("criterion")
    if mark:
        item.user_properties.append(("criterion", mark.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(CRITERIA):
        results = CRITERIA[num]
        status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"criterion {num:>2}: {status} ({sum(results)}/{len(results)} checks)")
