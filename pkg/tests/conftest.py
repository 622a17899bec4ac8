import pytest

CRITERIA: dict[int, tuple[str, bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, label): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker and (rep.when == "call" or rep.failed):
        num, label = marker.args
        ok = rep.passed and CRITERIA.get(num, (label, True))[1]
        CRITERIA[num] = (label, ok)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(CRITERIA):
        label, ok = CRITERIA[num]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} [{num}] {label}")
