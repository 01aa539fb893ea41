import pytest

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    if report.when == "call" or (report.when == "setup" and not report.passed):
        passed = report.passed
        msg = ""
        if not passed and report.longrepr is not None:
            crash = getattr(report.longrepr, "reprcrash", None)
            msg = crash.message.splitlines()[0] if crash else str(report.longrepr).splitlines()[-1]
        _RESULTS[number] = (title, passed, msg)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        title, passed, msg = _RESULTS[number]
        line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {title}"
        if msg:
            line += f"  ({msg})"
        terminalreporter.write_line(line)
