import pytest

_acceptance_results = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(label): acceptance criterion, reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _acceptance_results.append((marker.args[0], report.outcome == "passed", report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, duration in _acceptance_results:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  ({duration:.2f} s)")
    passed = sum(ok for _, ok, _ in _acceptance_results)
    terminalreporter.write_line(f"{passed}/{len(_acceptance_results)} criteria passed")
