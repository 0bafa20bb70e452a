import pytest

# criterion number -> (title, outcomes of every test carrying that marker)
_RESULTS: dict[int, tuple[str, list[bool]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion checked by a test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        n, title = marker.args
        _RESULTS.setdefault(n, (title, []))[1].append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        title, outcomes = _RESULTS[n]
        verdict = "PASS" if all(outcomes) else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {verdict}  {title} ({sum(outcomes)}/{len(outcomes)} checks)")
