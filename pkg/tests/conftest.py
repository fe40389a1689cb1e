import pytest


def pytest_configure(config):
    config._acceptance_results = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    num, title = marker.args
    entry = item.config._acceptance_results.setdefault(
        num, {"title": title, "outcomes": []}
    )
    # setup-phase skips count as SKIP; only call-phase outcomes otherwise
    if report.when == "call" or (report.when == "setup" and report.skipped):
        entry["outcomes"].append(report.outcome)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = getattr(config, "_acceptance_results", {})
    if not results:
        return
    terminalreporter.write_sep("-", "acceptance checklist")
    for num in sorted(results):
        entry = results[num]
        outcomes = entry["outcomes"]
        if any(o == "failed" for o in outcomes):
            status = "FAIL"
        elif all(o == "skipped" for o in outcomes):
            status = "SKIP"
        else:
            status = "PASS"
        terminalreporter.write_line(f"criterion {num:2d} {status}  {entry['title']}")
