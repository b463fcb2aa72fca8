import re

_results = {}


def pytest_collection_modifyitems(items):
    for item in items:
        if "test_criterion_" in item.nodeid:
            title = (item.function.__doc__ or "").strip().splitlines()[0]
            item.user_properties.append(("title", title))


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)", report.nodeid)
    if not m:
        return
    if report.when == "call" or report.outcome != "passed":
        title = dict(report.user_properties).get("title", "")
        prev = _results.get(int(m.group(1)))
        if prev is None or prev[0] == "passed":
            _results[int(m.group(1))] = (report.outcome, title)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_results):
        outcome, title = _results[n]
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status}  {title}")
