import re

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)\w*", report.nodeid)
    if not m:
        return
    n = int(m.group(1))
    entry = _ACCEPTANCE.setdefault(n, {"outcome": "PASS", "detail": ""})
    if report.failed:
        entry["outcome"] = "FAIL"
    elif report.skipped and report.when != "teardown":
        entry["outcome"] = "SKIP"
    for key, value in report.user_properties:
        if key == "detail":
            entry["detail"] = value


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        e = _ACCEPTANCE[n]
        line = f"criterion {n:2d}: {e['outcome']}"
        if e["detail"]:
            line += f"  ({e['detail']})"
        terminalreporter.write_line(line)
