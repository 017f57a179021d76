from hypothesis import settings

settings.register_profile("qslocc4", max_examples=25, deadline=None)
settings.load_profile("qslocc4")

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    num = int(report.nodeid.rsplit("_", 1)[-1])
    if report.when == "call" or report.failed:
        if report.failed or num not in _ACCEPTANCE:
            _ACCEPTANCE[num] = "FAIL" if report.failed else "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"criterion {num:2d}: {_ACCEPTANCE[num]}")
