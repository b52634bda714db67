import pytest

_AC_RESULTS = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    ac = item.get_closest_marker("criterion")
    if ac is None:
        return
    key = ac.args[0]
    prev = _AC_RESULTS.get(key)
    failed = rep.failed or (prev is not None and prev[0] == "FAIL")
    if rep.when == "call" or rep.failed:
        detail = "; ".join(f"{k}={v}" for k, v in item.user_properties)
        _AC_RESULTS[key] = ("FAIL" if failed else "PASS", ac.args[1], detail)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(id, title): exit criterion tracked in the summary")


def pytest_terminal_summary(terminalreporter):
    if not _AC_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_AC_RESULTS, key=lambda k: int(k[2:])):
        status, title, detail = _AC_RESULTS[key]
        line = f"{key} {status}: {title}"
        if detail:
            line += f" [{detail}]"
        terminalreporter.write_line(line)
