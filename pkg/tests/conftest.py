import numpy as np
import pytest

from qtdrazin import config


@pytest.fixture(autouse=True)
def _cross_checks_on():
    # Every spectral call in the suite also runs the independent route.
    with config.paranoid(True):
        yield


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_acceptance: dict[int, tuple[bool, str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or rep.when not in ("setup", "call"):
        return
    if rep.when == "setup" and rep.passed:
        return
    detail = "; ".join(str(v) for k, v in item.user_properties if k == "detail")
    _acceptance[marker.args[0]] = (rep.passed, item.name, detail)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_acceptance):
        passed, name, detail = _acceptance[number]
        status = "PASS" if passed else "FAIL"
        line = f"criterion {number}: {status}  {name}"
        terminalreporter.write_line(f"{line}  ({detail})" if detail else line)
