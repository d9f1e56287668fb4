import numpy as np
import pytest

from divlab.states import random_density

_CRITERIA = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or rep.when != "call" and not rep.failed:
        return
    key = mark.kwargs["criterion"]
    title, ok = _CRITERIA.get(key, (mark.kwargs.get("title", ""), True))
    failed_cases = getattr(item.config, "_acceptance_failures", {})
    item.config._acceptance_failures = failed_cases
    if rep.failed:
        failed_cases.setdefault(key, []).append(item.name)
    _CRITERIA[key] = (title, ok and not rep.failed)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    failures = getattr(terminalreporter.config, "_acceptance_failures", {})
    terminalreporter.section("acceptance criteria")
    for key in sorted(_CRITERIA):
        title, ok = _CRITERIA[key]
        line = f"criterion {key:>2}: {'PASS' if ok else 'FAIL'}  {title}"
        if not ok:
            line += f"  (failing: {', '.join(failures.get(key, []))})"
        terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def qubit_pair(rng):
    return random_density(2, rng), random_density(2, rng)
