import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def cache_dir(tmp_path, monkeypatch):
    d = tmp_path / "cache"
    monkeypatch.setenv("WP_CACHE_DIR", str(d))
    return d


# acceptance criteria report ----------------------------------------------------

_CRITERIA: dict[int, list[str]] = {}


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or (call.when != "call" and call.excinfo is None):
        return
    if call.excinfo is None:
        outcome = "pass"
    elif call.when == "call" and item.get_closest_marker("xfail"):
        outcome = "unattainable"
    else:
        outcome = "fail"
    _CRITERIA.setdefault(mark.args[0], []).append(outcome)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        outs = _CRITERIA[n]
        if all(o == "pass" for o in outs):
            line = "PASS"
        elif "fail" in outs:
            line = "FAIL"
        else:
            line = "FAIL (unattainable sub-case, see README)"
        terminalreporter.write_line(f"criterion {n}: {line}  ({outs.count('pass')}/{len(outs)} checks)")
