import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_CRITERIA: dict[str, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    number, title = marker.args
    _CRITERIA[item.nodeid] = {
        "number": number,
        "title": title,
        "passed": call.excinfo is None,
        "seconds": call.duration,
    }


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for info in sorted(_CRITERIA.values(), key=lambda r: r["number"]):
        status = "PASS" if info["passed"] else "FAIL"
        terminalreporter.write_line(f"[{status}] #{info['number']:>2} {info['title']} ({info['seconds']:.2f} s)")
