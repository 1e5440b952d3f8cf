import pytest

_results: dict[str, str] = {}
_notes: list[str] = []


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "acceptance(name): labels a test as one acceptance criterion"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    name = marker.args[0]
    if rep.when == "call":
        _results[name] = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
    elif rep.when == "setup" and (rep.skipped or rep.failed):
        _results[name] = "SKIP" if rep.skipped else "FAIL"


@pytest.fixture
def acceptance_note():
    """Lets a criterion report numbers that are informative but not gated."""

    def note(msg: str) -> None:
        _notes.append(msg)

    return note


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for name, status in _results.items():
        terminalreporter.write_line(f"{status}: {name}")
    for msg in _notes:
        terminalreporter.write_line(f"note: {msg}")
