import pytest

_results = pytest.StashKey[dict]()


@pytest.fixture
def criterion(request):
    """Record ``(number, ok, detail)`` for the end-of-run acceptance summary."""
    store = request.config.stash.setdefault(_results, {})

    def record(number, ok, detail):
        store[number] = (ok, detail)
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    store = config.stash.get(_results, {})
    if not store:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(store):
        ok, detail = store[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
