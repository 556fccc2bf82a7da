import pytest

RESULTS = {}


def record(criterion, ok, detail=""):
    RESULTS[criterion] = (ok, detail)
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(RESULTS, key=lambda k: int(k)):
        ok, detail = RESULTS[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())


@pytest.fixture
def criterion(request):
    """Record the verdict of one acceptance criterion, failing if any check inside failed."""
    state = {"parts": [], "ok": True}

    def check(ok, detail):
        state["ok"] &= bool(ok)
        state["parts"].append(("" if ok else "[red] ") + detail)
        return ok

    yield check
    key = request.node.get_closest_marker("criterion").args[0]
    record(key, state["ok"], "; ".join(state["parts"]))
