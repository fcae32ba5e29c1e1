import pytest

from roaming import GameParams

_ACCEPTANCE = []


@pytest.fixture
def paper_params():
    """delta = 1, phi = 0.9, r = 0.8: the best-response figure setting."""
    return GameParams(delta=1.0, r=0.8, b1=10.0, b2=1.0)


@pytest.fixture
def criterion(request):
    """Record a one-line verdict for an acceptance criterion; ``check`` asserts."""

    class Recorder:
        def __init__(self):
            self.details = []

        def check(self, ok, detail):
            self.details.append(("ok" if ok else "FAILED") + ": " + detail)
            assert ok, detail

    rec = Recorder()
    yield rec
    rep = getattr(request.node, "rep_call", None)
    passed = rep is not None and rep.passed
    doc = (request.node.function.__doc__ or request.node.name).strip().splitlines()[0]
    _ACCEPTANCE.append((passed, doc, rec.details))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for passed, doc, details in _ACCEPTANCE:
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {doc}")
        for d in details:
            terminalreporter.write_line(f"         {d}")
