import pytest


@pytest.fixture
def criterion(request):
    """Report one acceptance criterion: print a PASS/FAIL line, then assert.

    The line is written with capture suspended so it lands in the terminal
    next to the test's own PASSED/FAILED marker even under default capture.
    """
    capman = request.config.pluginmanager.getplugin("capturemanager")

    def report(name, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
        if capman is not None:
            with capman.global_and_fixture_disabled():
                print(line, flush=True)
        else:
            print(line, flush=True)
        assert ok, f"{name}: {detail}"

    return report
