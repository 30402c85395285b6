import contextlib

import pytest

from bddlat import _kernels

BACKENDS = sorted(_kernels.backends())


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run the test once per available kernel backend."""
    mod = _kernels.backends()[request.param]
    for name in ("theta_sum", "golden_min", "fp_enumerate"):
        monkeypatch.setattr(_kernels, name, getattr(mod, name))
    return request.param


@contextlib.contextmanager
def kernel_backend(name):
    """Temporarily route kernel calls to one backend (safe inside hypothesis tests)."""
    mod = _kernels.backends()[name]
    names = ("theta_sum", "golden_min", "fp_enumerate")
    saved = {n: getattr(_kernels, n) for n in names}
    try:
        for n in names:
            setattr(_kernels, n, getattr(mod, n))
        yield
    finally:
        for n, f in saved.items():
            setattr(_kernels, n, f)


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion(request):
    """Record a one-line verdict for an acceptance criterion and echo it."""

    def record(number, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {detail}"
        ACCEPTANCE_LINES.append(line)
        capman = request.config.pluginmanager.getplugin("capturemanager")
        with capman.global_and_fixture_disabled():
            print("\n" + line, flush=True)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
