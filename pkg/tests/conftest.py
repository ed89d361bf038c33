import pytest
from hypothesis import settings

from vortexforge.glprofile import solve_profile

settings.register_profile("repro", derandomize=True, deadline=None)
settings.load_profile("repro")

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


@pytest.fixture(scope="session")
def profile():
    return solve_profile(1, 100.0, 1e-10, 0.01)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
