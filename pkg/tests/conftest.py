import pytest

# criterion number -> (passed, detail); filled in by test_acceptance.py
ACCEPTANCE = {}


def record(n, passed, detail=""):
    ACCEPTANCE[n] = (bool(passed), detail)
    line = f"CRITERION {n:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
    print(line)
    return line


@pytest.fixture
def record_criterion():
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"CRITERION {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
