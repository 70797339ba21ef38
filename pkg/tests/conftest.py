import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

# filled by test_acceptance.py: criterion number -> (passed, detail)
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def sgrid():
    from positivity_kit.lterm import s_grid
    return s_grid()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
