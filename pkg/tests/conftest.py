import pytest

ACCEPTANCE: dict[str, tuple[bool, str]] = {}
CRITERIA = [f"AC{i}" for i in range(1, 12)]


def record_acceptance(ac: str, ok: bool, detail: str) -> None:
    ACCEPTANCE[ac] = (bool(ok), detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for ac in CRITERIA:
        if ac in ACCEPTANCE:
            ok, detail = ACCEPTANCE[ac]
            terminalreporter.write_line(f"{ac:5} {'PASS' if ok else 'FAIL'}  {detail}")
        else:
            terminalreporter.write_line(f"{ac:5} FAIL  not evaluated (error or not selected)")


@pytest.fixture(scope="session")
def lm3():
    from permucat import toric
    return toric.lm_fan(3)
