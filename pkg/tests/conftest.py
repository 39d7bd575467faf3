import pytest

# acceptance checks register here; printed once at the end of the run
ACCEPTANCE: dict[int, list[tuple[str, bool, str]]] = {}


@pytest.fixture
def criterion():
    def record(number: int, name: str, ok: bool, detail: str = ""):
        ACCEPTANCE.setdefault(number, []).append((name, bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        checks = ACCEPTANCE[number]
        failed = [c for c in checks if not c[1]]
        status = "PASS" if not failed else "FAIL"
        names = ", ".join(c[0] for c in checks)
        tr.write_line(f"#{number} {status}  ({len(checks) - len(failed)}/{len(checks)} checks: {names})")
        for name, _, detail in failed:
            tr.write_line(f"     failed {name}: {detail}")
