"""Collects one verdict line per acceptance criterion and prints them at the end."""

ACCEPTANCE: dict = {}


def record(number: int, title: str, ok: bool, seconds: float, limit: float, note: str = ""):
    ACCEPTANCE[number] = (title, ok, seconds, limit, note)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        title, ok, sec, limit, note = ACCEPTANCE[k]
        verdict = "PASS" if ok else "FAIL"
        line = f"[{verdict}] {k:2d}. {title}  ({sec:.1f}s, limit {limit:g}s)"
        tr.write_line(line + (f"  {note}" if note else ""))
