"""Shared hooks: acceptance tests report one verdict line per criterion."""

CRITERIA: dict = {}


def record(number: int, ok: bool, detail: str) -> None:
    CRITERIA.setdefault(number, []).append((ok, detail))
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        parts = CRITERIA[number]
        ok = all(p for p, _ in parts)
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  "
                                    + "; ".join(d for _, d in parts))
