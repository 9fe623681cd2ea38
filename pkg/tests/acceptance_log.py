"""Collects one PASS/FAIL line per acceptance criterion."""

LINES: list[str] = []


def record(number: int, ok: bool, detail: str) -> str:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    LINES.append(line)
    print(line)
    return line
