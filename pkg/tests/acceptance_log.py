"""Collects the one-line verdict of each acceptance criterion for the terminal summary."""

LINES: dict[int, str] = {}


def record(number: int, ok: bool, detail: str) -> bool:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})"
    LINES[number] = line
    print(line)
    return ok
