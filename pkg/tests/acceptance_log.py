"""Collects one status line per acceptance criterion for the terminal summary."""
LINES: list[str] = []


def record(criterion: str, passed: bool, detail: str) -> str:
    line = f"criterion {criterion}: {'PASS' if passed else 'FAIL'} ({detail})"
    LINES.append(line)
    print(line)
    return line
