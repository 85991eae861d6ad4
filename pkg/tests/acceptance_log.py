"""Shared record of acceptance outcomes, printed at the end of the pytest run."""

RESULTS = []  # (criterion, part, status, detail)


def record(criterion: int, part: str, ok: bool, detail: str = "", expected_fail: bool = False) -> None:
    status = "PASS" if ok else ("FAIL (expected)" if expected_fail else "FAIL")
    RESULTS.append((criterion, part, status, detail))
    print(f"criterion {criterion:>2} | {part}: {status}{'  ' + detail if detail else ''}")


def summary_lines() -> list:
    lines = []
    for n in range(1, 11):
        rows = [r for r in RESULTS if r[0] == n]
        if not rows:
            lines.append(f"criterion {n:>2}: NOT RUN")
            continue
        ok = all(r[2] == "PASS" for r in rows)
        head = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}"
        bad = [r[1] for r in rows if r[2] != "PASS"]
        if bad:
            head += "  (failing parts: " + "; ".join(bad) + ")"
        lines.append(head)
    return lines
