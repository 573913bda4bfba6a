"""Shared record of acceptance outcomes, filled by test_acceptance and printed by conftest."""

RESULTS: dict[int, str] = {}


def record(number: int, title: str, passed: bool, detail: str = "") -> None:
    line = f"criterion {number:2d} {'PASS' if passed else 'FAIL'}  {title}" + (f"  ({detail})" if detail else "")
    RESULTS[number] = line
    print(line)
