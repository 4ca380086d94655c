"""Collects one PASS/FAIL line per acceptance criterion."""
import sys

LINES = []


def record(number, title, passed, detail):
    line = f"{'PASS' if passed else 'FAIL'}  criterion {number}: {title} | {detail}"
    LINES.append(line)
    print(line, file=sys.stderr)
    return passed
