import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

FACTORIAL = """(x[0] := 5;
 (x[1] := 1;
  (while (0 < x[0]) do
    (x[1] := (x[1] * x[0]);
     x[0] := (x[0] - 1)))))"""

COUNTER = """(x[0] := readbit;
 (while (readbit = 1) do
   x[0] := (x[0] + 1)))"""


# one line per acceptance criterion, filled in by test_acceptance
CRITERIA: list = []


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(CRITERIA, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
