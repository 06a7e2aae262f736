"""Built-in restriction documents used by the demo and the test suite."""

from __future__ import annotations

# Three-variable, one-lag scheme whose counting condition passes although the
# impact restriction is implied by the two A0 zeros: the textbook case where
# counting restrictions is not enough.
COUNTEREXAMPLE = """\
# n = 3, p = 1: two contemporaneous zeros plus one impact-response zero.
# Counts pass (2, 1, 0) but the IR0 cell carries no independent information.
n = 3
p = 1

block A0
x x x
0 x x
0 x x

block IR0
x 0 x
x x x
x x x
"""


def recursive_spec_text(n: int, p: int = 1) -> str:
    """Recursive (triangular) scheme on A0: zeros strictly below the diagonal."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rows = []
    for i in range(n):
        rows.append(" ".join("0" if i > j else "x" for j in range(n)))
    grid = "\n".join(rows)
    return (
        f"# recursive ordering on A0 for n = {n}\n"
        f"n = {n}\np = {p}\n\nblock A0\n{grid}\n"
    )
