"""One test per acceptance criterion; each prints a PASS/FAIL line."""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from acceptance import CRITERIA, run  # noqa: E402

LINES: list[str] = []


@pytest.mark.parametrize("k", sorted(CRITERIA), ids=lambda k: f"criterion_{k}")
def test_criterion(k):
    ok, line = run(k)
    LINES.append(line)
    print(line)
    assert ok, line


if __name__ == "__main__":
    results = [run(k) for k in sorted(CRITERIA)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
