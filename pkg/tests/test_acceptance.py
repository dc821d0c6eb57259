"""The twelve acceptance criteria at their stated tolerances.

Each test prints one PASS/FAIL line (collected into the terminal summary).
Run directly with ``python tests/test_acceptance.py`` for the lines alone.
"""

import pytest

from fracgreen.verify import CHECKS, NAMES, run_check

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # executed as a script
    ACCEPTANCE_LINES = []


@pytest.mark.parametrize("cid", sorted(CHECKS), ids=[NAMES[c] for c in sorted(CHECKS)])
def test_criterion(cid):
    res = run_check(cid)
    line = res.line()
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert res.passed, "; ".join([line] + res.notes)


if __name__ == "__main__":
    import sys

    failed = 0
    for cid in sorted(CHECKS):
        res = run_check(cid)
        print(res.line(), flush=True)
        failed += not res.passed
    sys.exit(1 if failed else 0)
