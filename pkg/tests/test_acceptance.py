"""One check per acceptance criterion, each printing a PASS/FAIL line.

Run under pytest for the summary section, or directly with
``python tests/test_acceptance.py`` for the plain report.
"""

import pytest

from tilingspectra import verify

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script from elsewhere
    ACCEPTANCE_LINES = []

# multiplicities before jumps so the jump check reuses the cached brackets
CRITERIA = [
    verify.check_tile_counts,
    verify.check_closed_forms,
    verify.check_matrices,
    verify.check_rings,
    verify.check_multiplicities,
    verify.check_jumps,
    verify.check_oracle,
    verify.check_modes,
    verify.check_occurrences,
    verify.check_gaps,
]


@pytest.mark.slow
@pytest.mark.parametrize("check", CRITERIA, ids=lambda f: f.__name__.removeprefix("check_"))
def test_criterion(check):
    result = check()
    line = result.line()
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert result.passed, line


if __name__ == "__main__":
    failed = 0
    for check in CRITERIA:
        result = check()
        print(result.line(), flush=True)
        failed += not result.passed
    raise SystemExit(1 if failed else 0)
