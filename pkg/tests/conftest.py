from fractions import Fraction

import pytest

from madic import AlphaParam, BranchingSpec, build_greedy, build_random, build_uniform


@pytest.fixture
def sqrt2():
    return AlphaParam(2, 1, 2)


@pytest.fixture
def a356():
    return AlphaParam(3, 5, 6)


def small_measures():
    """A mixed bag of valid measures of depth <= 6, used by several suites."""
    out = []
    for m, s in [(2, (2, 2, 2)), (3, (2, 3, 1, 2)), (2, (1, 1, 2, 1, 2, 1)), (4, (3, 2, 4)), (5, (1, 5, 2))]:
        out.append(build_uniform(m, BranchingSpec(Fraction(1), s), len(s)))
    out.append(build_uniform(3, BranchingSpec(Fraction(3, 5), (2, 2)), 2))
    out.append(build_greedy(AlphaParam(2, 1, 2), 1, 6).measure)
    out.append(build_greedy(AlphaParam(3, 5, 6), Fraction(3, 7), 5).measure)
    for seed in range(45):
        m = 2 + seed % 3
        depth = 1 + seed % 6
        law = ("integer", "equal", "skewed")[seed % 3]
        out.append(build_random(m, depth, seed, mass_split_law=law, x0=Fraction(1 + seed % 4, 3)))
    return out


# Acceptance criteria append "PASS A1 ..." / "FAIL A1 ..." lines here.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
