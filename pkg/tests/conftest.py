import numpy as np
import pytest

from pointca.lattice import Grid, parse_pattern

FIVE_5 = """\
10000
00100
00001
01000
00010
"""

SIX_9 = """\
000000
010101
000000
010101
000000
010101
"""

# the two 4x4 maximum patterns, one per symmetry class
FOUR_MAX = (
    "0000\n0101\n0000\n0101\n",
    "0000\n0101\n0000\n1010\n",
)


@pytest.fixture
def five5():
    return parse_pattern(FIVE_5)


@pytest.fixture
def six9():
    return parse_pattern(SIX_9)


@pytest.fixture
def four_max():
    return [parse_pattern(t) for t in FOUR_MAX]


def all_grids(n):
    """Every n x n configuration as a (2**(n*n), n, n) uint8 array."""
    codes = np.arange(1 << (n * n), dtype=np.int64)
    bits = (codes[:, None] >> np.arange(n * n)) & 1
    return bits.reshape(-1, n, n).astype(np.uint8)


def point_grid(n, *xy):
    c = np.zeros((n, n), dtype=np.uint8)
    for x, y in xy:
        c[y % n, x % n] = 1
    return Grid(c)


# acceptance criteria lines, printed again at the end of the session
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def stack_codes(stack):
    """Window codes for a stack of grids, same encoding as ``window_codes``."""
    c = stack.astype(np.int64)
    codes = np.zeros_like(c)
    bit = 0
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            codes |= np.roll(c, (-dy, -dx), axis=(1, 2)) << bit
            bit += 1
    return codes


_VALID = {}


def valid_mask(n):
    """``is_valid`` of every n x n grid, computed once per session."""
    from pointca.analysis import is_valid

    if n not in _VALID:
        _VALID[n] = np.array([is_valid(c) for c in all_grids(n)])
    return _VALID[n]


_REPORTS = {}


def report(n):
    """Oracle report for n, computed once per session."""
    from pointca.oracle import oracle_report

    if n not in _REPORTS:
        _REPORTS[n] = oracle_report(n)
    return _REPORTS[n]


def valid_grids(n):
    """All valid n x n grids via the oracle's bitmask filter."""
    from pointca.oracle import _valid_configs

    cfg = _valid_configs(n).astype(np.int64)
    bits = (cfg[:, None] >> np.arange(n * n)) & 1
    return bits.reshape(-1, n, n).astype(np.uint8)
