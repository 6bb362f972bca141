"""Toroidal binary grids, initial conditions and the pattern text format.

Cells are stored in a ``(n, n)`` ``uint8`` array indexed ``cells[y, x]`` with
``x`` the column and ``y`` the row, growing downwards. All coordinate access
wraps cyclically.

Randomness comes from :func:`make_rng`, a numpy ``Generator`` on the Philox
counter-based bit generator. One stream is used per run.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Grid",
    "InitSpec",
    "make_rng",
    "new_grid",
    "moore_window",
    "count_points",
    "format_pattern",
    "parse_pattern",
    "read_pattern",
    "write_pattern",
]


def make_rng(seed: int) -> np.random.Generator:
    """Return the repository-wide generator (Philox) seeded with ``seed``."""
    return np.random.Generator(np.random.Philox(int(seed)))


@dataclass(frozen=True)
class InitSpec:
    """Initial configuration: ``all_zero``, ``all_one`` or ``random``."""

    kind: str = "random"
    density: float = 0.5

    KINDS = ("all_zero", "all_one", "random")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown init kind {self.kind!r}")
        if not 0.0 <= self.density <= 1.0:
            raise ValueError(f"density must lie in [0, 1], got {self.density}")

    @classmethod
    def parse(cls, text: str) -> InitSpec:
        """Parse ``zero``, ``one``, ``random`` or ``random:<density>``."""
        key, _, arg = text.strip().partition(":")
        key = {"zero": "all_zero", "one": "all_one"}.get(key, key)
        if key == "random" and arg:
            return cls("random", float(arg))
        if arg:
            raise ValueError(f"init {key!r} takes no argument")
        return cls(key)

    def __str__(self):
        if self.kind == "random":
            return f"random:{self.density:g}"
        return self.kind.replace("all_", "")


@dataclass
class Grid:
    """An ``n x n`` torus of binary states plus its generation counters.

    ``t`` counts completed time-steps and ``tau`` completed micro time-steps
    (single-cell updates).
    """

    cells: np.ndarray
    t: int = 0
    tau: int = 0

    def __post_init__(self):
        cells = np.asarray(self.cells)
        if cells.ndim != 2 or cells.shape[0] != cells.shape[1]:
            raise ValueError(f"grid must be square, got shape {cells.shape}")
        if cells.shape[0] < 2:
            raise ValueError("grid side length must be at least 2")
        if cells.size and not np.isin(cells, (0, 1)).all():
            raise ValueError("grid states must be 0 or 1")
        self.cells = np.ascontiguousarray(cells, dtype=np.uint8)

    @property
    def n(self) -> int:
        return self.cells.shape[0]

    def __getitem__(self, xy):
        x, y = xy
        return int(self.cells[y % self.n, x % self.n])

    def __setitem__(self, xy, value):
        x, y = xy
        if value not in (0, 1):
            raise ValueError("state must be 0 or 1")
        self.cells[y % self.n, x % self.n] = value

    def copy(self) -> Grid:
        return Grid(self.cells.copy(), self.t, self.tau)

    def __eq__(self, other):
        if not isinstance(other, Grid):
            return NotImplemented
        return np.array_equal(self.cells, other.cells)

    def __str__(self):
        return format_pattern(self)


def new_grid(n: int, init: InitSpec | str = "random", rng: np.random.Generator | None = None) -> Grid:
    """Create an ``n x n`` grid filled according to ``init``.

    A random init draws every cell independently with ``P(1) = density``;
    it requires ``rng``.
    """
    if n < 2:
        raise ValueError(f"side length must be >= 2, got {n}")
    if isinstance(init, str):
        init = InitSpec.parse(init)
    if init.kind == "all_zero":
        cells = np.zeros((n, n), dtype=np.uint8)
    elif init.kind == "all_one":
        cells = np.ones((n, n), dtype=np.uint8)
    else:
        if rng is None:
            raise ValueError("random init needs an rng")
        cells = (rng.random((n, n)) < init.density).astype(np.uint8)
    return Grid(cells)


def moore_window(g: Grid, x: int, y: int) -> np.ndarray:
    """3x3 states centred on ``(x, y)``, wrapped cyclically; ``w[1 + dy, 1 + dx]``."""
    n = g.n
    rows = [(y + d) % n for d in (-1, 0, 1)]
    cols = [(x + d) % n for d in (-1, 0, 1)]
    return g.cells[np.ix_(rows, cols)].copy()


def count_points(g: Grid) -> int:
    return int(g.cells.sum())


# -- pattern text format: n lines of n characters '0'/'1' ------------------


def format_pattern(g: Grid | np.ndarray) -> str:
    cells = g.cells if isinstance(g, Grid) else np.asarray(g)
    return "".join("".join("01"[v] for v in row) + "\n" for row in cells)


def parse_pattern(text: str) -> Grid:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty pattern")
    n = len(lines)
    for i, ln in enumerate(lines):
        if len(ln) != n or set(ln) - {"0", "1"}:
            raise ValueError(f"line {i + 1}: expected {n} characters from '01', got {ln!r}")
    return Grid(np.array([[int(c) for c in ln] for ln in lines], dtype=np.uint8))


def read_pattern(path: str | os.PathLike) -> Grid:
    with open(path) as fh:
        try:
            return parse_pattern(fh.read())
        except ValueError as exc:
            raise ValueError(f"{path}: {exc}") from None


def write_pattern(g: Grid, path: str | os.PathLike) -> None:
    with open(path, "w") as fh:
        fh.write(format_pattern(g))
