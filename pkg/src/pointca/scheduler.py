"""Asynchronous update orders and the time-step loop.

One time-step is ``N = n * n`` micro time-steps. The grid is observed only at
time-step boundaries, where the trace records a row and quiescence is
checked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernel
from .analysis import is_valid
from .lattice import Grid, make_rng
from .rules import Pipeline, RuleParams
from .tiling import diagonal_count_table, hit_table, orthogonal_count_table, rule_a_table

__all__ = [
    "ORDERS",
    "parse_order",
    "StopSpec",
    "TraceRow",
    "RunTrace",
    "next_sites",
    "binom_update_pmf",
    "window_codes",
    "is_quiescent",
    "run",
]

ORDERS = ("pure_random", "random_sequence", "strict_index")
_ALIASES = {"pure": "pure_random", "sweep": "random_sequence", "strict": "strict_index"}


def parse_order(text: str) -> str:
    order = _ALIASES.get(text, text)
    if order not in ORDERS:
        raise ValueError(f"unknown update order {text!r}")
    return order


@dataclass(frozen=True)
class StopSpec:
    t_max: int = 1000
    stop_on_stable: bool = True

    def __post_init__(self):
        if self.t_max < 1:
            raise ValueError(f"t_max must be >= 1, got {self.t_max}")


@dataclass(frozen=True)
class TraceRow:
    t: int
    tau: int
    points: int
    valid: bool
    quiescent: bool
    hits: tuple[int, ...]  # hits[h] = number of cells with h hits


@dataclass
class RunTrace:
    rows: list[TraceRow]
    final: Grid
    quiescent: bool
    tau_stable: int | None = None
    t_stable: int | None = None
    tau_last_change: int = 0
    best_points: int | None = None
    best_t: int | None = None
    best_grid: Grid | None = field(default=None, repr=False)

    @property
    def points(self) -> int:
        return int(self.final.cells.sum())


def next_sites(order: str, n: int, t: int, rng: np.random.Generator | None) -> np.ndarray:
    """Flat site indices ``y * n + x`` for one time-step.

    ``t`` is unused by the three orders here; it is kept so that
    time-dependent deterministic orders can share the signature.
    """
    N = n * n
    if order == "strict_index":
        return np.arange(N, dtype=np.int64)
    if order == "random_sequence":
        return rng.permutation(N).astype(np.int64)
    if order == "pure_random":
        return rng.integers(0, N, size=N, dtype=np.int64)
    raise ValueError(f"unknown update order {order!r}")


def binom_update_pmf(N: int, k: int) -> float:
    """P(a given cell is updated ``k`` times during one pure-random time-step of ``N`` updates)."""
    if not 0 <= k <= N:
        raise ValueError(f"k must lie in [0, {N}], got {k}")
    q = 1.0 / N
    return math.comb(N, k) * q**k * (1.0 - q) ** (N - k)


def window_codes(cells: np.ndarray) -> np.ndarray:
    """9-bit Moore window code of every cell (same encoding as :func:`tiling.window_code`)."""
    c = np.asarray(cells, dtype=np.int64)
    codes = np.zeros_like(c)
    bit = 0
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            codes |= np.roll(c, (-dy, -dx), axis=(0, 1)) << bit
            bit += 1
    return codes


def _count_table(pipeline: Pipeline) -> np.ndarray:
    return diagonal_count_table() if pipeline.c2_mode == "diag" else orthogonal_count_table()


def _quiescent_codes(cells, codes, pipeline, params) -> bool:
    if not np.array_equal(rule_a_table()[codes], cells):
        return False
    hits = hit_table(pipeline.hit_form)[codes]
    if "B" in pipeline and params.pi0 > 0 and (hits == 0).any():
        return False
    if "C1" in pipeline and params.pi1 > 0 and ((hits == 1) & (cells == 0)).any():
        return False
    if "C2" in pipeline and params.pi2 > 0:
        if ((hits == 2) & (cells == 0) & (_count_table(pipeline)[codes] == 1)).any():
            return False
    return True


def is_quiescent(g: Grid, pipeline: Pipeline, params: RuleParams = RuleParams()) -> bool:
    """True iff no rule of ``pipeline`` can change any cell of ``g``."""
    return _quiescent_codes(g.cells, window_codes(g.cells), pipeline, params)


def run(
    g: Grid,
    pipeline: Pipeline,
    params: RuleParams = RuleParams(),
    order: str = "random_sequence",
    stop: StopSpec = StopSpec(),
    rng: np.random.Generator | None = None,
) -> RunTrace:
    """Evolve a copy of ``g`` and return its trace.

    ``tau_stable`` is the micro-step index (the first update is 1) of the last
    state change before quiescence was detected, ``t_stable`` the first
    time-step boundary at which the grid was quiescent. The best snapshot is
    the valid boundary configuration with the most points.
    """
    if rng is None:
        rng = make_rng(0)
    order = parse_order(order)
    grid = g.copy()
    cells = grid.cells
    n = grid.n
    N = n * n
    ra, ht, ct = rule_a_table(), hit_table(pipeline.hit_form), _count_table(pipeline)
    flags = ("B" in pipeline, "C1" in pipeline, "C2" in pipeline)

    trace = RunTrace(rows=[], final=grid, quiescent=False, tau_last_change=grid.tau)

    def observe():
        codes = window_codes(cells)
        q = _quiescent_codes(cells, codes, pipeline, params)
        valid = is_valid(grid)
        p = int(cells.sum())
        hist = np.bincount(ht[codes].ravel(), minlength=9)
        trace.rows.append(TraceRow(grid.t, grid.tau, p, valid, q, tuple(int(h) for h in hist)))
        if valid and (trace.best_points is None or p > trace.best_points):
            trace.best_points, trace.best_t, trace.best_grid = p, grid.t, grid.copy()
        if q and trace.t_stable is None:
            trace.t_stable, trace.tau_stable = grid.t, trace.tau_last_change
        trace.quiescent = q
        return q

    q = observe()
    for _ in range(stop.t_max):
        if q and stop.stop_on_stable:
            break
        sites = next_sites(order, n, grid.t, rng)
        last = _kernel.sweep(
            cells, sites, ra, ht, ct, *flags,
            params.pi0, params.pi1, params.pi2, pipeline.hit_pre_adjust, rng, grid.tau,
        )
        if last >= 0:
            trace.tau_last_change = int(last)
        grid.t += 1
        grid.tau += N
        q = observe()
    return trace
