"""Exact enumeration of valid patterns on small tori.

Configurations are handled as row bitmasks (bit ``x`` of row ``y`` is cell
``(x, y)``) and checked straight against the two pattern constraints; nothing
here touches the tiling templates or the rules.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .analysis import canonicalize, p_max_formula
from .lattice import Grid

__all__ = [
    "OracleReport",
    "enumerate_exhaustive",
    "enumerate_backtracking",
    "max_points_exact",
    "oracle_report",
    "p_max_with_source",
]

EXHAUSTIVE_MAX_N = 5
BACKTRACK_MAX_N = 8


@dataclass
class OracleReport:
    n: int
    method: str
    total: int
    p_min: int
    p_max: int
    count_at_min: int
    count_at_max: int
    w_min: int
    w_max: int
    histogram: dict[int, int]
    classes_min: list[str] = field(default_factory=list, repr=False)
    classes_max: list[str] = field(default_factory=list, repr=False)

    def to_dict(self, classes: bool = True) -> dict:
        d = asdict(self)
        d["histogram"] = {str(k): v for k, v in sorted(self.histogram.items())}
        if not classes:
            d.pop("classes_min")
            d.pop("classes_max")
        return d

    def to_json(self, classes: bool = True) -> str:
        return json.dumps(self.to_dict(classes), indent=2)

    def same_counts(self, other: OracleReport) -> bool:
        fields = ("n", "total", "p_min", "p_max", "count_at_min", "count_at_max", "w_min", "w_max")
        return all(getattr(self, f) == getattr(other, f) for f in fields) and self.histogram == other.histogram


class _Rows:
    """Cyclic row-bitmask helpers for side length ``n``."""

    def __init__(self, n: int):
        self.n = n
        self.full = (1 << n) - 1

    def rotl(self, r):
        return ((r << 1) | (r >> (self.n - 1))) & self.full

    def rotr(self, r):
        return ((r >> 1) | (r << (self.n - 1))) & self.full

    def spread(self, r):
        return r | self.rotl(r) | self.rotr(r)


def _rows_to_grid(rows, n: int) -> Grid:
    return Grid(np.array([[(r >> x) & 1 for x in range(n)] for r in rows], dtype=np.uint8))


def _build_report(n, method, hist, extremes) -> OracleReport:
    if not hist:
        raise RuntimeError(f"no valid pattern for n={n}")
    p_min, p_max = min(hist), max(hist)
    classes = {}
    for p in (p_min, p_max):
        classes[p] = sorted({canonicalize(_rows_to_grid(rows, n)) for rows in extremes[p]})
    return OracleReport(
        n=n,
        method=method,
        total=sum(hist.values()),
        p_min=p_min,
        p_max=p_max,
        count_at_min=hist[p_min],
        count_at_max=hist[p_max],
        w_min=len(classes[p_min]),
        w_max=len(classes[p_max]),
        histogram=dict(sorted(hist.items())),
        classes_min=classes[p_min],
        classes_max=classes[p_max],
    )


def _valid_configs(n: int, chunk: int = 1 << 20) -> np.ndarray:
    """All valid configurations as integers ``sum(cell(x, y) << (n*y + x))``."""
    h = _Rows(n)
    total = 1 << (n * n)
    found = []
    for start in range(0, total, chunk):
        cfg = np.arange(start, min(start + chunk, total), dtype=np.uint64)
        rows = [(cfg >> np.uint64(n * y)) & np.uint64(h.full) for y in range(n)]
        bad = np.zeros(cfg.shape, dtype=bool)
        for y in range(n):
            r = rows[y]
            seen = h.rotl(r) | h.rotr(r) | h.spread(rows[y - 1]) | h.spread(rows[(y + 1) % n])
            bad |= (r & seen) != 0
            bad |= (~r & ~seen & np.uint64(h.full)) != 0
        found.append(cfg[~bad])
    return np.concatenate(found)


def enumerate_exhaustive(n: int) -> OracleReport:
    """Test every one of the ``2^(n^2)`` configurations (``n <= 5``)."""
    if not 2 <= n <= EXHAUSTIVE_MAX_N:
        raise ValueError(f"exhaustive enumeration supports 2 <= n <= {EXHAUSTIVE_MAX_N}, got {n}")
    cfgs = [int(c) for c in _valid_configs(n)]
    full = (1 << n) - 1
    hist: dict[int, int] = {}
    by_p: dict[int, list] = {}
    for c in cfgs:
        p = c.bit_count()
        hist[p] = hist.get(p, 0) + 1
        by_p.setdefault(p, []).append([(c >> (n * y)) & full for y in range(n)])
    extremes = {p: by_p[p] for p in (min(hist), max(hist))}
    return _build_report(n, "exhaustive", hist, extremes)


def _tables(n: int):
    h = _Rows(n)
    rows = [r for r in range(1 << n) if r & h.rotl(r) == 0]
    compat = {b: [c for c in rows if b & h.spread(c) == 0] for b in rows}

    def dominated(a, b, c):
        return (h.spread(a) | h.rotl(b) | h.rotr(b) | h.spread(c) | b) == h.full

    nxt = {(a, b): [c for c in compat[b] if dominated(a, b, c)] for a in rows for b in compat[a]}
    return h, rows, compat, dominated, nxt


def enumerate_backtracking(n: int) -> OracleReport:
    """Row-by-row search over rows without horizontal neighbours.

    The state is the last two rows. Placing row ``c`` after ``(a, b)``
    requires ``c`` to avoid ``b``'s points and ``b`` to be fully dominated.
    The first two rows are fixed by the outer loop so the wrap seam can be
    checked at the end.
    """
    if not 2 <= n <= BACKTRACK_MAX_N:
        raise ValueError(f"backtracking supports 2 <= n <= {BACKTRACK_MAX_N}, got {n}")
    h, rows, compat, dominated, nxt = _tables(n)
    pc = {r: r.bit_count() for r in rows}
    hist: dict[int, int] = {}
    lo, hi = n * n + 1, -1
    extremes: dict[int, list] = {}
    stack_rows: list[int] = []

    def record(p):
        nonlocal lo, hi
        hist[p] = hist.get(p, 0) + 1
        # keep pattern lists only for the current minimum and maximum
        if p < lo:
            if lo != hi:
                extremes.pop(lo, None)
            lo = p
        if p > hi:
            if lo != hi:
                extremes.pop(hi, None)
            hi = p
        if p == lo or p == hi:
            extremes.setdefault(p, []).append(list(stack_rows))

    def dfs(r0, r1, a, b, depth, p):
        if depth == n:
            if b & h.spread(r0) == 0 and dominated(a, b, r0) and dominated(b, r0, r1):
                record(p)
            return
        for c in nxt[(a, b)]:
            stack_rows.append(c)
            dfs(r0, r1, b, c, depth + 1, p + pc[c])
            stack_rows.pop()

    for r0 in rows:
        for r1 in compat[r0]:
            stack_rows[:] = [r0, r1]
            if n == 2:
                # rows 0 and 1 are each other's upper and lower neighbour
                if dominated(r1, r0, r1) and dominated(r0, r1, r0):
                    record(pc[r0] + pc[r1])
                continue
            dfs(r0, r1, r0, r1, 2, pc[r0] + pc[r1])
    extremes = {p: extremes[p] for p in (min(hist), max(hist))}
    return _build_report(n, "backtracking", hist, extremes)


def max_points_exact(n: int) -> int:
    """Largest point count of a valid pattern, by branch and bound.

    Two consecutive rows together hold at most ``n // 2`` points (their
    columns form an independent set on the ``n``-cycle), which bounds the
    rows still to be placed.
    """
    if not 2 <= n <= BACKTRACK_MAX_N:
        raise ValueError(f"exact maximum supports 2 <= n <= {BACKTRACK_MAX_N}, got {n}")
    if n == 2:
        return enumerate_backtracking(2).p_max
    h, rows, compat, dominated, nxt = _tables(n)
    pc = {r: r.bit_count() for r in rows}
    half = n // 2
    best = -1

    def dfs(r0, r1, a, b, depth, p):
        nonlocal best
        left = n - depth
        if p + (left + 1) // 2 * half <= best:
            return
        if depth == n:
            if b & h.spread(r0) == 0 and dominated(a, b, r0) and dominated(b, r0, r1):
                best = max(best, p)
            return
        for c in sorted(nxt[(a, b)], key=pc.get, reverse=True):
            dfs(r0, r1, b, c, depth + 1, p + pc[c])

    for r0 in sorted(rows, key=pc.get, reverse=True):
        for r1 in compat[r0]:
            dfs(r0, r1, r0, r1, 2, pc[r0] + pc[r1])
    return best


def oracle_report(n: int) -> OracleReport:
    """Exhaustive report where feasible, backtracking up to ``n = 8``."""
    return enumerate_exhaustive(n) if n <= EXHAUSTIVE_MAX_N else enumerate_backtracking(n)


def p_max_with_source(n: int) -> tuple[int, str]:
    """Maximum point count and where it comes from: ``"oracle"`` up to n = 8, else ``"formula"``."""
    if n <= BACKTRACK_MAX_N:
        return max_points_exact(n), "oracle"
    return p_max_formula(n), "formula"
