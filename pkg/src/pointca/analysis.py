"""Validity, cover levels, symmetry classes and pattern exports.

Everything here works directly on the cell array with cyclic shifts and does
not use the tiling templates, so it doubles as an independent check on the
template-based rule machinery.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .lattice import Grid, format_pattern

__all__ = [
    "is_valid",
    "cover_field",
    "CoverDistribution",
    "cover_distribution",
    "v_avrg",
    "p_max_formula",
    "symmetry_images",
    "canonicalize",
    "quad_export",
    "PALETTE",
    "RENDER_MODES",
    "render_ppm",
    "render",
]

_MOORE = [(dy, dx) for dy in (-1, 0, 1) for dx in (-1, 0, 1) if dy or dx]


def _cells(g) -> np.ndarray:
    return g.cells if isinstance(g, Grid) else np.asarray(g, dtype=np.uint8)


def _neighbor_sum(c: np.ndarray, closed: bool = False) -> np.ndarray:
    c = c.astype(np.int64)
    total = c.copy() if closed else np.zeros_like(c)
    for dy, dx in _MOORE:
        total += np.roll(c, (dy, dx), axis=(0, 1))
    return total


def is_valid(g: Grid | np.ndarray) -> bool:
    """Points see only zeros around them; zeros see at least one point."""
    c = _cells(g).astype(bool)
    nb = _neighbor_sum(c)
    return not ((c & (nb > 0)).any() or (~c & (nb == 0)).any())


def cover_field(g: Grid | np.ndarray) -> np.ndarray:
    """Number of well-formed point tiles covering each cell.

    A tile is anchored at every point whose eight neighbours are all zero;
    points touching another point anchor nothing. On valid patterns this is
    the usual cover level.
    """
    c = _cells(g).astype(bool)
    anchors = c & (_neighbor_sum(c) == 0)
    return _neighbor_sum(anchors, closed=True)


@dataclass(frozen=True)
class CoverDistribution:
    """Cover-level frequencies; ``kernel`` and ``hull`` split the level-1 cells."""

    kernel: int
    hull: int
    f2: int
    f3: int
    f4: int
    uncovered: int = 0

    @property
    def f1(self) -> int:
        return self.kernel + self.hull

    def as_dict(self) -> dict[int, int]:
        return {0: self.uncovered, 1: self.f1, 2: self.f2, 3: self.f3, 4: self.f4}

    def __str__(self):
        s = f"1^{{{self.kernel}+{self.hull}}} 2^{{{self.f2}}} 3^{{{self.f3}}} 4^{{{self.f4}}}"
        if self.uncovered:
            s = f"0^{{{self.uncovered}}} " + s
        return s


def cover_distribution(g: Grid | np.ndarray) -> CoverDistribution:
    c = _cells(g)
    v = cover_field(c)
    return CoverDistribution(
        kernel=int(((v == 1) & (c == 1)).sum()),
        hull=int(((v == 1) & (c == 0)).sum()),
        f2=int((v == 2).sum()),
        f3=int((v == 3).sum()),
        f4=int((v == 4).sum()),
        uncovered=int((v == 0).sum()),
    )


def v_avrg(p: int, n: int) -> float:
    """Average cover level of a valid pattern with ``p`` points on ``n x n``."""
    if p < 0:
        raise ValueError("p must be non-negative")
    return 9 * p / n**2


def p_max_formula(n: int) -> int:
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if n % 2 == 0:
        return n * n // 4
    if n % 4 == 3:
        return (n * (n - 1) - 2) // 4
    return n * (n - 1) // 4


# -- symmetry ----------------------------------------------------------------


def _dihedral(c: np.ndarray):
    for flip in (False, True):
        a = c.T if flip else c
        for k in range(4):
            yield np.rot90(a, k)


def symmetry_images(g: Grid | np.ndarray) -> np.ndarray:
    """All ``8 n^2`` images under cyclic shifts and the dihedral group, as ``(8n^2, n, n)``."""
    c = _cells(g)
    n = c.shape[0]
    r = np.arange(n)
    idx = (r[:, None] + r[None, :]) % n  # idx[shift, i]
    out = []
    for d in _dihedral(c):
        rolled = d[idx[:, None, :, None], idx[None, :, None, :]]
        out.append(rolled.reshape(n * n, n, n))
    return np.concatenate(out)


def canonicalize(g: Grid | np.ndarray) -> str:
    """Lexicographically smallest pattern text over the symmetry group."""
    imgs = symmetry_images(g)
    flat = imgs.reshape(imgs.shape[0], -1)
    best = np.lexsort(flat.T[::-1])[0]
    return format_pattern(imgs[best])


def quad_export(g: Grid | np.ndarray, U: int = 2, V: int = 2) -> str:
    """Pattern text of the field repeated ``U`` times across and ``V`` times down."""
    if U < 1 or V < 1:
        raise ValueError("repeat counts must be >= 1")
    return format_pattern(np.tile(_cells(g), (V, U)))


# -- rendering ---------------------------------------------------------------

PALETTE = {
    "point": (0, 0, 255),
    0: (255, 255, 255),
    1: (255, 255, 0),
    2: (144, 238, 144),
    3: (0, 170, 0),
    4: (0, 100, 0),
    "light_red": (255, 150, 150),
}
RENDER_MODES = ("cover", "points", "high34", "cover2")


def _colors(c: np.ndarray, mode: str) -> np.ndarray:
    v = cover_field(c)
    rgb = np.empty(c.shape + (3,), dtype=np.uint8)
    rgb[:] = PALETTE[0]
    if mode == "cover":
        for level in range(1, 5):
            rgb[v == level] = PALETTE[level]
    elif mode == "high34":
        rgb[v == 3] = PALETTE[3]
        rgb[v >= 4] = PALETTE[4]
    elif mode == "cover2":
        rgb[v == 2] = PALETTE["light_red"]
    elif mode != "points":
        raise ValueError(f"unknown render mode {mode!r}")
    rgb[c == 1] = PALETTE["point"]
    return rgb


def render_ppm(g: Grid | np.ndarray, mode: str = "cover", scale: int = 1) -> bytes:
    """Binary PPM (P6), one cell per ``scale x scale`` block of pixels."""
    if scale < 1:
        raise ValueError("scale must be >= 1")
    rgb = _colors(_cells(g), mode)
    rgb = np.repeat(np.repeat(rgb, scale, axis=0), scale, axis=1)
    h, w = rgb.shape[:2]
    return f"P6\n{w} {h}\n255\n".encode() + rgb.tobytes()


def render(g: Grid | np.ndarray, path: str | os.PathLike, mode: str = "cover", scale: int = 1) -> None:
    data = render_ppm(g, mode, scale)
    with open(path, "wb") as fh:
        fh.write(data)
