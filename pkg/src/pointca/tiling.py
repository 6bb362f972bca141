"""Point tile, the nine shifted templates, and template matching.

Pixel arrays are small ``int8`` arrays indexed ``[row, col]`` with the
reference pixel in the middle. Besides the states 0 and 1 a pixel may be
:data:`DONT_CARE` (printed ``#``), which matches anything.

Every rule decision that depends on a 3x3 neighbourhood is a function of the
9-bit window code (see :func:`window_code`), so the module also precomputes
lookup tables over all 512 windows from the templates. The simulation kernels
only ever index these tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "DONT_CARE",
    "SHIFTS",
    "Tile",
    "Template",
    "POINT_TILE",
    "shift_tile",
    "generate_templates",
    "reduce_template",
    "simplify_template",
    "neighborhood",
    "rotate",
    "matches",
    "count_hits",
    "format_template",
    "parse_template",
    "templates",
    "window_code",
    "window_from_code",
    "rule_a_table",
    "hit_table",
    "diagonal_count_table",
    "orthogonal_count_table",
]

DONT_CARE = -1
_CHARS = {DONT_CARE: "#", 0: "0", 1: "1"}

#: (dx, dy) shift of the tile for templates A1..A9; y grows downwards.
SHIFTS = ((0, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1), (1, 0))

FORMS = ("full5", "reduced3", "simplified3")


@dataclass(frozen=True)
class Tile:
    """A 3x3 tile ``G[j + 1, i + 1] = G(i, j)`` over {0, 1}."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.int8)
        if px.shape != (3, 3) or not np.isin(px, (0, 1)).all():
            raise ValueError("a tile is a 3x3 array over {0, 1}")
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)


POINT_TILE = Tile(np.array([[0, 0, 0], [0, 1, 0], [0, 0, 0]]))


@dataclass(frozen=True, eq=False)
class Template:
    """Template ``A_k`` over {0, 1, DONT_CARE}.

    ``reference`` is the value of the tile pixel that sits in the centre. It
    defaults to the centre pixel and survives :func:`neighborhood`, which
    blanks that pixel.
    """

    k: int
    pixels: np.ndarray
    form: str = "full5"
    reference: int | None = None

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.int8)
        if px.ndim != 2 or px.shape[0] != px.shape[1] or px.shape[0] % 2 == 0:
            raise ValueError(f"template must be an odd square array, got {px.shape}")
        if self.form not in FORMS:
            raise ValueError(f"unknown template form {self.form!r}")
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)
        if self.reference is None:
            c = px.shape[0] // 2
            if px[c, c] == DONT_CARE:
                raise ValueError("reference value required when the centre is don't-care")
            object.__setattr__(self, "reference", int(px[c, c]))

    @property
    def extent(self) -> int:
        return self.pixels.shape[0]

    @property
    def ref(self) -> int:
        return self.reference

    @property
    def is_neighborhood(self) -> bool:
        c = self.extent // 2
        return self.pixels[c, c] == DONT_CARE

    def __eq__(self, other):
        if not isinstance(other, Template):
            return NotImplemented
        return self.form == other.form and np.array_equal(self.pixels, other.pixels)

    def __hash__(self):
        return hash((self.form, self.pixels.tobytes()))

    def __str__(self):
        return format_template(self)


def shift_tile(tile: Tile, dx: int, dy: int, k: int = 0) -> Template:
    """Place ``tile`` shifted by ``(dx, dy)`` in a 5x5 don't-care array."""
    if abs(dx) > 1 or abs(dy) > 1:
        raise ValueError(f"shift ({dx}, {dy}) exceeds the 5x5 template frame")
    px = np.full((5, 5), DONT_CARE, dtype=np.int8)
    px[1 + dy : 4 + dy, 1 + dx : 4 + dx] = tile.pixels
    if not k:
        k = SHIFTS.index((dx, dy)) + 1
    return Template(k, px, "full5")


def generate_templates(tile: Tile = POINT_TILE) -> list[Template]:
    """A1..A9: one template per tile pixel, that pixel moved to the centre."""
    return [shift_tile(tile, dx, dy, k) for k, (dx, dy) in enumerate(SHIFTS, start=1)]


def reduce_template(t: Template) -> Template:
    if t.form != "full5":
        raise ValueError(f"only full5 templates can be reduced, got {t.form}")
    return Template(t.k, t.pixels[1:4, 1:4], "reduced3", t.ref)


def simplify_template(t: Template) -> Template:
    """Keep only the reference pixel and the shifted kernel pixel."""
    if t.form != "reduced3":
        raise ValueError(f"only reduced3 templates can be simplified, got {t.form}")
    if t.ref != 0:
        raise ValueError(f"template A{t.k} has no simplified form")
    px = np.full((3, 3), DONT_CARE, dtype=np.int8)
    px[t.pixels == 1] = 1
    px[1, 1] = t.pixels[1, 1]
    return Template(t.k, px, "simplified3", t.ref)


def neighborhood(t: Template) -> Template:
    """The neighbourhood template: centre pixel replaced by don't-care."""
    px = t.pixels.copy()
    c = t.extent // 2
    px[c, c] = DONT_CARE
    return Template(t.k, px, t.form, t.ref)


def rotate(t: Template, quarter_turns: int = 1) -> Template:
    """Rotate clockwise (as printed, y downwards) by ``quarter_turns * 90`` degrees."""
    return Template(t.k, np.rot90(t.pixels, -quarter_turns), t.form, t.ref)


def matches(t: Template, window: np.ndarray) -> bool:
    """True iff every non-don't-care template pixel equals the aligned window cell."""
    w = np.asarray(window)
    if w.shape[0] < t.extent:
        raise ValueError(f"window {w.shape} smaller than template extent {t.extent}")
    off = (w.shape[0] - t.extent) // 2
    w = w[off : off + t.extent, off : off + t.extent]
    care = t.pixels != DONT_CARE
    return bool(np.array_equal(w[care], t.pixels[care]))


@lru_cache(maxsize=None)
def templates(form: str = "reduced3", neighborhood_only: bool = False) -> tuple[Template, ...]:
    """Cached point-tile templates. ``simplified3`` keeps A1 in its reduced form."""
    full = generate_templates(POINT_TILE)
    if form == "full5":
        out = full
    elif form == "reduced3":
        out = [reduce_template(t) for t in full]
    elif form == "simplified3":
        red = [reduce_template(t) for t in full]
        out = [red[0]] + [simplify_template(t) for t in red[1:]]
    else:
        raise ValueError(f"unknown template form {form!r}")
    if neighborhood_only:
        out = [neighborhood(t) for t in out]
    return tuple(out)


def count_hits(window: np.ndarray, form: str = "reduced3") -> int:
    """Number of templates of ``form`` (reference pixel included) matching ``window``.

    With ``reduced3`` the count is at most 4. ``simplified3`` counts A1 plus one
    hit per neighbouring point around a zero centre, so it reaches 8 on
    crowded windows. Both equal the cover level on valid patterns.
    """
    return sum(matches(t, window) for t in templates(form))


# -- ASCII form ------------------------------------------------------------


def format_template(t: Template) -> str:
    return "\n".join("".join(_CHARS[int(v)] for v in row) for row in t.pixels)


def parse_template(text: str, k: int = 0, form: str | None = None, reference: int | None = None) -> Template:
    rows = [r.strip() for r in text.strip().splitlines()]
    inv = {c: v for v, c in _CHARS.items()}
    px = np.array([[inv[c] for c in r] for r in rows], dtype=np.int8)
    if form is None:
        form = "full5" if px.shape[0] == 5 else "reduced3"
    return Template(k, px, form, reference)


# -- 512-window lookup tables ----------------------------------------------


def window_code(window: np.ndarray) -> int:
    """Encode a 3x3 binary window as ``sum(w[r, c] << (3 * r + c))``."""
    bits = np.asarray(window, dtype=np.int64).ravel()
    return int(bits @ (1 << np.arange(9)))


def window_from_code(code: int) -> np.ndarray:
    return ((code >> np.arange(9)) & 1).astype(np.uint8).reshape(3, 3)


def _table(fn) -> np.ndarray:
    out = np.array([fn(window_from_code(c)) for c in range(512)], dtype=np.uint8)
    out.setflags(write=False)
    return out


def _rule_a(window: np.ndarray) -> int:
    for t in templates("simplified3", neighborhood_only=True):
        if matches(t, window):
            return t.ref
    return int(window[1, 1])


@lru_cache(maxsize=None)
def rule_a_table() -> np.ndarray:
    """New centre state under Rule A for every window code."""
    return _table(_rule_a)


@lru_cache(maxsize=None)
def hit_table(form: str = "reduced3") -> np.ndarray:
    return _table(lambda w: count_hits(w, form))


_DIAG = np.array([[1, 0, 1], [0, 0, 0], [1, 0, 1]], dtype=bool)
_ORTHO = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=bool)


@lru_cache(maxsize=None)
def diagonal_count_table() -> np.ndarray:
    return _table(lambda w: int(w[_DIAG].sum()))


@lru_cache(maxsize=None)
def orthogonal_count_table() -> np.ndarray:
    return _table(lambda w: int(w[_ORTHO].sum()))
