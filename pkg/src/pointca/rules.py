"""Local rules A, B, C1, C2 and their sequential composition.

The per-cell functions here are the readable reference path. The batch
simulator in :mod:`pointca._kernel` implements the same cascade on lookup
tables and is tested against :func:`apply_pipeline` draw for draw.

Random draws follow one discipline everywhere: a probability of 0 never
draws, a probability of 1 fires without drawing, anything in between draws
one uniform double. Rule B draws a second double for its fair bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import Grid, moore_window
from .tiling import count_hits, matches, templates

__all__ = [
    "RuleParams",
    "Pipeline",
    "rule_a",
    "rule_b",
    "rule_c1",
    "rule_c2",
    "diagonal_points",
    "apply_pipeline",
]

RULES = ("A", "B", "C1", "C2")


@dataclass(frozen=True)
class RuleParams:
    """Noise probabilities for rules B (``pi0``), C1 (``pi1``) and C2 (``pi2``)."""

    pi0: float = 0.01
    pi1: float = 0.25
    pi2: float = 0.02

    def __post_init__(self):
        for name in ("pi0", "pi1", "pi2"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")


@dataclass(frozen=True)
class Pipeline:
    """Ordered rule list applied at one site within one micro time-step.

    ``c2_mode`` selects the neighbours counted by rule C2: ``"diag"`` (the
    four diagonal cells) or ``"nesw"`` (the four orthogonal ones).
    ``hit_form`` names the templates whose matches are counted as hits
    (``simplified3``, the ones rule A uses, or ``reduced3``).
    ``hit_pre_adjust`` computes the hit count before rule A writes instead
    of after.
    """

    rules: tuple[str, ...] = ("A", "B", "C1", "C2")
    c2_mode: str = "diag"
    hit_form: str = "simplified3"
    hit_pre_adjust: bool = False

    def __post_init__(self):
        rules = tuple(self.rules)
        object.__setattr__(self, "rules", rules)
        if not rules or rules[0] != "A":
            raise ValueError("pipeline must start with rule A")
        if len(set(rules)) != len(rules) or any(r not in RULES for r in rules):
            raise ValueError(f"invalid rule list {rules}")
        if list(rules) != sorted(rules, key=RULES.index):
            raise ValueError(f"rules must appear in the order A, B, C1, C2: {rules}")
        if "C2" in rules and "C1" not in rules:
            raise ValueError("rule C2 requires rule C1")
        if self.c2_mode not in ("diag", "nesw"):
            raise ValueError(f"c2_mode must be 'diag' or 'nesw', got {self.c2_mode!r}")
        if self.hit_form not in ("simplified3", "reduced3"):
            raise ValueError(f"hit_form must be 'simplified3' or 'reduced3', got {self.hit_form!r}")

    @classmethod
    def parse(cls, text: str, **kw) -> Pipeline:
        """Parse a compact name such as ``"ABC1C2"`` or ``"A"``."""
        rules, s = [], text.strip().upper()
        while s:
            for r in ("C1", "C2", "A", "B"):
                if s.startswith(r):
                    rules.append(r)
                    s = s[len(r):]
                    break
            else:
                raise ValueError(f"cannot parse rule list {text!r}")
        return cls(tuple(rules), **kw)

    @property
    def name(self) -> str:
        return "".join(self.rules)

    def __contains__(self, rule):
        return rule in self.rules

    def __str__(self):
        return self.name


def _bernoulli(rng: np.random.Generator, p: float) -> bool:
    if p <= 0.0:
        return False
    if p >= 1.0:
        return True
    return rng.random() < p


def rule_a(window: np.ndarray) -> int:
    """Adjust: the reference value of a matching neighbourhood template, else no change.

    With the simplified templates this is 1 exactly when all eight
    neighbours are 0, and 0 otherwise.
    """
    for t in templates("simplified3", neighborhood_only=True):
        if matches(t, window):
            return t.ref
    return int(window[1, 1])


def rule_b(state: int, hit: int, rng: np.random.Generator, pi0: float = 0.01) -> int:
    """Gap noise: with probability ``pi0`` a cell without hits gets a fair random bit."""
    if hit == 0 and _bernoulli(rng, pi0):
        return int(rng.random() < 0.5)
    return state


def rule_c1(state: int, hit: int, rng: np.random.Generator, pi1: float = 0.25) -> int:
    """Set a singly covered zero cell to 1 with probability ``pi1``."""
    if hit == 1 and state == 0 and _bernoulli(rng, pi1):
        return 1
    return state


def rule_c2(state: int, hit: int, diag_points: int, rng: np.random.Generator, pi2: float = 0.02) -> int:
    """Break 22/22 squares: hit 2 with exactly one point among the counted neighbours."""
    if hit == 2 and diag_points == 1 and _bernoulli(rng, pi2):
        return 1
    return state


def diagonal_points(window: np.ndarray, mode: str = "diag") -> int:
    w = np.asarray(window)
    if mode == "diag":
        return int(w[0, 0] + w[0, 2] + w[2, 0] + w[2, 2])
    return int(w[0, 1] + w[1, 0] + w[1, 2] + w[2, 1])


def apply_pipeline(
    g: Grid,
    x: int,
    y: int,
    pipeline: Pipeline,
    params: RuleParams = RuleParams(),
    rng: np.random.Generator | None = None,
) -> int:
    """Run the pipeline at ``(x, y)``, writing the result into ``g`` at once.

    Returns the new state. Counters on ``g`` are not touched; the scheduler
    owns them.
    """
    n = g.n
    x, y = x % n, y % n
    window = moore_window(g, x, y)
    hit = count_hits(window, pipeline.hit_form) if pipeline.hit_pre_adjust else None
    s = rule_a(window)
    window[1, 1] = s
    if hit is None:
        hit = count_hits(window, pipeline.hit_form)
    if "B" in pipeline:
        s = rule_b(s, hit, rng, params.pi0)
    if "C1" in pipeline:
        s = rule_c1(s, hit, rng, params.pi1)
    if "C2" in pipeline:
        s = rule_c2(s, hit, diagonal_points(window, pipeline.c2_mode), rng, params.pi2)
    g.cells[y, x] = s
    return s
