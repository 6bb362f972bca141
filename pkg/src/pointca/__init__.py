"""Point pattern formation with probabilistic asynchronous cellular automata."""

from .analysis import (
    CoverDistribution,
    canonicalize,
    cover_distribution,
    cover_field,
    is_valid,
    p_max_formula,
    quad_export,
    render,
    v_avrg,
)
from .harness import ExperimentSpec, experiment, odd_n_study, scaling_study
from .lattice import Grid, InitSpec, count_points, make_rng, moore_window, new_grid, parse_pattern
from .oracle import max_points_exact, oracle_report
from .rules import Pipeline, RuleParams, apply_pipeline
from .scheduler import StopSpec, is_quiescent, run

__version__ = "0.1.0"

__all__ = [
    "CoverDistribution",
    "ExperimentSpec",
    "Grid",
    "InitSpec",
    "Pipeline",
    "RuleParams",
    "StopSpec",
    "apply_pipeline",
    "canonicalize",
    "count_points",
    "cover_distribution",
    "cover_field",
    "experiment",
    "is_quiescent",
    "is_valid",
    "make_rng",
    "max_points_exact",
    "moore_window",
    "new_grid",
    "odd_n_study",
    "oracle_report",
    "p_max_formula",
    "parse_pattern",
    "quad_export",
    "render",
    "run",
    "scaling_study",
    "v_avrg",
]
