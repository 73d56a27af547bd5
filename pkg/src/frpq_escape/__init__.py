"""Escape games, regular-constraint chase and the tiling reduction for finite regular path queries."""
from __future__ import annotations

from .chase import RegularConstraint, Request, Verdict, add, add_path, requests, satisfies, validate_counterexample
from .errors import (
    ColorspaceError,
    InvalidInstanceError,
    LemmaShapeMismatch,
    NotInLanguageError,
    StaleRequestError,
)
from .fixtures import (
    assemble_counterexample,
    build_G,
    build_G_dollar,
    build_L,
    build_L_dollar,
    build_P,
    build_P_dollar,
    cold_alpha_mirror,
)
from .game import CrocodileStrategy, GameConfig, PlayTranscript, initial_position, monitor_principles, play, replay
from .homomorphism import find_homomorphism, find_isomorphism, is_homomorphism, isomorphic_mod_shades
from .language import PathLanguage, color, concat, enumerate_words, evaluate, from_patterns, sigma_upto, union
from .pipeline import PipelineRun, run_stage_pipeline
from .policies import Canonical, ExitScript, Lifting, RandomPolicy, Scripted, ShadingOracle
from .reduction import ReductionOutput, named_strategies, reduce, s_k, s_layer
from .structure import Structure
from .symbols import Label, Pattern, Symbol
from .tiling import GridShading, TilingInstance, check_shading, classify, search_shading

__version__ = "0.1.0"
