"""Minimal Hypotheses semantics for normal logic programs."""

from .depgraph import Interpretation, build_dependency_graph, overline_body, relevant_part, support_status
from .reduction import layered_remainder, remainder, well_founded_model
from .semantics import (
    brave_query,
    cautious_query,
    classical_hypotheses_set,
    determines,
    filter_denials,
    hypotheses_set,
    is_stable_model,
    mh_models,
    solve,
)
from .syntax import Atom, GroundProgram, Literal, Program, Rule, format_program, ground, parse_program

__all__ = [
    "Atom",
    "GroundProgram",
    "Interpretation",
    "Literal",
    "Program",
    "Rule",
    "brave_query",
    "build_dependency_graph",
    "cautious_query",
    "classical_hypotheses_set",
    "determines",
    "filter_denials",
    "format_program",
    "ground",
    "hypotheses_set",
    "is_stable_model",
    "layered_remainder",
    "mh_models",
    "overline_body",
    "parse_program",
    "relevant_part",
    "remainder",
    "solve",
    "support_status",
    "well_founded_model",
]
