"""Structural shift/differentiation analysis for delay DAE systems."""

from .bigraph import (ClassGraph, GraphView, build_graph, full_view,
                      prune_to_highest, restrict_system,
                      shift_graph_signature, to_dot)
from .driver import (AnalysisResult, DelayedOccurrencePresent, STATUS_BUDGET,
                     STATUS_OK, STATUS_SINGULAR, analyze_dae, analyze_ddae,
                     precheck)
from .dsl import (ParseError, SourceSpan, parse, render_class, render_report,
                  render_system, render_term)
from .matching import (ColorState, Matching, SaturationResult, augmentpath,
                       saturate_view, saturating_matching)
from .model import (ClassKey, EqRef, RelationKind, System, VarOcc, apply_diff,
                    apply_shift, class_of)
from .oracle import SubsetWitness, TooLarge, brute_singular, is_mss
from .pantelides import (StepBudgetExceeded, TypedResult, TypedRun,
                         pantelides_dae, pantelides_typed)
from .shiftcore import (Connection, InconsistentSystem, InvalidConnection,
                        LinearizationAddition, NuSystem, build_nu_system,
                        diff_during_shift, find_connections, solve_min_nonneg,
                        trimmed_linearization)

__version__ = "0.1.0"

__all__ = [
    "AnalysisResult", "ClassGraph", "ClassKey", "ColorState", "Connection",
    "DelayedOccurrencePresent", "EqRef", "GraphView", "InconsistentSystem",
    "InvalidConnection", "LinearizationAddition", "Matching", "NuSystem",
    "ParseError", "RelationKind", "SaturationResult", "SourceSpan",
    "STATUS_BUDGET", "STATUS_OK", "STATUS_SINGULAR", "StepBudgetExceeded",
    "SubsetWitness", "System", "TooLarge", "TypedResult", "TypedRun",
    "VarOcc", "analyze_dae", "analyze_ddae", "apply_diff", "apply_shift",
    "augmentpath", "brute_singular", "build_graph", "build_nu_system",
    "class_of", "diff_during_shift", "find_connections", "full_view",
    "is_mss", "pantelides_dae", "pantelides_typed", "parse", "precheck",
    "prune_to_highest", "render_class", "render_report", "render_system",
    "render_term", "restrict_system", "saturate_view", "saturating_matching",
    "shift_graph_signature", "solve_min_nonneg", "to_dot",
    "trimmed_linearization",
]
