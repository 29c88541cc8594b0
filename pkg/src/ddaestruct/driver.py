"""Pipeline orchestration: prechecks, the three-step DDAE analysis, results.

The delayed analysis prechecks structural nonsingularity on the collapsed
base-variable graph (an exact termination criterion), runs the shifting step,
reduces derivative orders, and runs the differentiation step.  Singularity is
reported by the precheck, never by loop divergence; the step budget remains a
defense-in-depth assertion.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .bigraph import (DIFF_HIGHEST, SHIFT_HIGHEST, build_graph,
                      prune_to_highest)
from .matching import Matching, saturate_view, saturating_matching
from .model import ClassKey, RelationKind, System
from .pantelides import (DIF, SHIFT, StepBudgetExceeded, TypedRun,
                         pantelides_dae, pantelides_typed)
from .shiftcore import LinearizationAddition, trimmed_linearization

STATUS_OK = "ok"
STATUS_SINGULAR = "structurally_singular"
STATUS_BUDGET = "step_budget_exceeded"


class DelayedOccurrencePresent(ValueError):
    """A delayed occurrence appeared in an analysis that forbids them."""


@dataclass(frozen=True)
class StageDump:
    """Snapshot of the pipeline for debug graph emission."""

    label: str
    system: System
    relation: RelationKind
    prune_mode: Optional[str]
    matching: Optional[Matching]


@dataclass(frozen=True)
class AnalysisResult:
    status: str
    per_equation: tuple[tuple[str, int, int], ...]
    linearization: tuple[LinearizationAddition, ...]
    assignment_shift: tuple[tuple[ClassKey, str], ...]
    assignment_diff: tuple[tuple[ClassKey, str], ...]
    witness: Optional[tuple[str, ...]]
    stages: tuple[StageDump, ...] = ()


def _counts(sys: System) -> tuple[tuple[str, int, int], ...]:
    return tuple((ref.name, ref.shift_count, ref.diff_count)
                 for ref, _ in sys.equations)


def _named_assignment(sys: System, assign: Matching) -> tuple[tuple[ClassKey, str], ...]:
    pairs = sorted(assign.items(), key=lambda item: item[1])
    return tuple((key, sys.eqref(eq).name) for key, eq in pairs)


def precheck(sys: System, rel: RelationKind) -> Optional[tuple[int, ...]]:
    """``None`` when an equation-saturating matching exists, else a witness
    subset of equation indices."""
    if rel not in (RelationKind.EQUAL_DAE, RelationKind.EQUAL_DDAE,
                   RelationKind.EQUAL_RESTRICTED):
        raise ValueError(f"precheck is defined for collapsed relations, not {rel}")
    return saturating_matching(build_graph(sys, rel)).witness


def _singular_result(sys: System, witness: tuple[int, ...],
                     stages: tuple[StageDump, ...]) -> AnalysisResult:
    names = tuple(sys.eqref(i).name for i in witness)
    return AnalysisResult(STATUS_SINGULAR, _counts(sys), (), (), (), names, stages)


def _budget_result(exc: StepBudgetExceeded,
                   stages: tuple[StageDump, ...]) -> AnalysisResult:
    return AnalysisResult(STATUS_BUDGET, _counts(exc.system), (), (), (), None,
                          stages)


def _shift_assignment(sys: System) -> Matching:
    # Guaranteed saturable after order reduction; a failure is an internal error.
    view = prune_to_highest(build_graph(sys, RelationKind.SHIFT_SIMILAR),
                            SHIFT_HIGHEST)
    outcome = saturate_view(view)
    if outcome.matching is None:
        raise AssertionError("post-reduction shifting graph lost saturability")
    return outcome.matching


def analyze_ddae(sys: System, budget: Optional[int] = None) -> AnalysisResult:
    """Full delayed analysis: precheck, shift step, order reduction, diff step."""
    stages = [
        StageDump("00-input", sys, RelationKind.TRIVIAL, None, None),
        StageDump("10-shiftgraph", sys, RelationKind.SHIFT_SIMILAR,
                  SHIFT_HIGHEST, None),
    ]
    witness = precheck(sys, RelationKind.EQUAL_DDAE)
    if witness is not None:
        return _singular_result(sys, witness, tuple(stages))

    try:
        shift_out = pantelides_typed(TypedRun(SHIFT, sys, budget))
    except StepBudgetExceeded as exc:
        return _budget_result(exc, tuple(stages))
    stages.append(StageDump("20-postshift", shift_out.system,
                            RelationKind.SHIFT_SIMILAR, SHIFT_HIGHEST,
                            shift_out.assignment))

    linearized, additions = trimmed_linearization(shift_out.system)
    stages.append(StageDump("30-linearized", linearized, RelationKind.TRIVIAL,
                            None, None))
    stages.append(StageDump("40-diffgraph", linearized,
                            RelationKind.DIFF_SIMILAR, DIFF_HIGHEST, None))

    try:
        diff_out = pantelides_typed(TypedRun(DIF, linearized, budget))
    except StepBudgetExceeded as exc:
        return _budget_result(exc, tuple(stages))
    final = diff_out.system
    stages.append(StageDump("50-final", final, RelationKind.DIFF_SIMILAR,
                            DIFF_HIGHEST, diff_out.assignment))

    return AnalysisResult(
        STATUS_OK,
        _counts(final),
        additions,
        _named_assignment(final, _shift_assignment(final)),
        _named_assignment(final, diff_out.assignment),
        None,
        tuple(stages),
    )


def analyze_dae(sys: System, budget: Optional[int] = None) -> AnalysisResult:
    """Classic analysis; rejects systems containing delayed occurrences."""
    for eq_index, vo in sys.all_occurrences():
        if vo.shift != 0:
            raise DelayedOccurrencePresent(
                f"equation {sys.eqref(eq_index).name} contains "
                f"a shifted occurrence of x{vo.base}"
            )
    stages = [StageDump("00-input", sys, RelationKind.TRIVIAL, None, None)]
    witness = precheck(sys, RelationKind.EQUAL_DAE)
    if witness is not None:
        return _singular_result(sys, witness, tuple(stages))
    stages.append(StageDump("40-diffgraph", sys, RelationKind.TRIVIAL,
                            DIFF_HIGHEST, None))
    try:
        out = pantelides_dae(sys, budget)
    except StepBudgetExceeded as exc:
        return _budget_result(exc, tuple(stages))
    stages.append(StageDump("50-final", out.system, RelationKind.TRIVIAL,
                            DIFF_HIGHEST, out.assignment))
    return AnalysisResult(
        STATUS_OK,
        _counts(out.system),
        (),
        (),
        _named_assignment(out.system, out.assignment),
        None,
        tuple(stages),
    )
