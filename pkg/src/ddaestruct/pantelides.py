"""The matching loop: classic form for DAEs and the typed shift/diff form.

Equations are processed in ascending input order.  Each attempt rebuilds the
class graph from the current system, prunes non-highest classes, resets the
coloring, and searches for an augmenting path.  On failure the whole colored
set is updated at once: shifted by one (after settling the interleaved
differentiations) in shift mode, differentiated by one in diff mode; matched
classes of colored equations migrate to their bumped keys.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .bigraph import DIFF_HIGHEST, SHIFT_HIGHEST, build_graph, prune_to_highest
from .matching import ColorState, Matching, augmentpath
from .model import ClassKey, RelationKind, System, apply_diff, apply_shift
from .shiftcore import diff_during_shift

SHIFT = "shift"
DIF = "dif"


class StepBudgetExceeded(RuntimeError):
    """The update loop outran its budget.

    Unreachable when the corresponding singularity precheck passed; kept as a
    defense-in-depth assertion and reachable through a user-supplied budget.
    """

    def __init__(self, mode: str, system: System):
        super().__init__(f"{mode} step exceeded its update budget")
        self.mode = mode
        self.system = system


@dataclass
class TypedRun:
    """Configuration of one shift- or diff-mode run."""

    mode: str
    system: System
    step_budget: Optional[int] = None
    relation: RelationKind = field(init=False)

    def __post_init__(self):
        if self.mode not in (SHIFT, DIF):
            raise ValueError(f"mode must be {SHIFT!r} or {DIF!r}")
        self.relation = (RelationKind.SHIFT_SIMILAR if self.mode == SHIFT
                         else RelationKind.DIFF_SIMILAR)


@dataclass(frozen=True)
class TypedResult:
    system: System
    assignment: Matching
    diff_during_shift: dict[int, int]


def _bump(key: ClassKey, mode: str) -> ClassKey:
    if mode == SHIFT:
        return ClassKey(key.relation, key.base, key.deriv, key.shift + 1)
    return ClassKey(key.relation, key.base, key.deriv + 1, key.shift)


def _migrate(assign: Matching, colors: ColorState, mode: str) -> Matching:
    migrated: Matching = {}
    for key, eq in assign.items():
        target = _bump(key, mode) if key in colors.classes else key
        assert target not in migrated, "assignment migration collided"
        migrated[target] = eq
    return migrated


def _default_budget(sys: System, relation: RelationKind) -> int:
    return 50 * (len(sys) + len(build_graph(sys, relation).classes))


def _run(sys: System, relation: RelationKind, mode: str,
         budget: Optional[int]) -> tuple[System, Matching, dict[int, int]]:
    prune_mode = SHIFT_HIGHEST if mode == SHIFT else DIFF_HIGHEST
    if budget is None:
        budget = _default_budget(sys, relation)
    assign: Matching = {}
    interleaved = {ref.index: 0 for ref, _ in sys.equations}
    updates = 0
    for r in range(1, len(sys) + 1):
        while True:
            view = prune_to_highest(build_graph(sys, relation), prune_mode)
            colors = ColorState()
            if augmentpath(view, r, assign, colors):
                break
            updates += 1
            if updates > budget:
                raise StepBudgetExceeded(mode, sys)
            if mode == SHIFT:
                owed = diff_during_shift(sys, view, assign, colors, exposed=r)
                for eq, q in sorted(owed.items()):
                    if q:
                        sys = apply_diff(sys, eq, q)
                        interleaved[eq] += q
            for eq in sorted(colors.equations):
                sys = apply_shift(sys, eq, 1) if mode == SHIFT else apply_diff(sys, eq, 1)
            assign = _migrate(assign, colors, mode)
    return sys, assign, interleaved


def pantelides_typed(run: TypedRun) -> TypedResult:
    """Shift- or diff-mode matching loop on the corresponding class graph.

    In shift mode every failure first settles the differentiations owed by the
    implicit class links (applied to the system only; the shifting graph is
    unaffected), then shifts the colored set by one.  In diff mode the loop is
    the classic one on the differentiation graph.
    """
    sys, assign, interleaved = _run(run.system, run.relation, run.mode,
                                    run.step_budget)
    return TypedResult(sys, assign, interleaved)


def pantelides_dae(sys: System, budget: Optional[int] = None) -> TypedResult:
    """Classic matching loop for DAEs on the singleton-class graph.

    Every occurrence is its own vertex, domination is by derivative order, and
    each failure differentiates the colored set once.
    """
    out, assign, _ = _run(sys, RelationKind.TRIVIAL, DIF, budget)
    return TypedResult(out, assign, {})
