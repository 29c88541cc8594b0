"""Augmenting-path search with coloring, and the saturating-matching precheck.

A matching is a plain ``dict`` from class key to 1-based equation index; it is
injective by construction (an equation is entered only through its own matched
class, and flips replace assignments one-for-one).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .bigraph import ClassGraph, GraphView, full_view
from .model import ClassKey

Matching = dict[ClassKey, int]


@dataclass
class ColorState:
    """Classes and equations visited by one failed search.

    After a failed search from equation ``j``, ``equations`` is exactly the
    set of equations reachable from ``j`` by alternating paths.
    """

    classes: set[ClassKey] = field(default_factory=set)
    equations: set[int] = field(default_factory=set)


def augmentpath(view: GraphView, start: int, assign: Matching,
                colors: ColorState) -> bool:
    """Depth-first search for an augmenting path from the equation ``start``.

    On success the matching is extended so ``start`` is matched (assignments
    flip as the recursion unwinds).  On failure ``assign`` is untouched and
    ``colors`` holds the alternating-reachable equations and classes.
    Neighbors are visited in the graph's deterministic class order.
    """
    colors.equations.add(start)
    for cpos in view.active_neighbors(start):
        key = view.key(cpos)
        if key in colors.classes:
            continue
        colors.classes.add(key)
        holder = assign.get(key)
        if holder is None or augmentpath(view, holder, assign, colors):
            assign[key] = start
            return True
    return False


@dataclass(frozen=True)
class SaturationResult:
    """Either an equation-saturating matching or a witness subset."""

    matching: Optional[Matching]
    witness: Optional[tuple[int, ...]]

    @property
    def ok(self) -> bool:
        return self.witness is None


def saturate_view(view: GraphView) -> SaturationResult:
    """Match every equation of the view in index order.

    The first equation whose search fails yields the witness: the colored
    equation set outnumbers its joint class neighborhood by one.
    """
    assign: Matching = {}
    for ref in view.parent.equations:
        colors = ColorState()
        if not augmentpath(view, ref.index, assign, colors):
            return SaturationResult(None, tuple(sorted(colors.equations)))
    return SaturationResult(assign, None)


def saturating_matching(g: ClassGraph) -> SaturationResult:
    """Equation-saturating matching on the full (unpruned) class graph.

    Used as the exact singularity precheck on the collapsed base-variable
    graphs; the witness, when present, is a minimal structurally singular
    equation subset.
    """
    return saturate_view(full_view(g))
