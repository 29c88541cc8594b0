"""Bipartite incidence graphs over variable equivalence classes.

``build_graph`` turns a system into the bipartite graph whose variable side
is the set of equivalence classes under a chosen relation; ``prune_to_highest``
produces the view the matching step actually works on, with every class that
is not a highest derivative (or highest shift) deactivated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .model import ClassKey, EqRef, RelationKind, System, class_of

DIFF_HIGHEST = "diffHighest"
SHIFT_HIGHEST = "shiftHighest"


@dataclass
class ClassGraph:
    """Immutable-by-convention bipartite graph of a system under one relation.

    Equations are addressed by their 1-based system index; classes by their
    position in the sorted ``classes`` tuple.
    """

    relation: RelationKind
    equations: tuple[EqRef, ...]
    classes: tuple[ClassKey, ...]
    edges: frozenset[tuple[int, int]]
    _adjacency: dict[int, tuple[int, ...]] = field(repr=False, default_factory=dict)

    def __post_init__(self):
        if not self._adjacency:
            adj: dict[int, list[int]] = {ref.index: [] for ref in self.equations}
            for eq_index, cpos in sorted(self.edges):
                adj[eq_index].append(cpos)
            self._adjacency = {i: tuple(cs) for i, cs in adj.items()}

    def neighbors(self, eq_index: int) -> tuple[int, ...]:
        return self._adjacency[eq_index]

    def key(self, cpos: int) -> ClassKey:
        return self.classes[cpos]

    def position(self, key: ClassKey) -> int:
        return self.classes.index(key)


@dataclass
class GraphView:
    """A ``ClassGraph`` with a subset of variable classes deactivated."""

    parent: ClassGraph
    active: frozenset[int]

    def active_neighbors(self, eq_index: int) -> tuple[int, ...]:
        return tuple(c for c in self.parent.neighbors(eq_index) if c in self.active)

    def active_keys(self) -> tuple[ClassKey, ...]:
        return tuple(self.parent.classes[c] for c in sorted(self.active))

    def key(self, cpos: int) -> ClassKey:
        return self.parent.classes[cpos]


def build_graph(sys: System, rel: RelationKind) -> ClassGraph:
    """Bipartite graph of ``sys`` over ``rel``.

    An edge joins an equation and a class exactly when some occurrence of the
    equation lies in the class; occurrences outside the relation's domain
    contribute nothing.
    """
    keys: set[ClassKey] = set()
    raw_edges: set[tuple[int, ClassKey]] = set()
    for eq_index, vo in sys.all_occurrences():
        key = class_of(rel, vo)
        if key is None:
            continue
        keys.add(key)
        raw_edges.add((eq_index, key))
    classes = tuple(sorted(keys, key=ClassKey.sort_key))
    positions = {key: pos for pos, key in enumerate(classes)}
    edges = frozenset((i, positions[key]) for i, key in raw_edges)
    return ClassGraph(rel, tuple(ref for ref, _ in sys.equations), classes, edges)


def _highest(keys: list[ClassKey], mode: str) -> set[ClassKey]:
    if mode == DIFF_HIGHEST:
        # Dominated within the same (base, shift) lane by a larger derivative.
        best: dict[tuple, int] = {}
        for key in keys:
            if key.deriv is None:
                raise ValueError(f"{key.relation} keys carry no derivative order")
            lane = (key.base, key.shift)
            best[lane] = max(best.get(lane, -1), key.deriv)
        return {k for k in keys if k.deriv == best[(k.base, k.shift)]}
    if mode == SHIFT_HIGHEST:
        # Delayed classes are never matchable, independent of domination.
        best: dict[int, int] = {}
        for key in keys:
            if key.shift is None:
                raise ValueError(f"{key.relation} keys carry no shift level")
            best[key.base] = max(best.get(key.base, -2), key.shift)
        return {k for k in keys if k.shift >= 0 and k.shift == best[k.base]}
    raise ValueError(f"unknown prune mode {mode!r}")


def prune_to_highest(g, mode: str) -> GraphView:
    """Deactivate every class that cannot be a highest vertex.

    Accepts a ``ClassGraph`` or an existing ``GraphView`` (re-pruning a view
    is a no-op, which makes the operation idempotent).
    """
    if isinstance(g, GraphView):
        parent, candidates = g.parent, sorted(g.active)
    else:
        parent, candidates = g, range(len(g.classes))
    keys = [parent.classes[c] for c in candidates]
    keep = _highest(keys, mode)
    active = frozenset(c for c in candidates if parent.classes[c] in keep)
    return GraphView(parent, active)


def full_view(g: ClassGraph) -> GraphView:
    return GraphView(g, frozenset(range(len(g.classes))))


def restrict_system(sys: System, view: GraphView) -> System:
    """Copy of ``sys`` keeping only occurrences whose class is active in ``view``."""
    rel = view.parent.relation
    active_keys = {view.parent.classes[c] for c in view.active}
    eqs = []
    for ref, occs in sys.equations:
        kept = frozenset(vo for vo in occs if class_of(rel, vo) in active_keys)
        eqs.append((ref, kept))
    return System(tuple(eqs), sys.n_vars)


def shift_graph_signature(sys: System) -> tuple:
    """Canonical order-independent encoding of the shifting graph.

    Differentiation levels are erased (classes merge them and equation names
    are stable under differentiation), so the signature is invariant under
    differentiating any equation while shifting generally changes it.
    """
    adjacency: dict[tuple[int, int], set[str]] = {}
    for ref, occs in sys.equations:
        for vo in occs:
            adjacency.setdefault((vo.base, vo.shift), set()).add(ref.name)
    return tuple(
        (base, shift, tuple(sorted(names)))
        for (base, shift), names in sorted(adjacency.items())
    )


def _class_label(key: ClassKey) -> str:
    from .dsl import render_class  # local import; dsl depends on model only

    return render_class(key)


def _eq_label(ref: EqRef) -> str:
    label = ref.name
    if ref.diff_count == 1:
        label += "'"
    elif ref.diff_count > 1:
        label += f"^({ref.diff_count})"
    if ref.shift_count:
        label += f"@{ref.shift_count}"
    return label


def to_dot(view: GraphView, matching: Optional[dict[ClassKey, int]] = None,
           title: str = "") -> str:
    """Render a graph view as DOT, with pruned classes grayed and matching
    edges emphasized."""
    matching = matching or {}
    g = view.parent
    lines = ["graph bipartite {"]
    if title:
        lines.append(f'  label="{title}";')
    lines.append("  rankdir=LR;")
    lines.append("  node [fontname=monospace];")
    for ref in g.equations:
        lines.append(f'  "e{ref.index}" [shape=box, label="{_eq_label(ref)}"];')
    for cpos, key in enumerate(g.classes):
        style = "" if cpos in view.active else ", style=dashed, color=gray"
        lines.append(
            f'  "v{cpos}" [shape=ellipse, label="{_class_label(key)}"{style}];'
        )
    for eq_index, cpos in sorted(g.edges):
        key = g.classes[cpos]
        if matching.get(key) == eq_index:
            attr = " [penwidth=2.5, color=blue]"
        elif cpos not in view.active:
            attr = " [style=dashed, color=gray]"
        else:
            attr = ""
        lines.append(f'  "e{eq_index}" -- "v{cpos}"{attr};')
    lines.append("}")
    return "\n".join(lines) + "\n"
