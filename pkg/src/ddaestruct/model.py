"""Core data model for structural analysis of delay DAEs.

A system is stored purely structurally: each equation is a set of variable
occurrences ``x_base`` differentiated ``deriv`` times and advanced ``shift``
multiples of the delay (``shift == -1`` marks a delayed argument).  All graph
views are rebuilt from the system after every update, so the ``System`` value
is the single source of truth.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Optional


class RelationKind(Enum):
    """Equivalence relations used to group occurrences into graph vertices.

    TRIVIAL          - singleton classes, one per occurrence.
    EQUAL_DAE        - group by base variable (derivative orders collapsed).
    SHIFT_SIMILAR    - group by (base, shift): all derivative orders at one
                       shift level form a single vertex.
    DIFF_SIMILAR     - group by (base, deriv) over occurrences with
                       nonnegative shift; delayed occurrences are outside the
                       domain.
    EQUAL_DDAE       - group by base variable over all occurrences.
    EQUAL_RESTRICTED - group by base, restricted to undelayed occurrences of
                       order at most one.
    """

    TRIVIAL = "trivial"
    EQUAL_DAE = "equal_dae"
    SHIFT_SIMILAR = "shift_similar"
    DIFF_SIMILAR = "diff_similar"
    EQUAL_DDAE = "equal_ddae"
    EQUAL_RESTRICTED = "equal_restricted"


@dataclass(frozen=True, order=True)
class VarOcc:
    """One structural occurrence of a state variable."""

    base: int
    deriv: int = 0
    shift: int = 0

    def __post_init__(self):
        if self.base < 1:
            raise ValueError(f"variable index must be >= 1, got {self.base}")
        if self.deriv < 0:
            raise ValueError(f"derivative order must be >= 0, got {self.deriv}")
        if self.shift < -1:
            raise ValueError(f"shift must be >= -1, got {self.shift}")

    def shifted(self, q: int) -> "VarOcc":
        return VarOcc(self.base, self.deriv, self.shift + q)

    def differentiated(self, p: int) -> "VarOcc":
        return VarOcc(self.base, self.deriv + p, self.shift)


@dataclass(frozen=True)
class EqRef:
    """Identity and accumulated update counters of one equation.

    ``original_index`` is ``None`` for equations appended by the order
    reduction step; everything else keeps its 1-based input position.
    """

    name: str
    index: int
    shift_count: int = 0
    diff_count: int = 0
    original_index: Optional[int] = None

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("equation index must be >= 1")
        if self.shift_count < 0 or self.diff_count < 0:
            raise ValueError("update counters must be >= 0")


@dataclass(frozen=True)
class ClassKey:
    """Vertex identity of a variable class under some relation.

    Only the fields the relation groups by are populated; two keys compare
    equal exactly when relation and populated fields agree.
    """

    relation: RelationKind
    base: int
    deriv: Optional[int] = None
    shift: Optional[int] = None

    def sort_key(self) -> tuple:
        # -2 sits below every legal deriv/shift value, so absent fields sort first.
        d = self.deriv if self.deriv is not None else -2
        s = self.shift if self.shift is not None else -2
        return (self.base, d, s)


@dataclass(frozen=True)
class System:
    """Ordered equations with deduplicated occurrence sets."""

    equations: tuple[tuple[EqRef, frozenset[VarOcc]], ...]
    n_vars: int

    def __post_init__(self):
        names = set()
        for pos, (ref, occs) in enumerate(self.equations, start=1):
            if ref.index != pos:
                raise ValueError(
                    f"equation indices must be contiguous: {ref.name} has index "
                    f"{ref.index} at position {pos}"
                )
            if ref.name in names:
                raise ValueError(f"duplicate equation name {ref.name!r}")
            names.add(ref.name)
            for vo in occs:
                if vo.base > self.n_vars:
                    raise ValueError(
                        f"{ref.name} references x{vo.base} but the system has "
                        f"only {self.n_vars} variables"
                    )

    def __len__(self) -> int:
        return len(self.equations)

    def eqref(self, index: int) -> EqRef:
        return self.equations[index - 1][0]

    def occurrences(self, index: int) -> frozenset[VarOcc]:
        return self.equations[index - 1][1]

    def all_occurrences(self) -> Iterator[tuple[int, VarOcc]]:
        for ref, occs in self.equations:
            for vo in occs:
                yield ref.index, vo

    def names(self) -> tuple[str, ...]:
        return tuple(ref.name for ref, _ in self.equations)


def class_of(rel: RelationKind, vo: VarOcc) -> Optional[ClassKey]:
    """Class key of ``vo`` under ``rel``; ``None`` outside the relation's domain."""
    if rel is RelationKind.TRIVIAL:
        return ClassKey(rel, vo.base, deriv=vo.deriv, shift=vo.shift)
    if rel is RelationKind.SHIFT_SIMILAR:
        return ClassKey(rel, vo.base, shift=vo.shift)
    if rel is RelationKind.DIFF_SIMILAR:
        if vo.shift < 0:
            return None
        return ClassKey(rel, vo.base, deriv=vo.deriv)
    if rel in (RelationKind.EQUAL_DAE, RelationKind.EQUAL_DDAE):
        return ClassKey(rel, vo.base)
    if rel is RelationKind.EQUAL_RESTRICTED:
        if vo.shift != 0 or vo.deriv > 1:
            return None
        return ClassKey(rel, vo.base)
    raise ValueError(f"unknown relation {rel!r}")


def _replace_equation(sys: System, index: int, ref: EqRef,
                      occs: frozenset[VarOcc]) -> System:
    eqs = list(sys.equations)
    eqs[index - 1] = (ref, occs)
    return System(tuple(eqs), sys.n_vars)


def apply_shift(sys: System, eq_index: int, q: int) -> System:
    """Advance every occurrence of one equation by ``q`` delay multiples.

    No closure is involved: shifting maps occurrences one-to-one.
    """
    if q < 0:
        raise ValueError("shift amount must be >= 0")
    if q == 0:
        return sys
    ref, occs = sys.equations[eq_index - 1]
    new_ref = EqRef(ref.name, ref.index, ref.shift_count + q, ref.diff_count,
                    ref.original_index)
    return _replace_equation(sys, eq_index, new_ref,
                             frozenset(vo.shifted(q) for vo in occs))


def apply_diff(sys: System, eq_index: int, q: int) -> System:
    """Differentiate one equation ``q`` times.

    The chain rule keeps every original occurrence and adds all intermediate
    derivative orders, so the occurrence set becomes the closure
    ``{(b, d+p, s) : 0 <= p <= q}``.
    """
    if q < 0:
        raise ValueError("differentiation amount must be >= 0")
    if q == 0:
        return sys
    ref, occs = sys.equations[eq_index - 1]
    new_ref = EqRef(ref.name, ref.index, ref.shift_count, ref.diff_count + q,
                    ref.original_index)
    closure = frozenset(vo.differentiated(p) for vo in occs for p in range(q + 1))
    return _replace_equation(sys, eq_index, new_ref, closure)
