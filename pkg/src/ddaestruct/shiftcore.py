"""Machinery specific to the shifting step.

When a shifting-graph search fails, the colored equations are connected only
through equivalence classes: two equations may touch the same class at
different derivative orders.  Before shifting, some of them must be
differentiated so that every class link used by a connection becomes a direct
common occurrence.  The required counts solve a small integer program whose
equality constraints form a tree, so the unique componentwise-minimal
nonnegative solution is found by propagating potentials and lifting.

The order-reduction step (``trimmed_linearization``) lives here as well: it
rewrites derivative orders above one into fresh variables and appends shifted
coupling equations that keep the shifting graph saturable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .bigraph import GraphView
from .matching import ColorState, Matching
from .model import ClassKey, EqRef, System, VarOcc, class_of


class InvalidConnection(RuntimeError):
    """A connection triple references a class absent from an endpoint.

    Cannot happen for connections produced by ``find_connections``; signals an
    internal error."""


class InconsistentSystem(RuntimeError):
    """Potential propagation met a contradiction; the rows were not a tree."""


@dataclass(frozen=True)
class Connection:
    """One way of wiring the colored set into alternating length-2 paths.

    Each triple ``(parent, via, child)`` pairs the matching edge
    ``(via, child)`` with a non-matching edge ``(parent, via)``; every matched
    pair of the colored set occurs in exactly one triple and the triples form
    a tree rooted at the exposed equation.
    """

    exposed: int
    triples: tuple[tuple[int, ClassKey, int], ...]

    def members(self) -> tuple[int, ...]:
        found = {self.exposed}
        for parent, _, child in self.triples:
            found.add(parent)
            found.add(child)
        return tuple(sorted(found))


@dataclass(frozen=True)
class NuSystem:
    """Difference constraints ``nu[a] - nu[b] = rhs`` over the colored equations.

    ``unknowns`` lists equation indices ascending; rows address positions in
    that list.  For a well-formed connection there are ``K - 1`` rows whose
    constraint graph spans the unknowns.
    """

    unknowns: tuple[int, ...]
    rows: tuple[tuple[int, int, int], ...]


def find_connections(sys: System, view: GraphView, assign: Matching,
                     colors: ColorState, exposed: int) -> tuple[Connection, ...]:
    """Enumerate every connection for the exposed equation.

    Parents are drawn from the colored set itself.  Enumeration is the full
    cartesian product of per-pair parent choices filtered for connectivity,
    exponential in the colored set size in the worst case; instances are
    desk-scale.
    """
    members = sorted(colors.equations)
    matched_keys = {
        eq: key for key, eq in assign.items()
        if eq in colors.equations and key in colors.classes
    }
    children = [eq for eq in members if eq != exposed]
    if not children:
        return (Connection(exposed, ()),)

    choices: list[list[tuple[int, ClassKey, int]]] = []
    for child in children:
        key = matched_keys[child]
        cpos = view.parent.position(key)
        parents = [
            eq for eq in members
            if eq != child and (eq, cpos) in view.parent.edges
        ]
        choices.append([(parent, key, child) for parent in parents])

    connections = []
    for combo in itertools.product(*choices):
        links: dict[int, set[int]] = {eq: set() for eq in members}
        for parent, _, child in combo:
            links[parent].add(child)
            links[child].add(parent)
        seen = {exposed}
        stack = [exposed]
        while stack:
            for other in links[stack.pop()]:
                if other not in seen:
                    seen.add(other)
                    stack.append(other)
        if len(seen) == len(members):
            connections.append(Connection(exposed, tuple(combo)))
    return tuple(connections)


def _max_deriv_at(sys: System, eq_index: int, base: int, shift: int) -> int:
    levels = [vo.deriv for vo in sys.occurrences(eq_index)
              if vo.base == base and vo.shift == shift]
    if not levels:
        raise InvalidConnection(
            f"equation {eq_index} has no occurrence of x{base}@{shift}"
        )
    return max(levels)


def build_nu_system(conn: Connection, sys: System) -> NuSystem:
    """Difference constraints making every connection link direct.

    A triple with parent ``a`` and child ``b`` through the class of ``x`` at
    shift ``s`` yields ``nu[a] - nu[b] = q_b - q_a`` where ``q_e`` is the
    highest derivative of ``x`` at shift ``s`` occurring in equation ``e``:
    after differentiating, both endpoints reach the same occurrence level.
    """
    unknowns = conn.members()
    pos = {eq: i for i, eq in enumerate(unknowns)}
    rows = []
    for parent, key, child in conn.triples:
        q_parent = _max_deriv_at(sys, parent, key.base, key.shift)
        q_child = _max_deriv_at(sys, child, key.base, key.shift)
        rows.append((pos[parent], pos[child], q_child - q_parent))
    return NuSystem(unknowns, tuple(rows))


def solve_min_nonneg(nu: NuSystem) -> tuple[int, ...]:
    """Unique componentwise-minimal nonnegative integer solution.

    Propagate potentials over the constraint tree from the first unknown,
    then lift by the negated minimum so the smallest component is zero.  The
    feasible set is a line in the all-ones direction, so this dominates every
    nonnegative solution componentwise.
    """
    k = len(nu.unknowns)
    values: dict[int, int] = {0: 0} if k else {}
    adjacency: dict[int, list[tuple[int, int]]] = {i: [] for i in range(k)}
    for a, b, rhs in nu.rows:
        adjacency[a].append((b, -rhs))   # nu[b] = nu[a] - rhs
        adjacency[b].append((a, rhs))    # nu[a] = nu[b] + rhs
    stack = [0] if k else []
    while stack:
        node = stack.pop()
        for other, delta in adjacency[node]:
            candidate = values[node] + delta
            if other in values:
                if values[other] != candidate:
                    raise InconsistentSystem("contradictory difference constraints")
            else:
                values[other] = candidate
                stack.append(other)
    if len(values) != k:
        raise InconsistentSystem("constraint rows do not span the unknowns")
    lift = -min(values.values()) if k else 0
    solution = tuple(values[i] + lift for i in range(k))
    for a, b, rhs in nu.rows:
        if solution[a] - solution[b] != rhs:
            raise InconsistentSystem("propagated solution violates a row")
    return solution


def diff_during_shift(sys: System, view: GraphView, assign: Matching,
                      colors: ColorState, exposed: int) -> dict[int, int]:
    """Differentiation counts owed before the colored equations are shifted.

    One minimal solution per connection; each equation takes the maximum over
    connections.  The caller applies the counts to the system (the shifting
    graph is unaffected by them).
    """
    counts: dict[int, int] = {eq: 0 for eq in sorted(colors.equations)}
    for conn in find_connections(sys, view, assign, colors, exposed):
        solution = solve_min_nonneg(build_nu_system(conn, sys))
        for eq, value in zip(conn.members(), solution):
            counts[eq] = max(counts[eq], value)
    return counts


@dataclass(frozen=True)
class LinearizationAddition:
    """Record of one coupling equation appended by the order reduction."""

    eq_name: str
    new_var: int
    couples_base: int
    shift: int


def _fresh_names(taken: set[str], count: int, start: int) -> list[str]:
    names = []
    candidate = start
    while len(names) < count:
        name = f"F{candidate}"
        if name not in taken:
            names.append(name)
            taken.add(name)
        candidate += 1
    return names


def trimmed_linearization(sys: System) -> tuple[System, tuple[LinearizationAddition, ...]]:
    """Rewrite derivative orders above one into fresh chained variables.

    For each base ``i`` whose undelayed occurrences reach order ``q >= 2``,
    orders ``1..q-1`` become fresh variables ``y_1..y_{q-1}`` and order ``q``
    becomes the first derivative of ``y_{q-1}``; the coupling equations
    ``y_p = d/dt y_{p-1}`` are appended shifted to the highest level where the
    replaced order still occurs, which keeps the shifting graph saturable.
    No-op when every base stays at order <= 1.
    """
    max_deriv: dict[int, int] = {}
    for _, vo in sys.all_occurrences():
        if vo.shift >= 0:
            max_deriv[vo.base] = max(max_deriv.get(vo.base, 0), vo.deriv)
    targets = sorted(base for base, q in max_deriv.items() if q >= 2)
    if not targets:
        return sys, ()

    replacements: dict[tuple[int, int], tuple[int, int]] = {}
    new_equations: list[tuple[EqRef, frozenset[VarOcc]]] = []
    additions: list[LinearizationAddition] = []
    next_var = sys.n_vars
    taken = set(sys.names())
    next_index = len(sys.equations) + 1

    for base in targets:
        q = max_deriv[base]
        levels = {}
        for p in range(1, q + 1):
            levels[p] = max(vo.shift for _, vo in sys.all_occurrences()
                            if vo.base == base and vo.shift >= 0 and vo.deriv >= p)
        fresh = list(range(next_var + 1, next_var + q))
        next_var += q - 1
        for p in range(1, q):
            replacements[(base, p)] = (fresh[p - 1], 0)
        replacements[(base, q)] = (fresh[-1], 1)

        names = _fresh_names(taken, q - 1, next_index + len(new_equations))
        for p in range(1, q):
            lhs_base = base if p == 1 else fresh[p - 2]
            ref = EqRef(names[p - 1], next_index + len(new_equations),
                        shift_count=levels[p], diff_count=0, original_index=None)
            occs = frozenset({
                VarOcc(lhs_base, 1, levels[p]),
                VarOcc(fresh[p - 1], 0, levels[p]),
            })
            new_equations.append((ref, occs))
            additions.append(LinearizationAddition(ref.name, fresh[p - 1],
                                                   lhs_base, levels[p]))

    rewritten = []
    for ref, occs in sys.equations:
        new_occs = frozenset(
            VarOcc(*replacements[(vo.base, vo.deriv)], vo.shift)
            if (vo.base, vo.deriv) in replacements else vo
            for vo in occs
        )
        rewritten.append((ref, new_occs))
    rewritten.extend(new_equations)
    return System(tuple(rewritten), next_var), tuple(additions)
