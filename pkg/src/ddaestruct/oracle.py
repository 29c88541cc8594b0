"""Brute-force reference checks backing the matching-based fast paths.

These enumerate equation subsets directly from the singularity definition: a
subset is singular when it outnumbers the equivalence classes of the variables
occurring in it.  Exponential in the equation count; capped and meant for
tests and the CLI verification flag, not for scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional

from .model import RelationKind, System, class_of

SIZE_CAP = 20


class TooLarge(ValueError):
    """System exceeds the brute-force size cap."""


@dataclass(frozen=True)
class SubsetWitness:
    equations: tuple[int, ...]
    class_count: int
    equation_count: int


def _class_count(sys: System, rel: RelationKind, subset: tuple[int, ...]) -> int:
    keys = set()
    for eq_index in subset:
        for vo in sys.occurrences(eq_index):
            key = class_of(rel, vo)
            if key is not None:
                keys.add(key)
    return len(keys)


def brute_singular(sys: System, rel: RelationKind) -> Optional[SubsetWitness]:
    """Smallest (then lexicographically first) singular subset, or ``None``.

    Classes are always re-restricted to the subset's own occurrences.
    """
    m = len(sys)
    if m > SIZE_CAP:
        raise TooLarge(f"{m} equations exceed the brute-force cap of {SIZE_CAP}")
    indices = range(1, m + 1)
    for size in range(1, m + 1):
        for subset in combinations(indices, size):
            if size > _class_count(sys, rel, subset):
                return SubsetWitness(subset, _class_count(sys, rel, subset), size)
    return None


def is_mss(sys: System, rel: RelationKind, subset: Iterable[int]) -> bool:
    """True when ``subset`` is singular and every proper subset is not."""
    chosen = tuple(sorted(set(subset)))
    if not chosen:
        raise ValueError("subset must be nonempty")
    if len(chosen) <= _class_count(sys, rel, chosen):
        return False
    for size in range(1, len(chosen)):
        for smaller in combinations(chosen, size):
            if len(smaller) > _class_count(sys, rel, smaller):
                return False
    return True
