"""Finite groups given by multiplication tables."""
import logging
from dataclasses import dataclass
from itertools import permutations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.data_processing.schemas import GroupFile
from src.fusion.data import FusionCategoryData, vec_group_category
from src.utils.errors import InvalidGroup, NotAGroupCategory

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class GroupSpec:
    """A group with elements 0..n-1; ``table[g, h]`` is the index of gh."""

    name: str
    table: np.ndarray
    identity: int
    inverse: Tuple[int, ...]
    labels: Tuple[str, ...]

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def mul(self, g: int, h: int) -> int:
        return int(self.table[g, h])

    def conj(self, x: int, g: int) -> int:
        """x g x⁻¹."""
        return self.mul(self.mul(x, g), self.inverse[x])

    def element_order(self, g: int) -> int:
        power, k = g, 1
        while power != self.identity:
            power = self.mul(power, g)
            k += 1
        return k


def group_from_table(table: Sequence[Sequence[int]], name: str = "G",
                     labels: Optional[Sequence[str]] = None) -> GroupSpec:
    """Checks closure, associativity, identity and inverses exactly."""
    arr = np.asarray(table, dtype=int)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise InvalidGroup(f"multiplication table must be a non-empty square array, got shape {arr.shape}")
    n = arr.shape[0]
    if arr.min() < 0 or arr.max() >= n:
        raise InvalidGroup("table entries must lie in 0..n-1")
    if not np.array_equal(arr[arr[:, :, None], np.arange(n)[None, None, :]],
                          arr[np.arange(n)[:, None, None], arr[None, :, :]]):
        raise InvalidGroup("multiplication is not associative")
    identities = [e for e in range(n) if np.array_equal(arr[e], np.arange(n)) and np.array_equal(arr[:, e], np.arange(n))]
    if not identities:
        raise InvalidGroup("no identity element")
    e = identities[0]
    inverse = []
    for g in range(n):
        candidates = [h for h in range(n) if arr[g, h] == e and arr[h, g] == e]
        if not candidates:
            raise InvalidGroup(f"element {g} has no inverse")
        inverse.append(candidates[0])
    names = tuple(labels) if labels is not None else tuple(f"g{g}" for g in range(n))
    return GroupSpec(name=name, table=arr, identity=e, inverse=tuple(inverse), labels=names)


def cyclic_group(n: int) -> GroupSpec:
    table = [[(g + h) % n for h in range(n)] for g in range(n)]
    return group_from_table(table, name=f"Z{n}", labels=[str(g) for g in range(n)])


def symmetric_group(n: int) -> GroupSpec:
    """S_n on lexicographically ordered permutations, (p·q)(i) = p(q(i))."""
    elements = list(permutations(range(n)))
    position = {p: i for i, p in enumerate(elements)}
    table = [[position[tuple(p[q[i]] for i in range(n))] for q in elements] for p in elements]
    labels = ["".join(str(x) for x in p) for p in elements]
    return group_from_table(table, name=f"S{n}", labels=labels)


def group_from_file(spec: GroupFile) -> GroupSpec:
    if spec.cyclic is not None:
        return cyclic_group(spec.cyclic)
    if spec.symmetric is not None:
        return symmetric_group(spec.symmetric)
    return group_from_table(spec.table, name=f"G{len(spec.table)}")


def group_category(group: GroupSpec) -> FusionCategoryData:
    """Vec_G with trivial associator."""
    return vec_group_category(group.table, group.inverse, identity=group.identity,
                              name=f"Vec_{group.name}",
                              labels=[group.labels[group.identity]]
                              + [group.labels[g] for g in range(group.order) if g != group.identity])


def find_isomorphism(source: np.ndarray, target: np.ndarray) -> Optional[List[int]]:
    """A bijection φ with φ(source[a, b]) = target[φ(a), φ(b)], by backtracking; None if none exists."""
    n = source.shape[0]
    if target.shape != source.shape:
        return None
    assignment: Dict[int, int] = {}

    def consistent() -> bool:
        for a, fa in assignment.items():
            for b, fb in assignment.items():
                c = int(source[a, b])
                if c in assignment and assignment[c] != target[fa, fb]:
                    return False
        return True

    def extend(a: int) -> bool:
        if a == n:
            return True
        used = set(assignment.values())
        for candidate in range(n):
            if candidate in used:
                continue
            assignment[a] = candidate
            if consistent() and extend(a + 1):
                return True
            del assignment[a]
        return False

    return [assignment[a] for a in range(n)] if extend(0) else None


def group_of_category(cat: FusionCategoryData, group: GroupSpec, tolerance: float = 1e-9) -> List[int]:
    """Identifies the labels of a pointed category with trivial data as elements of ``group``.

    Returns the map label -> group element; raises ``NotAGroupCategory`` otherwise.
    """
    N = cat.ring.N
    if np.any(N.sum(axis=2) != 1):
        raise NotAGroupCategory(f"'{cat.name}' has non-invertible simple objects")
    if np.max(np.abs(cat.dims - 1.0)) > tolerance:
        raise NotAGroupCategory(f"'{cat.name}' has dimensions different from 1")
    if any(block.size and np.max(np.abs(block - 1.0)) > tolerance for block in cat.F.values()):
        raise NotAGroupCategory(f"'{cat.name}' has a non-trivial associator")
    fusion_table = np.argmax(N, axis=2)
    mapping = find_isomorphism(fusion_table, group.table)
    if mapping is None:
        raise NotAGroupCategory(f"fusion rules of '{cat.name}' are not those of {group.name}")
    logger.info(f"Labels of '{cat.name}' identified with {group.name}: {mapping}")
    return mapping
