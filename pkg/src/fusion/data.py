"""Skeletal fusion-category data: fusion ring, F-symbols, dimensions, optional braiding.

Labels are integers 0..r-1 with 0 the unit. Fusion trees are left-nested:

* word ()        -> charge 0, one tree ``()``
* word (a,)      -> charge a, one tree ``()``
* word (a, b)    -> trees ``(alpha,)`` for a b -> m
* word (a, b, c) -> trees ``(e, alpha, beta)`` for (a b -> e, alpha), (e c -> m, beta)

Right-nested trees of a three-letter word are ``(f, gamma, delta)`` for
(b c -> f, gamma), (a f -> m, delta). An F-block ``F[(a, b, c, m)]`` has rows
indexed by left trees and columns by right trees: the right tree (f,γ,δ) equals
Σ F[(e,α,β), (f,γ,δ)] · left tree (e,α,β).
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from src.utils.errors import SchemaError, WordTooLong, ZeroDimension

logger = logging.getLogger(__name__)

Word = Tuple[int, ...]
Tree = Tuple[int, ...]
BlockKey = Tuple[int, int, int, int]
MAX_WORD = 3


@dataclass(frozen=True, eq=False)
class FusionRing:
    """Labels, duality involution and fusion multiplicities N[a, b, c]."""

    labels: Tuple[str, ...]
    dual: Tuple[int, ...]
    N: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def rank(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError as e:
            raise SchemaError(f"unknown label '{label}'") from e

    def channels(self, a: int, b: int) -> List[int]:
        return [c for c in range(self.rank) if self.N[a, b, c] > 0]

    def trees(self, word: Sequence[int], m: int) -> List[Tree]:
        """Left-nested trees of ``word`` with total charge ``m``."""
        key = ("L", tuple(word), m)
        if key not in self._cache:
            self._cache[key] = self._left_trees(tuple(word), m)
        return self._cache[key]

    def _left_trees(self, word: Word, m: int) -> List[Tree]:
        N = self.N
        if len(word) == 0:
            return [()] if m == 0 else []
        if len(word) == 1:
            return [()] if word[0] == m else []
        if len(word) == 2:
            return [(alpha,) for alpha in range(N[word[0], word[1], m])]
        if len(word) == 3:
            a, b, c = word
            return [
                (e, alpha, beta)
                for e in range(self.rank)
                for alpha in range(N[a, b, e])
                for beta in range(N[e, c, m])
            ]
        raise WordTooLong(f"word {word} has more than {MAX_WORD} letters")

    def right_trees(self, a: int, b: int, c: int, m: int) -> List[Tree]:
        key = ("R", (a, b, c), m)
        if key not in self._cache:
            N = self.N
            self._cache[key] = [
                (f, gamma, delta)
                for f in range(self.rank)
                for gamma in range(N[b, c, f])
                for delta in range(N[a, f, m])
            ]
        return self._cache[key]

    def charges(self, word: Sequence[int]) -> List[int]:
        return [m for m in range(self.rank) if self.trees(word, m)]

    def tree_index(self, word: Sequence[int], m: int) -> Dict[Tree, int]:
        key = ("I", tuple(word), m)
        if key not in self._cache:
            self._cache[key] = {t: i for i, t in enumerate(self.trees(word, m))}
        return self._cache[key]

    def right_index(self, a: int, b: int, c: int, m: int) -> Dict[Tree, int]:
        key = ("RI", (a, b, c), m)
        if key not in self._cache:
            self._cache[key] = {t: i for i, t in enumerate(self.right_trees(a, b, c, m))}
        return self._cache[key]


@dataclass(frozen=True, eq=False)
class FusionCategoryData:
    """The complete skeletal input. Immutable after construction."""

    name: str
    ring: FusionRing
    F: Dict[BlockKey, np.ndarray]
    dims: np.ndarray
    pivotal: np.ndarray
    R: Optional[Dict[Tuple[int, int, int], np.ndarray]] = None
    unitary: bool = False
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def rank(self) -> int:
        return self.ring.rank

    @property
    def braided(self) -> bool:
        return self.R is not None

    def dual(self, a: int) -> int:
        return self.ring.dual[a]

    def f_block(self, a: int, b: int, c: int, m: int) -> np.ndarray:
        """F^{abc}_m; an empty (0×0) array when the word has no trees to m."""
        block = self.F.get((a, b, c, m))
        if block is None:
            size = len(self.ring.trees((a, b, c), m))
            return np.zeros((size, size), dtype=complex)
        return block

    def f_inverse(self, a: int, b: int, c: int, m: int) -> np.ndarray:
        key = ("Finv", a, b, c, m)
        if key not in self._cache:
            self._cache[key] = np.linalg.inv(self.f_block(a, b, c, m))
        return self._cache[key]

    def r_block(self, a: int, b: int, c: int) -> np.ndarray:
        if self.R is None:
            raise SchemaError(f"category '{self.name}' carries no braiding")
        block = self.R.get((a, b, c))
        if block is None:
            return np.zeros((self.ring.N[b, a, c], self.ring.N[a, b, c]), dtype=complex)
        return block


def build_ring(labels: Sequence[str], dual: Sequence[int], entries: Mapping[Tuple[int, int, int], int]) -> FusionRing:
    r = len(labels)
    N = np.zeros((r, r, r), dtype=int)
    for (a, b, c), n in entries.items():
        N[a, b, c] = n
    return FusionRing(labels=tuple(labels), dual=tuple(dual), N=N)


def unit_constraint_errors(ring: FusionRing) -> List[str]:
    """Violations of N_{0i}^j = N_{i0}^j = δ_ij, N_{ij}^0 = δ_{j,ī}, dual(0) = 0."""
    problems = []
    r = ring.rank
    eye = np.eye(r, dtype=int)
    if ring.dual[0] != 0:
        problems.append("dual of the unit must be the unit")
    if any(ring.dual[ring.dual[a]] != a for a in range(r)):
        problems.append("duality is not an involution")
    if not np.array_equal(ring.N[0], eye):
        problems.append("N_{0,i}^j must equal δ_ij")
    if not np.array_equal(ring.N[:, 0, :], eye):
        problems.append("N_{i,0}^j must equal δ_ij")
    for i in range(r):
        expected = np.zeros(r, dtype=int)
        expected[ring.dual[i]] = 1
        if not np.array_equal(ring.N[i, :, 0], expected):
            problems.append(f"N_{{{ring.labels[i]},j}}^0 must equal δ_(j, dual)")
    return problems


def default_f_blocks(ring: FusionRing) -> Dict[BlockKey, np.ndarray]:
    """All F-blocks set to zero, except unit-constrained blocks which are the identity."""
    blocks = {}
    r = ring.rank
    for a in range(r):
        for b in range(r):
            for c in range(r):
                for m in range(r):
                    n_left = len(ring.trees((a, b, c), m))
                    if n_left == 0:
                        continue
                    if 0 in (a, b, c):
                        blocks[(a, b, c, m)] = np.eye(n_left, dtype=complex)
                    else:
                        blocks[(a, b, c, m)] = np.zeros((n_left, n_left), dtype=complex)
    return blocks


def default_r_blocks(ring: FusionRing) -> Dict[Tuple[int, int, int], np.ndarray]:
    blocks = {}
    r = ring.rank
    for a in range(r):
        for b in range(r):
            for c in ring.channels(a, b):
                if 0 in (a, b):
                    blocks[(a, b, c)] = np.eye(ring.N[a, b, c], dtype=complex)
                else:
                    blocks[(a, b, c)] = np.zeros((ring.N[b, a, c], ring.N[a, b, c]), dtype=complex)
    return blocks


def global_dimension(cat: FusionCategoryData, tolerance: float = 1e-9) -> Tuple[complex, complex]:
    """dim C = Σ d_i² and the fixed square root λ.

    λ is the principal root when Re(dim C) > 0, otherwise the root with Im ≥ 0.
    """
    dim_c = complex(np.sum(cat.dims ** 2))
    if abs(dim_c) <= tolerance:
        raise ZeroDimension(f"dim C = {dim_c:.3e} vanishes")
    lam = complex(np.sqrt(dim_c))
    if dim_c.real <= 0 and lam.imag < 0:
        lam = -lam
    return dim_c, lam


def vec_group_category(table: np.ndarray, inverse: Sequence[int], identity: int = 0, name: str = "Vec_G",
                       labels: Optional[Sequence[str]] = None) -> FusionCategoryData:
    """Vec_G with trivial associator; labels follow the table order with the identity moved to 0."""
    n = table.shape[0]
    order = [identity] + [g for g in range(n) if g != identity]
    position = {g: i for i, g in enumerate(order)}
    entries = {
        (position[g], position[h], position[int(table[g, h])]): 1 for g in range(n) for h in range(n)
    }
    names = list(labels) if labels is not None else [f"g{g}" for g in order]
    dual = [position[int(inverse[g])] for g in order]
    ring = build_ring(names, dual, entries)
    blocks = default_f_blocks(ring)
    for key, block in blocks.items():
        blocks[key] = np.ones_like(block)
    return FusionCategoryData(
        name=name, ring=ring, F=blocks, dims=np.ones(n, dtype=complex),
        pivotal=np.ones(n, dtype=complex), unitary=True,
    )


def gauge_transform(cat: FusionCategoryData, vertex: Mapping[Tuple[int, int, int], Sequence[complex]]) -> FusionCategoryData:
    """Applies the diagonal gauge t_{ab}^{c,α} -> u_{ab}^{c}[α] · t_{ab}^{c,α}.

    Vertices not listed keep factor 1; unit vertices must keep factor 1 so the
    unit blocks stay the identity.
    """
    ring = cat.ring

    def u(a: int, b: int, c: int, alpha: int) -> complex:
        values = vertex.get((a, b, c))
        return complex(values[alpha]) if values is not None else 1.0

    blocks = {}
    for (a, b, c, m), block in cat.F.items():
        new = block.astype(complex).copy()
        for i, (e, alpha, beta) in enumerate(ring.trees((a, b, c), m)):
            for j, (f, gamma, delta) in enumerate(ring.right_trees(a, b, c, m)):
                new[i, j] *= u(b, c, f, gamma) * u(a, f, m, delta) / (u(a, b, e, alpha) * u(e, c, m, beta))
        blocks[(a, b, c, m)] = new

    braid = None
    if cat.R is not None:
        braid = {}
        for (a, b, c), block in cat.R.items():
            new = block.astype(complex).copy()
            for i in range(new.shape[0]):
                for j in range(new.shape[1]):
                    new[i, j] *= u(a, b, c, j) / u(b, a, c, i)
            braid[(a, b, c)] = new

    logger.info(f"Gauge transform applied to '{cat.name}' on {len(vertex)} vertices.")
    return FusionCategoryData(
        name=f"{cat.name} (gauged)", ring=ring, F=blocks, dims=cat.dims.copy(),
        pivotal=cat.pivotal.copy(), R=braid, unitary=cat.unitary,
    )
