"""String-diagram evaluation for words of at most three simple labels.

A ``SkeletalMorphism`` stores, for every total charge m shared by its domain
and codomain, the matrix of the morphism in left-nested tree bases: column j is
the j-th domain tree, row i the i-th codomain tree. The coefficient of
"codomain tree i composed with dual of domain tree j" is ``blocks[m][i, j]``.

Tensor products are first written in the product basis (tree ⊗ tree, then a
vertex joining the two charges) and converted to left-nested trees; only the
split of a three-letter word as 1 + 2 needs an F-move.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from src.fusion.data import MAX_WORD, FusionCategoryData, Word
from src.utils.errors import DegenerateBasis, ShapeMismatch, SingularF, WordTooLong

logger = logging.getLogger(__name__)

# F-blocks with a condition number beyond this are treated as singular.
MAX_CONDITION = 1e12


@dataclass(frozen=True, eq=False)
class SkeletalMorphism:
    dom: Word
    cod: Word
    blocks: Dict[int, np.ndarray]

    def _combine(self, other: "SkeletalMorphism", sign: float) -> "SkeletalMorphism":
        _same_type(self, other)
        blocks = {m: b.copy() for m, b in self.blocks.items()}
        for m, b in other.blocks.items():
            blocks[m] = blocks[m] + sign * b if m in blocks else sign * b
        return SkeletalMorphism(self.dom, self.cod, blocks)

    def __add__(self, other: "SkeletalMorphism") -> "SkeletalMorphism":
        return self._combine(other, 1.0)

    def __sub__(self, other: "SkeletalMorphism") -> "SkeletalMorphism":
        return self._combine(other, -1.0)

    def __mul__(self, scalar: complex) -> "SkeletalMorphism":
        return SkeletalMorphism(self.dom, self.cod, {m: scalar * b for m, b in self.blocks.items()})

    __rmul__ = __mul__

    def max_abs(self) -> float:
        return max((float(np.max(np.abs(b), initial=0.0)) for b in self.blocks.values()), default=0.0)

    def flat(self) -> np.ndarray:
        """Coordinates in block order (charges ascending, row-major)."""
        parts = [self.blocks[m].reshape(-1) for m in sorted(self.blocks)]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=complex)

    def scalar(self) -> complex:
        """The Schur scalar of an endomorphism of a one-letter word (or of the unit)."""
        if self.dom != self.cod or len(self.dom) > 1:
            raise ShapeMismatch(f"scalar() needs an endomorphism of a simple, got {self.dom}->{self.cod}")
        m = self.dom[0] if self.dom else 0
        return complex(self.blocks[m][0, 0])


def _same_type(f: SkeletalMorphism, g: SkeletalMorphism) -> None:
    if f.dom != g.dom or f.cod != g.cod:
        raise ShapeMismatch(f"{f.dom}->{f.cod} vs {g.dom}->{g.cod}")


def _check_word(word: Sequence[int]) -> Word:
    word = tuple(int(x) for x in word)
    if len(word) > MAX_WORD:
        raise WordTooLong(f"word {word} has more than {MAX_WORD} letters")
    return word


def compose(f: SkeletalMorphism, g: SkeletalMorphism) -> SkeletalMorphism:
    """f ∘ g, blockwise matrix product."""
    if g.cod != f.dom:
        raise ShapeMismatch(f"cannot compose {f.dom}->{f.cod} after {g.dom}->{g.cod}")
    blocks = {}
    for m, gb in g.blocks.items():
        fb = f.blocks.get(m)
        if fb is not None:
            blocks[m] = fb @ gb
    return SkeletalMorphism(g.dom, f.cod, blocks)


def chain(*morphisms: SkeletalMorphism) -> SkeletalMorphism:
    """chain(f, g, h) = f ∘ g ∘ h."""
    result = morphisms[-1]
    for f in reversed(morphisms[:-1]):
        result = compose(f, result)
    return result


class DiagramCalculus:
    """Morphism calculus over one fusion category; caches cups, caps and F-moves."""

    def __init__(self, cat: FusionCategoryData):
        self.cat = cat
        self.ring = cat.ring
        self._product_cache: Dict[Tuple[Word, Word, int], Tuple[np.ndarray, np.ndarray]] = {}
        self._cup_cache: Dict[Tuple[str, int], SkeletalMorphism] = {}

    # --- spaces and elementary morphisms ---

    def hom_dim(self, dom: Sequence[int], cod: Sequence[int]) -> int:
        dom, cod = _check_word(dom), _check_word(cod)
        return sum(len(self.ring.trees(dom, m)) * len(self.ring.trees(cod, m)) for m in range(self.ring.rank))

    def common_charges(self, dom: Word, cod: Word) -> List[int]:
        return [m for m in range(self.ring.rank) if self.ring.trees(dom, m) and self.ring.trees(cod, m)]

    def zero(self, dom: Sequence[int], cod: Sequence[int]) -> SkeletalMorphism:
        dom, cod = _check_word(dom), _check_word(cod)
        return SkeletalMorphism(dom, cod, {
            m: np.zeros((len(self.ring.trees(cod, m)), len(self.ring.trees(dom, m))), dtype=complex)
            for m in self.common_charges(dom, cod)
        })

    def identity(self, word: Sequence[int]) -> SkeletalMorphism:
        word = _check_word(word)
        return SkeletalMorphism(word, word, {
            m: np.eye(len(self.ring.trees(word, m)), dtype=complex) for m in self.ring.charges(word)
        })

    def from_flat(self, dom: Sequence[int], cod: Sequence[int], values: np.ndarray) -> SkeletalMorphism:
        """Inverse of ``SkeletalMorphism.flat``."""
        out = self.zero(dom, cod)
        offset = 0
        for m in sorted(out.blocks):
            size = out.blocks[m].size
            out.blocks[m][...] = np.asarray(values[offset:offset + size]).reshape(out.blocks[m].shape)
            offset += size
        return out

    def random(self, dom: Sequence[int], cod: Sequence[int], rng: np.random.Generator) -> SkeletalMorphism:
        out = self.zero(dom, cod)
        for m, block in out.blocks.items():
            block[...] = rng.standard_normal(block.shape) + 1j * rng.standard_normal(block.shape)
        return out

    def split(self, a: int, b: int, m: int, alpha: int = 0) -> SkeletalMorphism:
        """The basis vertex t_{ab}^{m,alpha} : (m) -> (a, b)."""
        out = self.zero((m,), (a, b))
        out.blocks[m][alpha, 0] = 1.0
        return out

    def fuse(self, a: int, b: int, m: int, alpha: int = 0) -> SkeletalMorphism:
        """The dual vertex t'_{ab}^{m,alpha} : (a, b) -> (m), with t' ∘ t = δ."""
        out = self.zero((a, b), (m,))
        out.blocks[m][0, alpha] = 1.0
        return out

    # --- F-moves and tensor products ---

    def f_move(self, word: Sequence[int], m: int, source: str = "right", target: str = "left") -> np.ndarray:
        """Change of basis between right-nested and left-nested trees of a three-letter word."""
        word = _check_word(word)
        if len(word) != 3:
            raise ShapeMismatch(f"f_move needs a three-letter word, got {word}")
        block = self.cat.f_block(*word, m)
        if block.size and np.linalg.cond(block) > MAX_CONDITION:
            raise SingularF(f"F-block {word}->{m} is singular")
        if source == target:
            return np.eye(block.shape[0], dtype=complex)
        if (source, target) == ("right", "left"):
            return block
        if (source, target) == ("left", "right"):
            return self.cat.f_inverse(*word, m)
        raise ValueError(f"unknown association pair {source!r} -> {target!r}")

    def _product_basis(self, w1: Word, w2: Word, m: int) -> Tuple[np.ndarray, np.ndarray]:
        """(P, P⁻¹): P maps product-basis coordinates of w1⊗w2 at charge m to left-tree coordinates."""
        key = (w1, w2, m)
        cached = self._product_cache.get(key)
        if cached is not None:
            return cached
        ring = self.ring
        word = w1 + w2
        rows = ring.tree_index(word, m)
        elements = self.product_elements(w1, w2, m)
        P = np.zeros((len(rows), len(elements)), dtype=complex)
        for col, (m1, s1, m2, s2, gamma) in enumerate(elements):
            t1 = ring.trees(w1, m1)[s1]
            t2 = ring.trees(w2, m2)[s2]
            if len(w1) == 0:
                P[rows[t2], col] = 1.0
            elif len(w2) == 0:
                P[rows[t1], col] = 1.0
            elif len(w1) == 1 and len(w2) == 1:
                P[rows[(gamma,)], col] = 1.0
            elif len(w1) == 2 and len(w2) == 1:
                P[rows[(m1, t1[0], gamma)], col] = 1.0
            else:  # 1 + 2: right-nested tree, rewrite with F
                right = ring.right_index(*word, m)[(m2, t2[0], gamma)]
                P[:, col] = self.f_move(word, m)[:, right]
        result = (P, np.linalg.inv(P))
        self._product_cache[key] = result
        return result

    def product_elements(self, w1: Word, w2: Word, m: int) -> List[Tuple[int, int, int, int, int]]:
        ring = self.ring
        return [
            (m1, s1, m2, s2, gamma)
            for m1 in ring.charges(w1)
            for s1 in range(len(ring.trees(w1, m1)))
            for m2 in ring.charges(w2)
            for s2 in range(len(ring.trees(w2, m2)))
            for gamma in range(ring.N[m1, m2, m])
        ]

    def tensor(self, f: SkeletalMorphism, g: SkeletalMorphism) -> SkeletalMorphism:
        """f ⊗ g re-expressed in left-nested trees."""
        dom, cod = f.dom + g.dom, f.cod + g.cod
        if len(dom) > MAX_WORD or len(cod) > MAX_WORD:
            raise WordTooLong(f"tensor product {dom}->{cod} exceeds {MAX_WORD} letters")
        out = {}
        for m in self.common_charges(dom, cod):
            rows = self.product_elements(f.cod, g.cod, m)
            cols = self.product_elements(f.dom, g.dom, m)
            prod = np.zeros((len(rows), len(cols)), dtype=complex)
            for i, (m1, s1, m2, s2, gamma) in enumerate(rows):
                fb, gb = f.blocks.get(m1), g.blocks.get(m2)
                if fb is None or gb is None:
                    continue
                for j, (n1, r1, n2, r2, delta) in enumerate(cols):
                    if n1 == m1 and n2 == m2 and delta == gamma:
                        prod[i, j] = fb[s1, r1] * gb[s2, r2]
            p_cod, _ = self._product_basis(f.cod, g.cod, m)
            _, p_dom_inv = self._product_basis(f.dom, g.dom, m)
            out[m] = p_cod @ prod @ p_dom_inv
        return SkeletalMorphism(dom, cod, out)

    # --- duality ---

    def cup(self, a: int) -> SkeletalMorphism:
        """coev_a : () -> (a, ā), coefficient = pivotal coefficient of a."""
        key = ("cup", a)
        if key not in self._cup_cache:
            out = self.zero((), (a, self.cat.dual(a)))
            out.blocks[0][0, 0] = self.cat.pivotal[a]
            self._cup_cache[key] = out
        return self._cup_cache[key]

    def cap_coefficient(self, a: int) -> complex:
        abar = self.cat.dual(a)
        word = (abar, a, abar)
        left = self.ring.tree_index(word, abar)[(0, 0, 0)]
        right = self.ring.right_index(*word, abar)[(0, 0, 0)]
        return 1.0 / (self.cat.pivotal[a] * self.cat.f_block(*word, abar)[left, right])

    def cap(self, a: int) -> SkeletalMorphism:
        """ev_a : (ā, a) -> (), fixed by (ev_a ⊗ id_ā)(id_ā ⊗ coev_a) = id_ā."""
        key = ("cap", a)
        if key not in self._cup_cache:
            out = self.zero((self.cat.dual(a), a), ())
            out.blocks[0][0, 0] = self.cap_coefficient(a)
            self._cup_cache[key] = out
        return self._cup_cache[key]

    def cap_reflected(self, a: int) -> SkeletalMorphism:
        """ev'_a : (a, ā) -> (), normalised so that ev'_a ∘ coev_a = d_a."""
        out = self.zero((a, self.cat.dual(a)), ())
        out.blocks[0][0, 0] = self.cat.dims[a] / self.cat.pivotal[a]
        return out

    def cup_reflected(self, a: int) -> SkeletalMorphism:
        """coev'_a : () -> (ā, a), the partner of ``cap_reflected``."""
        abar = self.cat.dual(a)
        out = self.zero((), (abar, a))
        out.blocks[0][0, 0] = (
            self.cat.pivotal[abar] * self.cap_coefficient(abar) * self.cat.pivotal[a] / self.cat.dims[a]
        )
        return out

    def zigzag_residuals(self, a: int) -> Tuple[float, float]:
        abar = self.cat.dual(a)
        first = chain(self.tensor(self.identity((a,)), self.cap(a)), self.tensor(self.cup(a), self.identity((a,))))
        second = chain(self.tensor(self.cap(a), self.identity((abar,))), self.tensor(self.identity((abar,)), self.cup(a)))
        return (first - self.identity((a,))).max_abs(), (second - self.identity((abar,))).max_abs()

    def loops(self, a: int) -> Tuple[complex, complex]:
        """(left loop ev_a ∘ coev'_a, right loop ev'_a ∘ coev_a)."""
        left = compose(self.cap(a), self.cup_reflected(a)).scalar()
        right = compose(self.cap_reflected(a), self.cup(a)).scalar()
        return left, right

    # --- traces ---

    def trace(self, f: SkeletalMorphism) -> complex:
        """Σ_m d_m tr(block_m)."""
        if f.dom != f.cod:
            raise ShapeMismatch(f"trace needs an endomorphism, got {f.dom}->{f.cod}")
        return complex(sum(self.cat.dims[m] * np.trace(b) for m, b in f.blocks.items()))

    def partial_trace_right(self, f: SkeletalMorphism) -> SkeletalMorphism:
        if f.dom != f.cod or not f.dom:
            raise ShapeMismatch("right partial trace needs an endomorphism of a non-empty word")
        *rest, b = f.dom
        rest = tuple(rest)
        bbar = self.cat.dual(b)
        return chain(
            self.tensor(self.identity(rest), self.cap_reflected(b)),
            self.tensor(f, self.identity((bbar,))),
            self.tensor(self.identity(rest), self.cup(b)),
        )

    def partial_trace_left(self, f: SkeletalMorphism) -> SkeletalMorphism:
        if f.dom != f.cod or not f.dom:
            raise ShapeMismatch("left partial trace needs an endomorphism of a non-empty word")
        a, *rest = f.dom
        rest = tuple(rest)
        abar = self.cat.dual(a)
        return chain(
            self.tensor(self.cap(a), self.identity(rest)),
            self.tensor(self.identity((abar,)), f),
            self.tensor(self.cup_reflected(a), self.identity(rest)),
        )

    def right_trace(self, f: SkeletalMorphism) -> complex:
        while f.dom:
            f = self.partial_trace_right(f)
        return complex(f.blocks[0][0, 0]) if f.blocks else 0.0

    def left_trace(self, f: SkeletalMorphism) -> complex:
        while f.dom:
            f = self.partial_trace_left(f)
        return complex(f.blocks[0][0, 0]) if f.blocks else 0.0

    # --- dual bases ---

    def dual_basis(self, basis: Sequence[SkeletalMorphism], tolerance: float = 1e-9) -> List[SkeletalMorphism]:
        """Dual family t'^α with t'^α ∘ t^β = δ_αβ id for a basis of Hom(X_k, X_iX_j)."""
        if not basis:
            return []
        dom, cod = basis[0].dom, basis[0].cod
        if len(dom) != 1 or any(t.dom != dom or t.cod != cod for t in basis):
            raise ShapeMismatch("dual_basis expects intertwiners (k) -> word with a common type")
        k = dom[0]
        matrix = np.column_stack([t.blocks[k][:, 0] for t in basis])
        if matrix.shape[0] != matrix.shape[1]:
            raise DegenerateBasis(f"{len(basis)} vectors cannot form a basis of a {matrix.shape[0]}-dim space")
        sigma = np.linalg.svd(matrix, compute_uv=False)
        if sigma[-1] <= tolerance * sigma[0]:
            raise DegenerateBasis("basis vectors are linearly dependent")
        inverse = np.linalg.inv(matrix)
        duals = []
        for alpha in range(len(basis)):
            t = self.zero(cod, dom)
            t.blocks[k][0, :] = inverse[alpha, :]
            duals.append(t)
        return duals

    def completeness_residual(self, i: int, j: int) -> float:
        """|Σ_{k,α} t^{kα} ∘ t'^{kα} - id_{(i,j)}| for the tree bases."""
        total = self.zero((i, j), (i, j))
        for k in self.ring.channels(i, j):
            basis = [self.split(i, j, k, alpha) for alpha in range(self.ring.N[i, j, k])]
            for t, t_dual in zip(basis, self.dual_basis(basis)):
                total = total + compose(t, t_dual)
        return (total - self.identity((i, j))).max_abs()

    # --- braiding ---

    def braiding(self, a: int, b: int) -> SkeletalMorphism:
        """c(X_a, X_b) : (a, b) -> (b, a) from the R-symbols."""
        out = self.zero((a, b), (b, a))
        for m in out.blocks:
            out.blocks[m] = self.cat.r_block(a, b, m).astype(complex).copy()
        return out

    def braiding_inverse(self, a: int, b: int) -> SkeletalMorphism:
        """c(X_a, X_b)⁻¹ : (b, a) -> (a, b)."""
        out = self.zero((b, a), (a, b))
        for m in out.blocks:
            out.blocks[m] = np.linalg.inv(self.cat.r_block(a, b, m))
        return out

    # --- bending a strand around a cup/cap without leaving three letters ---

    def bend_left(self, g: SkeletalMorphism, a: int) -> SkeletalMorphism:
        """(ev_a ⊗ id_{yz}) ∘ (id_ā ⊗ g) for g : (x) -> (a, y, z); returns (ā, x) -> (y, z)."""
        if len(g.dom) != 1 or len(g.cod) != 3 or g.cod[0] != a:
            raise ShapeMismatch(f"bend_left expects (x) -> ({a}, y, z), got {g.dom}->{g.cod}")
        (x,), (_, y, z) = g.dom, g.cod
        abar = self.cat.dual(a)
        out = self.zero((abar, x), (y, z))
        block = g.blocks.get(x)
        if block is None:
            return out
        for idx, (e, alpha, beta) in enumerate(self.ring.trees(g.cod, x)):
            coefficient = block[idx, 0]
            if coefficient == 0:
                continue
            h = compose(self.tensor(self.cap(a), self.identity((y,))),
                        self.tensor(self.identity((abar,)), self.split(a, y, e, alpha)))
            term = compose(self.tensor(h, self.identity((z,))),
                           self.tensor(self.identity((abar,)), self.split(e, z, x, beta)))
            out = out + coefficient * term
        return out

    def bend_right(self, g: SkeletalMorphism, c: int) -> SkeletalMorphism:
        """(id_{yz} ⊗ ev_{c̄}) ∘ (g ⊗ id_{c̄}) for g : (x) -> (y, z, c); returns (x, c̄) -> (y, z)."""
        if len(g.dom) != 1 or len(g.cod) != 3 or g.cod[2] != c:
            raise ShapeMismatch(f"bend_right expects (x) -> (y, z, {c}), got {g.dom}->{g.cod}")
        (x,), (y, z, _) = g.dom, g.cod
        cbar = self.cat.dual(c)
        out = self.zero((x, cbar), (y, z))
        block = g.blocks.get(x)
        if block is None:
            return out
        for idx, (e, alpha, beta) in enumerate(self.ring.trees(g.cod, x)):
            coefficient = block[idx, 0]
            if coefficient == 0:
                continue
            term = chain(
                self.split(y, z, e, alpha),
                self.tensor(self.identity((e,)), self.cap(cbar)),
                self.tensor(self.split(e, c, x, beta), self.identity((cbar,))),
            )
            out = out + coefficient * term
        return out
