"""The tube algebra Ξ = ⊕_{i,j,k} Hom(X_iX_j, X_jX_k).

Elements are kept in two forms: ``TubeElement`` (a dict of morphisms, used for
diagram evaluation) and flat coordinate vectors in the basis of block entries
(used for everything linear, through the cached structure constants).
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.algebra.kernel import AssocAlgebra, algebra_from_constants, associativity_residual
from src.fusion.data import FusionCategoryData, global_dimension
from src.morphisms.calculus import DiagramCalculus, SkeletalMorphism, chain, compose
from src.reporting.schemas import Certificate, Check
from src.utils.errors import NotInXi0, ShapeMismatch

logger = logging.getLogger(__name__)

Triple = Tuple[int, int, int]
# (i, j, k, total charge m, codomain tree row, domain tree column)
BasisKey = Tuple[int, int, int, int, int, int]


@dataclass(frozen=True)
class TubeElement:
    """Components u[i,j,k] : (i, j) -> (j, k); missing keys are zero."""

    components: Dict[Triple, SkeletalMorphism] = field(default_factory=dict)

    def __add__(self, other: "TubeElement") -> "TubeElement":
        merged = dict(self.components)
        for key, morphism in other.components.items():
            merged[key] = merged[key] + morphism if key in merged else morphism
        return TubeElement(merged)

    def __mul__(self, scalar: complex) -> "TubeElement":
        return TubeElement({key: scalar * m for key, m in self.components.items()})

    __rmul__ = __mul__

    def in_xi0(self, tolerance: float = 0.0) -> bool:
        return all(i == k or m.max_abs() <= tolerance for (i, _, k), m in self.components.items())


def product_components(
    calculus: DiagramCalculus, lam: complex, v: SkeletalMorphism, u: SkeletalMorphism
) -> Dict[int, SkeletalMorphism]:
    """(v∙u)[i,j,k] for single components u ∈ Hom(im, ml) and v ∈ Hom(ln, nk), keyed by j."""
    (i, m), (_, l) = u.dom, u.cod
    (l2, n), (_, k) = v.dom, v.cod
    if l != l2:
        return {}
    cat, ring = calculus.cat, calculus.ring
    out: Dict[int, SkeletalMorphism] = {}
    middle = chain(calculus.tensor(calculus.identity((m,)), v), calculus.tensor(u, calculus.identity((n,))))
    for j in ring.channels(m, n):
        prefactor = cat.dims[m] * cat.dims[n] / (cat.dims[j] * lam)
        total = calculus.zero((i, j), (j, k))
        for alpha in range(ring.N[m, n, j]):
            term = chain(
                calculus.tensor(calculus.fuse(m, n, j, alpha), calculus.identity((k,))),
                middle,
                calculus.tensor(calculus.identity((i,)), calculus.split(m, n, j, alpha)),
            )
            total = total + term
        out[j] = prefactor * total
    return out


def tube_multiply(calculus: DiagramCalculus, lam: complex, v: TubeElement, u: TubeElement) -> TubeElement:
    """v∙u by direct diagram evaluation."""
    result: Dict[Triple, SkeletalMorphism] = {}
    for (i, m, l), u_part in u.components.items():
        for (l2, n, k), v_part in v.components.items():
            if l2 != l:
                continue
            for j, piece in product_components(calculus, lam, v_part, u_part).items():
                key = (i, j, k)
                result[key] = result[key] + piece if key in result else piece
    return TubeElement(result)


class TubeAlgebra:
    """Ξ with its basis, structure constants, unit, t-element and 𝔖 on Ξ₀."""

    def __init__(self, cat: FusionCategoryData, tolerance: float = 1e-9):
        self.cat = cat
        self.calculus = DiagramCalculus(cat)
        self.tolerance = tolerance
        self.dim_c, self.lam = global_dimension(cat, tolerance)
        self.basis: List[BasisKey] = self._enumerate_basis()
        self.index: Dict[BasisKey, int] = {key: n for n, key in enumerate(self.basis)}
        self.xi0 = np.array([key[0] == key[2] for key in self.basis])
        self.algebra: Optional[AssocAlgebra] = None
        self.unit_closed_form_residual = float("nan")
        self.unit_dim_c_residual = float("nan")
        self._s_matrix: Optional[np.ndarray] = None

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _enumerate_basis(self) -> List[BasisKey]:
        ring = self.cat.ring
        keys = []
        for i in range(ring.rank):
            for j in range(ring.rank):
                for k in range(ring.rank):
                    for m in range(ring.rank):
                        for row in range(ring.N[j, k, m]):
                            for col in range(ring.N[i, j, m]):
                                keys.append((i, j, k, m, row, col))
        return keys

    # --- conversions ---

    def to_vector(self, element: TubeElement) -> np.ndarray:
        vector = np.zeros(self.dim, dtype=complex)
        for (i, j, k), morphism in element.components.items():
            if morphism.dom != (i, j) or morphism.cod != (j, k):
                raise ShapeMismatch(f"component {(i, j, k)} has type {morphism.dom}->{morphism.cod}")
            for m, block in morphism.blocks.items():
                for row in range(block.shape[0]):
                    for col in range(block.shape[1]):
                        vector[self.index[(i, j, k, m, row, col)]] = block[row, col]
        return vector

    def to_element(self, vector: np.ndarray) -> TubeElement:
        components: Dict[Triple, SkeletalMorphism] = {}
        for n, (i, j, k, m, row, col) in enumerate(self.basis):
            if vector[n] == 0:
                continue
            if (i, j, k) not in components:
                components[(i, j, k)] = self.calculus.zero((i, j), (j, k))
            components[(i, j, k)].blocks[m][row, col] = vector[n]
        return TubeElement(components)

    def basis_element(self, n: int) -> TubeElement:
        vector = np.zeros(self.dim, dtype=complex)
        vector[n] = 1.0
        return self.to_element(vector)

    # --- algebra structure ---

    def structure_constants(self) -> np.ndarray:
        """constants[a, b, c]: coefficient of e_c in e_a ∙ e_b."""
        constants = np.zeros((self.dim, self.dim, self.dim), dtype=complex)
        elements = [self.basis_element(n) for n in range(self.dim)]
        for a, key_a in enumerate(self.basis):
            (v_key, v_part), = elements[a].components.items()
            for b, key_b in enumerate(self.basis):
                if key_b[2] != key_a[0]:
                    continue
                (u_key, u_part), = elements[b].components.items()
                for j, piece in product_components(self.calculus, self.lam, v_part, u_part).items():
                    key = (u_key[0], j, v_key[2])
                    constants[a, b] += self.to_vector(TubeElement({key: piece}))
        return constants

    def closed_form_unit(self, coefficient: complex) -> np.ndarray:
        """coefficient · Σ_i id_{X_i} placed at the (i, 0, i) components."""
        vector = np.zeros(self.dim, dtype=complex)
        for i in range(self.cat.rank):
            vector[self.index[(i, 0, i, i, 0, 0)]] = coefficient
        return vector

    def trivial_idempotent(self) -> np.ndarray:
        """Idempotent of the unit object: z[0,j,0] = (1/λ) id_{X_j}, zero elsewhere."""
        vector = np.zeros(self.dim, dtype=complex)
        for j in range(self.cat.rank):
            vector[self.index[(0, j, 0, j, 0, 0)]] = 1.0 / self.lam
        return vector

    def multiply(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """x∙y in coordinates."""
        return self.algebra.multiply(x, y)

    @property
    def unit(self) -> np.ndarray:
        return self.algebra.unit

    def t_vector(self) -> np.ndarray:
        """t[i,i,i] = (λ / d_i) id_{X_iX_i}, zero elsewhere."""
        vector = np.zeros(self.dim, dtype=complex)
        for n, (i, j, k, m, row, col) in enumerate(self.basis):
            if i == j == k and row == col:
                vector[n] = self.lam / self.cat.dims[i]
        return vector

    def t_element(self) -> TubeElement:
        return self.to_element(self.t_vector())

    def commutator_residual(self, x: np.ndarray) -> float:
        """max |x∙e_a - e_a∙x| over basis elements."""
        return float(np.max(np.abs(self.algebra.left_regular(x) - self.algebra.right_regular(x)), initial=0.0))

    def unit_scalar(self, x: np.ndarray, i: int) -> complex:
        """The scalar s_i of the component x[i, 0, i] ∈ End(X_i)."""
        return complex(x[self.index[(i, 0, i, i, 0, 0)]])

    def phi(self, x: np.ndarray) -> complex:
        """φ(x) = λ Σ_i d_i tr_{X_i}(x[i,0,i]) = λ Σ_i d_i² s_i."""
        d = self.cat.dims
        return complex(self.lam * sum(d[i] * d[i] * self.unit_scalar(x, i) for i in range(self.cat.rank)))

    # --- the 𝔖-transform ---

    def s_component(self, s: SkeletalMorphism) -> SkeletalMorphism:
        """𝔖 on a single component s : (i, j) -> (j, i); lands in Hom((j̄, i), (i, j̄))."""
        (i, j), (j2, i2) = s.dom, s.cod
        if i != i2 or j != j2:
            raise NotInXi0(f"component {s.dom}->{s.cod} is not of the form (i,j)->(j,i)")
        calc = self.calculus
        jbar = self.cat.dual(j)
        g = compose(calc.tensor(s, calc.identity((jbar,))), calc.tensor(calc.identity((i,)), calc.cup(j)))
        return calc.bend_left(g, j)

    def s_transform(self, element: TubeElement) -> TubeElement:
        result: Dict[Triple, SkeletalMorphism] = {}
        for (i, j, k), morphism in element.components.items():
            if i != k:
                if morphism.max_abs() > 0:
                    raise NotInXi0(f"component {(i, j, k)} lies outside Ξ₀")
                continue
            jbar = self.cat.dual(j)
            result[(jbar, i, jbar)] = self.s_component(morphism)
        return TubeElement(result)

    @property
    def s_matrix(self) -> np.ndarray:
        """Matrix of 𝔖 in coordinates; columns outside Ξ₀ are zero."""
        if self._s_matrix is None:
            matrix = np.zeros((self.dim, self.dim), dtype=complex)
            for n in np.flatnonzero(self.xi0):
                matrix[:, n] = self.to_vector(self.s_transform(self.basis_element(n)))
            self._s_matrix = matrix
        return self._s_matrix

    def apply_s(self, x: np.ndarray) -> np.ndarray:
        if np.max(np.abs(x[~self.xi0]), initial=0.0) > self.tolerance * max(1.0, np.max(np.abs(x))):
            raise NotInXi0("element has components with i != k")
        return self.s_matrix @ x


def build_tube_algebra(cat: FusionCategoryData, tolerance: float = 1e-9) -> TubeAlgebra:
    """Evaluates every basis product, validates the algebra and solves for its unit."""
    tube = TubeAlgebra(cat, tolerance)
    logger.info(f"Building tube algebra of '{cat.name}': dimension {tube.dim}, Ξ₀ dimension {int(tube.xi0.sum())}")
    constants = tube.structure_constants()
    tube.algebra = algebra_from_constants(constants, tolerance=tolerance)
    tube.unit_closed_form_residual = float(np.max(np.abs(tube.unit - tube.closed_form_unit(tube.lam))))
    tube.unit_dim_c_residual = float(np.max(np.abs(tube.unit - tube.closed_form_unit(tube.dim_c))))
    logger.info(
        f"Tube unit: |u - λ·id| = {tube.unit_closed_form_residual:.2e}, "
        f"|u - dimC·id| = {tube.unit_dim_c_residual:.2e}"
    )
    return tube


def tube_certificate(tube: TubeAlgebra, seed: int = 0) -> Certificate:
    """Associativity, unit, centrality of t and the order of 𝔖 on Ξ₀."""
    tol = tube.tolerance
    cert = Certificate(name="tube_algebra")
    expected_dim = int(np.einsum("ijm,jkm->", tube.cat.ring.N, tube.cat.ring.N))
    cert.checks.append(Check.below("dimension", abs(tube.dim - expected_dim), 0.5,
                                   detail=f"dim Ξ = {tube.dim}"))
    cert.checks.append(Check.below("associativity", associativity_residual(tube.algebra.constants), tol))
    cert.checks.append(Check.below("unit_closed_form_lambda", tube.unit_closed_form_residual, tol))
    cert.notes["unit_closed_form"] = (
        "lambda" if tube.unit_closed_form_residual < tol
        else "dim_c" if tube.unit_dim_c_residual < tol else "neither"
    )
    cert.checks.append(Check.below("t_central", tube.commutator_residual(tube.t_vector()), tol))

    rng = np.random.default_rng(seed)
    x = (rng.standard_normal(tube.dim) + 1j * rng.standard_normal(tube.dim)) * tube.xi0
    fourth = x
    for _ in range(4):
        fourth = tube.apply_s(fourth)
    cert.checks.append(Check.below("s_order_four", float(np.max(np.abs(fourth - x), initial=0.0)), 1e-8))
    return cert
