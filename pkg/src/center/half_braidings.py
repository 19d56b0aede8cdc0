"""Explicit objects of the double: an object of C together with a half-braiding.

An object X ≅ ⊕ N_i X_i is described by its summands ``(label, copy)``. The
half-braiding e(j) : X X_j -> X_j X is stored by components: for a source
summand s = (a, α) and a target summand s' = (b, β), the morphism
(a, j) -> (j, b). Components that are absent are zero.

Morphisms between explicit objects are block diagonal by Schur's lemma and are
stored as ``{label: matrix}``, rows indexing copies in the codomain.
"""
import logging
from dataclasses import dataclass
from itertools import product
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.algebra.kernel import null_space
from src.fusion.data import FusionCategoryData, global_dimension
from src.morphisms.calculus import DiagramCalculus, SkeletalMorphism, chain, compose
from src.reporting.schemas import Certificate, Check
from src.tube.algebra import TubeAlgebra, TubeElement
from src.utils.errors import HexagonFailed, NotIdempotent, ShapeMismatch

logger = logging.getLogger(__name__)

Summand = Tuple[int, int]
ComponentKey = Tuple[Summand, Summand]  # (target, source)
ObjectMorphism = Dict[int, np.ndarray]


@dataclass(frozen=True)
class HalfBraiding:
    mult: Dict[int, int]
    e: Dict[int, Dict[ComponentKey, SkeletalMorphism]]
    name: str = ""

    @property
    def summands(self) -> List[Summand]:
        return [(label, copy) for label in sorted(self.mult) for copy in range(self.mult[label])]

    def component(self, j: int, target: Summand, source: Summand) -> Optional[SkeletalMorphism]:
        return self.e.get(j, {}).get((target, source))

    def dimension(self, cat: FusionCategoryData) -> complex:
        return complex(sum(n * cat.dims[i] for i, n in self.mult.items()))


# --- matrices of e(j) per total charge ---

def _assembled(calc: DiagramCalculus, hb: HalfBraiding, j: int, m: int) -> Tuple[np.ndarray, list, list]:
    """Matrix of e(j) on charge m; rows grouped by target summand, columns by source summand."""
    ring = calc.ring
    summands = hb.summands
    row_sizes = [len(ring.trees((j, b), m)) for b, _ in summands]
    col_sizes = [len(ring.trees((a, j), m)) for a, _ in summands]
    row_offsets = np.concatenate([[0], np.cumsum(row_sizes)]).astype(int)
    col_offsets = np.concatenate([[0], np.cumsum(col_sizes)]).astype(int)
    matrix = np.zeros((row_offsets[-1], col_offsets[-1]), dtype=complex)
    for (ti, target), (si, source) in product(enumerate(summands), repeat=2):
        part = hb.component(j, target, source)
        if part is None or m not in part.blocks:
            continue
        matrix[row_offsets[ti]:row_offsets[ti + 1], col_offsets[si]:col_offsets[si + 1]] = part.blocks[m]
    return matrix, list(row_offsets), list(col_offsets)


def inverse_components(calc: DiagramCalculus, hb: HalfBraiding, j: int) -> Dict[ComponentKey, SkeletalMorphism]:
    """e(j)⁻¹ : (j, X) -> (X, j); component (target s, source s') is (j, b_{s'}) -> (a_s, j)."""
    summands = hb.summands
    result: Dict[ComponentKey, SkeletalMorphism] = {
        (target, source): calc.zero((j, source[0]), (target[0], j))
        for target, source in product(summands, repeat=2)
    }
    for m in range(calc.ring.rank):
        matrix, rows, cols = _assembled(calc, hb, j, m)
        if matrix.size == 0:
            continue
        if matrix.shape[0] != matrix.shape[1]:
            raise ShapeMismatch(f"e({j}) on charge {m} is not square: {matrix.shape}")
        inverse = np.linalg.inv(matrix)
        for (ti, target), (si, source) in product(enumerate(summands), repeat=2):
            block = inverse[cols[ti]:cols[ti + 1], rows[si]:rows[si + 1]]
            if block.size:
                result[(target, source)].blocks[m] = block
    return result


def dual_label_component(calc: DiagramCalculus, hb: HalfBraiding, j: int,
                         target: Summand, source: Summand,
                         inverse: Optional[Dict[ComponentKey, SkeletalMorphism]] = None) -> SkeletalMorphism:
    """e(j̄) component (a, j̄) -> (j̄, b) obtained from e(j)⁻¹ by bending X_j around."""
    cat = calc.cat
    jbar = cat.dual(j)
    inverse = inverse if inverse is not None else inverse_components(calc, hb, j)
    a, b = source[0], target[0]
    g = compose(calc.tensor(calc.identity((jbar,)), inverse[(target, source)]),
                calc.tensor(calc.cup_reflected(j), calc.identity((a,))))
    ratio = (cat.dims[j] / cat.pivotal[j]) / calc.cap_coefficient(jbar)
    return ratio * calc.bend_right(g, j)


# --- checks ---

def hbv_residual(calc: DiagramCalculus, hb: HalfBraiding) -> float:
    """max |(t⊗id_X)∘e(k) - (id_i⊗e(j))∘(e(i)⊗id_j)∘(id_X⊗t)| over basis vertices t and summand pairs."""
    ring = calc.ring
    summands = hb.summands
    worst = 0.0
    for i, j in product(range(ring.rank), repeat=2):
        for k in ring.channels(i, j):
            for alpha in range(ring.N[i, j, k]):
                t = calc.split(i, j, k, alpha)
                for source, target in product(summands, repeat=2):
                    a, b = source[0], target[0]
                    lhs = calc.zero((a, k), (i, j, b))
                    e_k = hb.component(k, target, source)
                    if e_k is not None:
                        lhs = compose(calc.tensor(t, calc.identity((b,))), e_k)
                    rhs = calc.zero((a, k), (i, j, b))
                    right = calc.tensor(calc.identity((a,)), t)
                    for middle in summands:
                        e_i = hb.component(i, middle, source)
                        e_j = hb.component(j, target, middle)
                        if e_i is None or e_j is None:
                            continue
                        rhs = rhs + chain(calc.tensor(calc.identity((i,)), e_j),
                                          calc.tensor(e_i, calc.identity((j,))), right)
                    worst = max(worst, (lhs - rhs).max_abs())
    return worst


def unit_residual(calc: DiagramCalculus, hb: HalfBraiding) -> float:
    worst = 0.0
    for source, target in product(hb.summands, repeat=2):
        part = hb.component(0, target, source)
        expected = calc.identity((source[0],)).blocks[source[0]] if source == target else None
        if part is None:
            if expected is not None:
                worst = max(worst, 1.0)
            continue
        if expected is None:
            worst = max(worst, part.max_abs())
        else:
            worst = max(worst, float(np.max(np.abs(part.blocks[source[0]] - expected))))
    return worst


def invertibility_margin(calc: DiagramCalculus, hb: HalfBraiding) -> float:
    """Smallest singular value of any e(j) on any charge (0 for a non-square block)."""
    margin = np.inf
    for j, m in product(range(calc.ring.rank), repeat=2):
        matrix, _, _ = _assembled(calc, hb, j, m)
        if matrix.size == 0:
            continue
        if matrix.shape[0] != matrix.shape[1]:
            return 0.0
        margin = min(margin, float(np.linalg.svd(matrix, compute_uv=False)[-1]))
    return float(margin)


def dual_consistency_residual(calc: DiagramCalculus, hb: HalfBraiding) -> float:
    worst = 0.0
    for j in range(calc.ring.rank):
        inverse = inverse_components(calc, hb, j)
        jbar = calc.cat.dual(j)
        for source, target in product(hb.summands, repeat=2):
            derived = dual_label_component(calc, hb, j, target, source, inverse)
            stored = hb.component(jbar, target, source)
            worst = max(worst, derived.max_abs() if stored is None else (derived - stored).max_abs())
    return worst


def validate_halfbraiding(calc: DiagramCalculus, hb: HalfBraiding, tolerance: float = 1e-9) -> Certificate:
    cert = Certificate(name=f"half_braiding:{hb.name}")
    margin = invertibility_margin(calc, hb)
    cert.checks.append(Check.above("invertible", margin, np.sqrt(tolerance),
                                   detail=f"smallest singular value {margin:.3g}"))
    cert.checks.append(Check.below("unit", unit_residual(calc, hb), tolerance))
    cert.checks.append(Check.below("hb_v", hbv_residual(calc, hb), tolerance))
    if margin > np.sqrt(tolerance):
        cert.checks.append(Check.below("dual_labels", dual_consistency_residual(calc, hb), 1e-8))
    return cert


# --- constructions ---

def trivial_halfbraiding(calc: DiagramCalculus) -> HalfBraiding:
    """The unit object with e ≡ id."""
    unit = (0, 0)
    e = {
        j: {(unit, unit): SkeletalMorphism((0, j), (j, 0), {j: np.eye(1, dtype=complex)})}
        for j in range(calc.ring.rank)
    }
    return HalfBraiding(mult={0: 1}, e=e, name="1")


def _tensor_summands(calc: DiagramCalculus, x: HalfBraiding, y: HalfBraiding):
    """Summands of XY: (m, copy) paired with the (source X summand, source Y summand, μ) they come from."""
    ring = calc.ring
    copies: Dict[int, int] = {}
    layout = []
    for sx, sy in product(x.summands, y.summands):
        for m in ring.channels(sx[0], sy[0]):
            for mu in range(ring.N[sx[0], sy[0], m]):
                copy = copies.get(m, 0)
                copies[m] = copy + 1
                layout.append(((m, copy), sx, sy, mu))
    return copies, layout


def tensor_halfbraiding(calc: DiagramCalculus, x: HalfBraiding, y: HalfBraiding) -> HalfBraiding:
    """e_{XY}(j) = (e_X(j) ⊗ id_Y) ∘ (id_X ⊗ e_Y(j)), decomposed along the vertices a b -> m."""
    mult, layout = _tensor_summands(calc, x, y)
    e: Dict[int, Dict[ComponentKey, SkeletalMorphism]] = {}
    for j in range(calc.ring.rank):
        parts: Dict[ComponentKey, SkeletalMorphism] = {}
        for (source, sa, sb, mu), (target, ta, tb, nu) in product(layout, repeat=2):
            e_y = y.component(j, tb, sb)
            e_x = x.component(j, ta, sa)
            if e_x is None or e_y is None:
                continue
            (a, b), (a2, b2) = (sa[0], sb[0]), (ta[0], tb[0])
            part = chain(
                calc.tensor(calc.identity((j,)), calc.fuse(a2, b2, target[0], nu)),
                calc.tensor(e_x, calc.identity((b2,))),
                calc.tensor(calc.identity((a,)), e_y),
                calc.tensor(calc.split(a, b, source[0], mu), calc.identity((j,))),
            )
            if part.max_abs() > 0:
                parts[(target, source)] = part
        e[j] = parts
    return HalfBraiding(mult=mult, e=e, name=f"({x.name})⊗({y.name})")


def dual_halfbraiding(calc: DiagramCalculus, y: HalfBraiding) -> HalfBraiding:
    """Half-braiding on Ȳ: summand (i, α) of Y becomes (ī, α); built from e_Y(j)⁻¹ and the duality of X_i."""
    cat = calc.cat
    mult = {cat.dual(i): n for i, n in y.mult.items()}
    e: Dict[int, Dict[ComponentKey, SkeletalMorphism]] = {}
    for j in range(calc.ring.rank):
        inverse = inverse_components(calc, y, j)
        parts: Dict[ComponentKey, SkeletalMorphism] = {}
        for (i, alpha), (i2, alpha2) in product(y.summands, repeat=2):
            # source ī (from Y summand (i, α)), target ī' (from Y summand (i', α'))
            einv = inverse[((i, alpha), (i2, alpha2))]
            g = compose(calc.tensor(einv, calc.identity((cat.dual(i2),))),
                        calc.tensor(calc.identity((j,)), calc.cup(i2)))
            part = calc.bend_left(g, i)
            if part.max_abs() > 0:
                parts[((cat.dual(i2), alpha2), (cat.dual(i), alpha))] = part
        e[j] = parts
    return HalfBraiding(mult=mult, e=e, name=f"dual({y.name})")


def idempotent_from_halfbraiding(tube: TubeAlgebra, hb: HalfBraiding) -> np.ndarray:
    """z[i,j,i] = d(X)/(λ d_i) Σ_α e^{(i,α),(i,α)}(j), as tube coordinates."""
    cat = tube.cat
    d_x = hb.dimension(cat)
    components: Dict[Tuple[int, int, int], SkeletalMorphism] = {}
    for j in range(cat.rank):
        for summand in hb.summands:
            part = hb.component(j, summand, summand)
            if part is None:
                continue
            i = summand[0]
            scaled = (d_x / (tube.lam * cat.dims[i])) * part
            key = (i, j, i)
            components[key] = components[key] + scaled if key in components else scaled
    z = tube.to_vector(TubeElement(components))
    residual = float(np.max(np.abs(tube.multiply(z, z) - z), initial=0.0))
    if residual > np.sqrt(tube.tolerance) or tube.commutator_residual(z) > np.sqrt(tube.tolerance):
        raise NotIdempotent(f"element built from '{hb.name}' is not a central idempotent (residual {residual:.3e})")
    return z


def hom_double(calc: DiagramCalculus, x: HalfBraiding, y: HalfBraiding, tolerance: float = 1e-9) -> List[ObjectMorphism]:
    """Basis of {f : X -> Y | (id_j ⊗ f) ∘ e_X(j) = e_Y(j) ∘ (f ⊗ id_j) for all j}."""
    variables = [
        (i, beta, alpha)
        for i in sorted(set(x.mult) & set(y.mult))
        for beta in range(y.mult[i]) for alpha in range(x.mult[i])
    ]
    if not variables:
        return []
    rows = []
    for j in range(calc.ring.rank):
        for source, target in product(x.summands, y.summands):
            a, b = source[0], target[0]
            empty = calc.zero((a, j), (j, b))
            width = empty.flat().size
            if width == 0:
                continue
            columns = np.zeros((width, len(variables)), dtype=complex)
            for v, (i, beta, alpha) in enumerate(variables):
                if i == b and beta == target[1]:
                    part = x.component(j, (b, alpha), source)
                    if part is not None:
                        columns[:, v] += (empty + part).flat()
                if i == a and alpha == source[1]:
                    part = y.component(j, target, (a, beta))
                    if part is not None:
                        columns[:, v] -= (empty + part).flat()
            rows.append(columns)
    system = np.vstack(rows)
    kernel = null_space(system, tolerance)
    basis = []
    for col in range(kernel.shape[1]):
        f: ObjectMorphism = {i: np.zeros((y.mult[i], x.mult[i]), dtype=complex) for i in set(x.mult) & set(y.mult)}
        for v, (i, beta, alpha) in enumerate(variables):
            f[i][beta, alpha] = kernel[v, col]
        basis.append(f)
    return basis


def object_trace(cat: FusionCategoryData, f: ObjectMorphism) -> complex:
    return complex(sum(cat.dims[i] * np.trace(block) for i, block in f.items()))


def conditional_expectation(calc: DiagramCalculus, x: HalfBraiding, y: HalfBraiding, t: ObjectMorphism) -> ObjectMorphism:
    """E(t) = (dim C)⁻¹ Σ_i d_i (ev'_i ⊗ id_Y)(id_i ⊗ e_Y(ī))(id_i ⊗ t ⊗ id_ī)(e_X(i) ⊗ id_ī)(id_X ⊗ coev_i)."""
    cat = calc.cat
    dim_c, _ = global_dimension(cat)
    result: ObjectMorphism = {i: np.zeros((y.mult[i], x.mult[i]), dtype=complex) for i in set(x.mult) & set(y.mult)}
    for i in range(cat.rank):
        ibar = cat.dual(i)
        inverse = inverse_components(calc, y, i)
        for source, target in product(x.summands, y.summands):
            a, b = source[0], target[0]
            if a != b:
                continue
            total = calc.zero((a,), (a,))
            for middle_x in x.summands:
                c = middle_x[0]
                e_x = x.component(i, middle_x, source)
                if e_x is None or c not in t:
                    continue
                for delta in range(y.mult.get(c, 0)):
                    weight = t[c][delta, middle_x[1]]
                    if weight == 0:
                        continue
                    e_y = dual_label_component(calc, y, i, target, (c, delta), inverse)
                    total = total + weight * chain(
                        calc.tensor(calc.cap_reflected(i), calc.identity((b,))),
                        calc.tensor(calc.identity((i,)), e_y),
                        calc.tensor(e_x, calc.identity((ibar,))),
                        calc.tensor(calc.identity((a,)), calc.cup(i)),
                    )
            result[a][target[1], source[1]] += cat.dims[i] * total.scalar() / dim_c
    return result


def braided_embeddings(calc: DiagramCalculus, tolerance: float = 1e-9) -> Tuple[List[HalfBraiding], List[HalfBraiding]]:
    """I(X_k) with e = c(X_k, ·) and Ĩ(X_k) with e = c(·, X_k)⁻¹, for every label k."""
    cat = calc.cat
    if not cat.braided:
        raise HexagonFailed(f"category '{cat.name}' carries no braiding")
    forward, backward = [], []
    for k in range(cat.rank):
        s = (k, 0)
        forward.append(HalfBraiding(
            mult={k: 1}, e={j: {(s, s): calc.braiding(k, j)} for j in range(cat.rank)},
            name=f"I({cat.ring.labels[k]})",
        ))
        backward.append(HalfBraiding(
            mult={k: 1}, e={j: {(s, s): calc.braiding_inverse(j, k)} for j in range(cat.rank)},
            name=f"Ĩ({cat.ring.labels[k]})",
        ))
    for hb in forward + backward:
        cert = validate_halfbraiding(calc, hb, tolerance)
        if not cert.passed:
            failure = cert.first_failure()
            raise HexagonFailed(f"{hb.name} fails '{failure.name}' (residual {failure.residual:.3e})")
    return forward, backward


def z2_center(calc: DiagramCalculus, tolerance: float = 1e-9) -> List[int]:
    """Labels k with c(X_k, X_j) ∘ c(X_j, X_k) = id for every j."""
    cat = calc.cat
    transparent = []
    for k in range(cat.rank):
        worst = max(
            (compose(calc.braiding(k, j), calc.braiding(j, k)) - calc.identity((j, k))).max_abs()
            for j in range(cat.rank)
        )
        if worst < tolerance:
            transparent.append(k)
    return transparent


def match_simple(z: np.ndarray, simples: list, tolerance: float = 1e-7) -> Optional[int]:
    """Index of the minimal central idempotent equal to z, if any."""
    for simple in simples:
        if float(np.max(np.abs(simple.z - z))) < tolerance:
            return simple.index
    return None
