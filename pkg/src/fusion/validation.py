"""Axiom checks for skeletal fusion-category data.

``validate`` never raises for a failing axiom: every residual goes into the
certificate and the caller decides what to do with it.
"""
import logging
from itertools import product
from typing import Callable, List

import numpy as np

from src.fusion.data import FusionCategoryData, global_dimension
from src.morphisms.calculus import DiagramCalculus, SkeletalMorphism, chain
from src.reporting.schemas import Certificate, Check
from src.utils.errors import DoubleError

logger = logging.getLogger(__name__)

MAX_CONDITION = 1e12


def ring_associativity_residual(cat: FusionCategoryData) -> float:
    N = cat.ring.N
    left = np.einsum("ijm,mkl->ijkl", N, N)
    right = np.einsum("jkm,iml->ijkl", N, N)
    return float(np.max(np.abs(left - right), initial=0))


def frobenius_residual(cat: FusionCategoryData) -> float:
    """max |N_ij^k - N_{j,k̄}^{ī}|."""
    N, dual = cat.ring.N, cat.ring.dual
    worst = 0
    for i, j, k in product(range(cat.rank), repeat=3):
        worst = max(worst, abs(int(N[i, j, k]) - int(N[j, dual[k], dual[i]])))
    return float(worst)


def triangle_residual(cat: FusionCategoryData) -> float:
    worst = 0.0
    for (a, b, c, _), block in cat.F.items():
        if 0 in (a, b, c):
            worst = max(worst, float(np.max(np.abs(block - np.eye(block.shape[0])), initial=0.0)))
    return worst


def max_condition_number(cat: FusionCategoryData) -> float:
    worst = 1.0
    for block in cat.F.values():
        if block.size:
            worst = max(worst, float(np.linalg.cond(block)))
    return worst


def _f_entry(cat: FusionCategoryData, a: int, b: int, c: int, m: int, left: tuple, right: tuple) -> complex:
    rows = cat.ring.tree_index((a, b, c), m)
    cols = cat.ring.right_index(a, b, c, m)
    if left not in rows or right not in cols:
        return 0.0
    return cat.f_block(a, b, c, m)[rows[left], cols[right]]


def pentagon_residual(cat: FusionCategoryData) -> float:
    """Compares the two F-move routes from a(b(cd)) to ((ab)c)d for every a, b, c, d, e."""
    ring, N, r = cat.ring, cat.ring.N, cat.rank
    F = lambda a, b, c, m, left, right: _f_entry(cat, a, b, c, m, left, right)  # noqa: E731
    worst = 0.0
    for a, b, c, d, e in product(range(r), repeat=5):
        lefts = [
            (f, a1, g, a2, a3)
            for f in ring.channels(a, b) for a1 in range(N[a, b, f])
            for g in ring.channels(f, c) for a2 in range(N[f, c, g])
            for a3 in range(N[g, d, e])
        ]
        if not lefts:
            continue
        rights = [
            (h, mu, i, kappa, lam)
            for h in ring.channels(c, d) for mu in range(N[c, d, h])
            for i in ring.channels(b, h) for kappa in range(N[b, h, i])
            for lam in range(N[a, i, e])
        ]
        for (f, a1, g, a2, a3), (h, mu, i, kappa, lam) in product(lefts, rights):
            lhs = sum(
                F(a, b, h, e, (f, a1, nu), (i, kappa, lam)) * F(f, c, d, e, (g, a2, a3), (h, mu, nu))
                for nu in range(N[f, h, e])
            )
            rhs = 0.0
            for j in ring.channels(b, c):
                for sigma, tau, rho in product(range(N[b, c, j]), range(N[j, d, i]), range(N[a, j, g])):
                    rhs += (
                        F(b, c, d, i, (j, sigma, tau), (h, mu, kappa))
                        * F(a, j, d, e, (g, rho, a3), (i, tau, lam))
                        * F(a, b, c, g, (f, a1, a2), (j, sigma, rho))
                    )
            worst = max(worst, abs(lhs - rhs))
    return float(worst)


def dimension_equation_residual(cat: FusionCategoryData) -> float:
    d = cat.dims
    products = np.outer(d, d)
    sums = np.einsum("ijk,k->ij", cat.ring.N, d)
    return float(np.max(np.abs(products - sums), initial=0.0))


def sphericity_residual(cat: FusionCategoryData, calculus: DiagramCalculus) -> float:
    """d_0 = 1, d_ā = d_a, and both loops of every label equal d_a."""
    d = cat.dims
    worst = abs(d[0] - 1.0)
    for a in range(cat.rank):
        worst = max(worst, abs(d[cat.dual(a)] - d[a]))
        left, right = calculus.loops(a)
        worst = max(worst, abs(left - d[a]), abs(right - d[a]))
    return float(worst)


def zigzag_residual(cat: FusionCategoryData, calculus: DiagramCalculus) -> float:
    return max((max(calculus.zigzag_residuals(a)) for a in range(cat.rank)), default=0.0)


def unitarity_residual(cat: FusionCategoryData) -> float:
    worst = 0.0
    for block in cat.F.values():
        if block.size:
            worst = max(worst, float(np.max(np.abs(block @ block.conj().T - np.eye(block.shape[0])))))
    return worst


def r_invertibility(cat: FusionCategoryData) -> float:
    """Largest condition number among the R-blocks (inf for a singular one)."""
    worst = 1.0
    for block in cat.R.values():
        if block.size:
            worst = max(worst, float(np.linalg.cond(block)))
    return worst


def half_braiding_defect(calculus: DiagramCalculus, a: int, e: Callable[[int], SkeletalMorphism]) -> float:
    """max over i, j, k, α of |(t⊗id_a)∘e(k) - (id_i⊗e(j))∘(e(i)⊗id_j)∘(id_a⊗t)| for one simple X_a."""
    ring = calculus.ring
    worst = 0.0
    for i, j in product(range(ring.rank), repeat=2):
        for k in ring.channels(i, j):
            for alpha in range(ring.N[i, j, k]):
                t = calculus.split(i, j, k, alpha)
                lhs = chain(calculus.tensor(t, calculus.identity((a,))), e(k))
                rhs = chain(
                    calculus.tensor(calculus.identity((i,)), e(j)),
                    calculus.tensor(e(i), calculus.identity((j,))),
                    calculus.tensor(calculus.identity((a,)), t),
                )
                worst = max(worst, (lhs - rhs).max_abs())
    return worst


def hexagon_residuals(cat: FusionCategoryData, calculus: DiagramCalculus) -> List[float]:
    """Both hexagons, as the naturality of c(a, -) and of c(-, a)⁻¹ over tensor products."""
    forward = max(
        half_braiding_defect(calculus, a, lambda j, a=a: calculus.braiding(a, j)) for a in range(cat.rank)
    )
    backward = max(
        half_braiding_defect(calculus, a, lambda j, a=a: calculus.braiding_inverse(j, a)) for a in range(cat.rank)
    )
    return [forward, backward]


def validate(cat: FusionCategoryData, tolerance: float = 1e-9) -> Certificate:
    """Checks every axiom the downstream constructions rely on."""
    logger.info(f"Validating '{cat.name}' (rank {cat.rank}, tolerance {tolerance:.1e})")
    cert = Certificate(name=f"validate:{cat.name}")
    checks = cert.checks
    calculus = DiagramCalculus(cat)

    checks.append(Check.below("ring_associativity", ring_associativity_residual(cat), 0.5))
    checks.append(Check.below("frobenius_reciprocity", frobenius_residual(cat), 0.5))
    checks.append(Check.below("triangle", triangle_residual(cat), tolerance))

    condition = max_condition_number(cat)
    checks.append(Check.below("f_invertible", condition, MAX_CONDITION, detail=f"max condition number {condition:.3g}"))
    if condition < MAX_CONDITION:
        checks.append(Check.below("pentagon", pentagon_residual(cat), tolerance))

    checks.append(Check.below("dimension_equation", dimension_equation_residual(cat), tolerance))
    try:
        dim_c, lam = global_dimension(cat, tolerance)
        checks.append(Check.above("global_dimension_nonzero", abs(dim_c), tolerance,
                                  detail=f"dim C = {dim_c:.10g}, lambda = {lam:.10g}"))
    except DoubleError as e:
        checks.append(Check.above("global_dimension_nonzero", 0.0, tolerance, detail=str(e)))

    if condition < MAX_CONDITION:
        checks.append(Check.below("zigzag", zigzag_residual(cat, calculus), tolerance))
        checks.append(Check.below("sphericity", sphericity_residual(cat, calculus), tolerance))

    if cat.unitary:
        checks.append(Check.below("unitarity", unitarity_residual(cat), tolerance))

    if cat.braided:
        r_condition = r_invertibility(cat)
        checks.append(Check.below("r_invertible", r_condition, MAX_CONDITION,
                                  detail=f"max condition number {r_condition:.3g}"))
        if r_condition < MAX_CONDITION and condition < MAX_CONDITION:
            forward, backward = hexagon_residuals(cat, calculus)
            checks.append(Check.below("hexagon", forward, tolerance))
            checks.append(Check.below("hexagon_inverse", backward, tolerance))

    failure = cert.first_failure()
    if failure is None:
        logger.info(f"'{cat.name}' passed {len(checks)} checks.")
    else:
        logger.warning(f"'{cat.name}' failed '{failure.name}' (residual {failure.residual:.3e}).")
    return cert
