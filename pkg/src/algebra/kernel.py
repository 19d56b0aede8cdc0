"""Finite-dimensional associative algebras over complex scalars.

Structure constants are held densely, ``constants[a, b, c]`` being the coefficient
of e_c in e_a * e_b. Every rank decision uses singular values relative to the
largest one, so the same tolerance works for algebras of any scale.
"""
import logging
from dataclasses import dataclass
from typing import List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from src.utils.errors import NoUnit, NotAssociative, SplitFailed

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-9
# Bound on idempotent residuals (e_i e_j - δ e_i, Σ e_i - 1).
SPLIT_RESIDUAL = 1e-7

SparseConstants = Mapping[Tuple[int, int, int], complex]


@dataclass(frozen=True)
class AssocAlgebra:
    """A validated associative algebra with unit."""

    dim: int
    constants: np.ndarray
    unit: np.ndarray
    tolerance: float = DEFAULT_TOLERANCE

    def multiply(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.einsum("a,b,abc->c", x, y, self.constants)

    def left_regular(self, x: np.ndarray) -> np.ndarray:
        """Matrix of y -> x*y."""
        return np.einsum("a,abc->cb", x, self.constants)

    def right_regular(self, x: np.ndarray) -> np.ndarray:
        """Matrix of y -> y*x."""
        return np.einsum("b,abc->ca", x, self.constants)

    def basis_vector(self, a: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[a] = 1.0
        return v


@dataclass(frozen=True)
class TraceForm:
    """tr(e_a) of the regular representation, with its cyclicity residual."""

    values: np.ndarray
    cyclic_residual: float

    def __call__(self, x: np.ndarray) -> complex:
        return complex(self.values @ x)


def _dense_constants(constants: Union[SparseConstants, np.ndarray], dim: Optional[int]) -> np.ndarray:
    if isinstance(constants, np.ndarray):
        arr = np.asarray(constants, dtype=complex)
        if arr.ndim != 3 or len(set(arr.shape)) != 1:
            raise NotAssociative(f"structure constants must be an n×n×n array, got shape {arr.shape}")
        return arr
    if dim is None:
        dim = 1 + max((max(key) for key in constants), default=-1)
    arr = np.zeros((dim, dim, dim), dtype=complex)
    for (a, b, c), value in constants.items():
        if not (0 <= a < dim and 0 <= b < dim and 0 <= c < dim):
            raise NotAssociative(f"index {(a, b, c)} outside [0, {dim})")
        arr[a, b, c] += value
    return arr


def associativity_residual(constants: np.ndarray) -> float:
    left = np.einsum("abe,ecf->abcf", constants, constants, optimize=True)
    right = np.einsum("bce,aef->abcf", constants, constants, optimize=True)
    return float(np.max(np.abs(left - right), initial=0.0))


def _solve_unit(constants: np.ndarray) -> Tuple[np.ndarray, float]:
    n = constants.shape[0]
    eye = np.eye(n, dtype=complex)
    # u*e_a = e_a: Σ_b u_b c[b,a,c] = δ_ac ; e_a*u = e_a: Σ_b u_b c[a,b,c] = δ_ac
    left = constants.transpose(1, 2, 0).reshape(n * n, n)
    right = constants.transpose(0, 2, 1).reshape(n * n, n)
    system = np.vstack([left, right])
    rhs = np.concatenate([eye.reshape(-1), eye.reshape(-1)])
    unit, *_ = np.linalg.lstsq(system, rhs, rcond=None)
    residual = float(np.max(np.abs(system @ unit - rhs), initial=0.0))
    return unit, residual


def unit_residual(constants: np.ndarray, unit: np.ndarray) -> float:
    n = constants.shape[0]
    eye = np.eye(n, dtype=complex)
    left = np.einsum("b,bac->ac", unit, constants)
    right = np.einsum("b,abc->ac", unit, constants)
    return float(max(np.max(np.abs(left - eye), initial=0.0), np.max(np.abs(right - eye), initial=0.0)))


def algebra_from_constants(
    constants: Union[SparseConstants, np.ndarray],
    unit: Optional[Sequence[complex]] = None,
    dim: Optional[int] = None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> AssocAlgebra:
    """Validates structure constants and returns the algebra, solving for the unit if needed."""
    arr = _dense_constants(constants, dim)
    n = arr.shape[0]
    scale = max(1.0, float(np.max(np.abs(arr), initial=0.0)))

    residual = associativity_residual(arr)
    if residual >= tolerance * scale * scale:
        raise NotAssociative(f"associativity residual {residual:.3e} exceeds {tolerance:.1e}")

    if unit is None:
        unit_vec, residual = _solve_unit(arr)
        if residual >= tolerance * scale:
            raise NoUnit(f"unit equations inconsistent (residual {residual:.3e})")
    else:
        unit_vec = np.asarray(unit, dtype=complex)
        residual = unit_residual(arr, unit_vec)
        if residual >= tolerance * scale:
            raise NoUnit(f"given unit fails u*x = x*u = x (residual {residual:.3e})")

    logger.debug(f"Algebra of dimension {n} validated (scale {scale:.3g}).")
    return AssocAlgebra(dim=n, constants=arr, unit=unit_vec, tolerance=tolerance)


def trace_form(algebra: AssocAlgebra) -> TraceForm:
    """Trace of left multiplication, checked for tr(xy) = tr(yx) on basis pairs."""
    values = np.einsum("abb->a", algebra.constants)
    products = np.einsum("abc,c->ab", algebra.constants, values)
    residual = float(np.max(np.abs(products - products.T), initial=0.0))
    return TraceForm(values=values, cyclic_residual=residual)


def null_space(matrix: np.ndarray, tolerance: float) -> np.ndarray:
    """Columns spanning the kernel, singular values cut at max(tolerance·σ_max, tolerance).

    A matrix whose largest singular value is below ``tolerance`` counts as zero.
    """
    n = matrix.shape[1]
    if matrix.size == 0:
        return np.eye(n, dtype=complex)
    _, sigma, vh = np.linalg.svd(matrix)
    top = float(sigma[0]) if sigma.size else 0.0
    if top <= tolerance:
        return np.eye(n, dtype=complex)
    rank = int(np.sum(sigma > max(tolerance * top, tolerance)))
    return vh[rank:].conj().T


def center_basis(algebra: AssocAlgebra) -> List[np.ndarray]:
    """Basis of {z : z*e_a = e_a*z for all a}."""
    c = algebra.constants
    n = algebra.dim
    # rows (a, c), columns z_b: c[b,a,c] - c[a,b,c]
    commutator = (c.transpose(1, 2, 0) - c.transpose(0, 2, 1)).reshape(n * n, n)
    kernel = null_space(commutator, algebra.tolerance)
    return [kernel[:, i] for i in range(kernel.shape[1])]


def subalgebra(algebra: AssocAlgebra, basis: Sequence[np.ndarray]) -> Tuple[AssocAlgebra, np.ndarray]:
    """Restricts the multiplication to the span of ``basis`` (assumed closed).

    Returns the sub-algebra in the coordinates of ``basis`` and the embedding
    matrix whose columns are the basis vectors.
    """
    embed = np.column_stack(basis) if basis else np.zeros((algebra.dim, 0), dtype=complex)
    m = embed.shape[1]
    products = np.einsum("ap,bq,abc->cpq", embed, embed, algebra.constants).reshape(algebra.dim, m * m)
    coords, *_ = np.linalg.lstsq(embed, products, rcond=None)
    closure = float(np.max(np.abs(embed @ coords - products), initial=0.0))
    if closure > np.sqrt(algebra.tolerance):
        raise NotAssociative(f"span is not closed under multiplication (residual {closure:.3e})")
    constants = coords.reshape(m, m, m).transpose(1, 2, 0)
    unit, *_ = np.linalg.lstsq(embed, algebra.unit, rcond=None)
    return algebra_from_constants(constants, unit=unit, tolerance=algebra.tolerance), embed


def _cluster(values: np.ndarray, radius: float) -> List[complex]:
    centers: List[List[complex]] = []
    for v in sorted(values, key=lambda z: (z.real, z.imag)):
        for group in centers:
            if abs(group[0] - v) <= radius:
                group.append(v)
                break
        else:
            centers.append([v])
    return [complex(np.mean(g)) for g in centers]


def _split_once(algebra: AssocAlgebra, rng: np.random.Generator) -> List[np.ndarray]:
    n = algebra.dim
    x = rng.standard_normal(n)
    regular = algebra.left_regular(x.astype(complex))
    eigenvalues = np.linalg.eigvals(regular)
    spread = max(1.0, float(np.max(np.abs(eigenvalues), initial=0.0)))
    reps = _cluster(eigenvalues, np.sqrt(algebra.tolerance) * spread)
    if len(reps) != n:
        raise SplitFailed(f"found {len(reps)} eigenvalue clusters for a commutative algebra of dim {n}")

    eye = np.eye(n, dtype=complex)
    idempotents = []
    for i, mu_i in enumerate(reps):
        projector = eye.copy()
        for j, mu_j in enumerate(reps):
            if i != j:
                projector = projector @ (regular - mu_j * eye) / (mu_i - mu_j)
        idempotents.append(projector @ algebra.unit)

    residual = idempotent_residual(algebra, idempotents)
    logger.debug(f"Split attempt produced {n} idempotents, residual {residual:.3e}")
    if residual >= SPLIT_RESIDUAL:
        raise SplitFailed(f"idempotent residual {residual:.3e} exceeds {SPLIT_RESIDUAL:.0e}")
    return idempotents


def idempotent_residual(algebra: AssocAlgebra, idempotents: Sequence[np.ndarray]) -> float:
    """max |e_i e_j - δ_ij e_i| together with |Σ e_i - 1|."""
    worst = float(np.max(np.abs(np.sum(idempotents, axis=0) - algebra.unit), initial=0.0)) if idempotents else 0.0
    for i, e_i in enumerate(idempotents):
        for j, e_j in enumerate(idempotents):
            target = e_i if i == j else 0.0
            worst = max(worst, float(np.max(np.abs(algebra.multiply(e_i, e_j) - target))))
    return worst


def _canonical_key(vector: np.ndarray) -> tuple:
    rounded = np.round(vector, 6) + 0.0
    return tuple(np.concatenate([rounded.real, rounded.imag]))


def minimal_idempotents(
    algebra: AssocAlgebra, seed: int = 0, max_attempts: int = 8
) -> List[np.ndarray]:
    """Minimal idempotents of a commutative semisimple algebra.

    A random real element is diagonalized in the regular representation; its
    eigenvalue clusters give spectral projectors by Lagrange interpolation.
    Each attempt draws a fresh generator seeded by ``(seed, attempt)``.
    """
    commutator = algebra.constants - algebra.constants.transpose(1, 0, 2)
    if np.max(np.abs(commutator), initial=0.0) >= algebra.tolerance * max(1.0, np.max(np.abs(algebra.constants))):
        raise SplitFailed("minimal_idempotents expects a commutative algebra")

    retrying = Retrying(
        stop=stop_after_attempt(max_attempts),
        retry=retry_if_exception_type(SplitFailed),
        reraise=True,
    )
    for attempt in retrying:
        with attempt:
            number = attempt.retry_state.attempt_number
            if number > 1:
                logger.warning(f"Idempotent split retry {number}/{max_attempts}")
            idempotents = _split_once(algebra, np.random.default_rng([seed, number]))
    return sorted(idempotents, key=_canonical_key)


def central_idempotents(
    algebra: AssocAlgebra, seed: int = 0, max_attempts: int = 8
) -> List[np.ndarray]:
    """Minimal central idempotents of ``algebra``, in its own coordinates."""
    center, embed = subalgebra(algebra, center_basis(algebra))
    local = minimal_idempotents(center, seed=seed, max_attempts=max_attempts)
    return sorted((embed @ e for e in local), key=_canonical_key)
