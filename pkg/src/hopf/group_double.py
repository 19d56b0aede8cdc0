"""The quantum double D(G) of a finite group as a ribbon Hopf algebra.

Basis index ``g * n + h`` stands for δ_g ⊗ h, with
(δ_g⊗x)(δ_h⊗y) = [g = x h x⁻¹] δ_g⊗xy. Elements of D⊗D (and D⊗D⊗D) are kept as
sparse dicts from index tuples to coefficients; everything else is numpy.
"""
import logging
from collections import defaultdict
from dataclasses import dataclass
from itertools import product
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from src.algebra.kernel import AssocAlgebra, algebra_from_constants, central_idempotents, center_basis, null_space
from src.hopf.groups import GroupSpec
from src.reporting.schemas import Certificate, Check
from src.utils.errors import NoMatching

logger = logging.getLogger(__name__)

Tensor = Dict[Tuple[int, ...], complex]
EXACT = 1e-12


def _clean(tensor: Tensor) -> Tensor:
    return {k: v for k, v in tensor.items() if abs(v) > 0}


def _distance(a: Tensor, b: Tensor) -> float:
    keys = set(a) | set(b)
    return max((abs(a.get(k, 0.0) - b.get(k, 0.0)) for k in keys), default=0.0)


class GroupDoubleAlgebra:
    """D(G) with its Hopf structure, R-matrix, Drinfeld element and integrals."""

    def __init__(self, group: GroupSpec, tolerance: float = 1e-9):
        self.group = group
        self.tolerance = tolerance
        n = group.order
        self.n = n
        self.dim = n * n
        self.mult_index = np.full((self.dim, self.dim), -1, dtype=int)
        for g, x, h, y in product(range(n), repeat=4):
            if g == group.conj(x, h):
                self.mult_index[self.index(g, x), self.index(h, y)] = self.index(g, group.mul(x, y))
        constants = np.zeros((self.dim, self.dim, self.dim))
        a_idx, b_idx = np.nonzero(self.mult_index >= 0)
        constants[a_idx, b_idx, self.mult_index[a_idx, b_idx]] = 1.0
        self.algebra: AssocAlgebra = algebra_from_constants(constants, tolerance=tolerance)
        self.R: Tensor = {
            (self.index(g, group.identity), self.index(k, g)): 1.0 for g in range(n) for k in range(n)
        }
        self.R_inverse: Tensor = {
            (self.index(g, group.identity), self.index(k, group.inverse[g])): 1.0 for g in range(n) for k in range(n)
        }
        self.u = self.drinfeld_element()
        self.u_closed_form = self.vector({self.index(g, group.inverse[g]): 1.0 for g in range(n)})
        # u S(u)⁻¹ = 1 for D(G), so the pivotal element is trivial and θ = u
        self.pivot = self.multiply(self.u, self.inverse(self.antipode(self.u)))
        self.theta = self.multiply(self.inverse(self.pivot), self.u)
        self.theta_inverse = self.inverse(self.theta)
        self.Lambda: Optional[np.ndarray] = None
        self.mu: Optional[np.ndarray] = None
        self.integral_scale = float("nan")

    # --- basis helpers ---

    def index(self, g: int, h: int) -> int:
        return g * self.n + h

    def pair(self, a: int) -> Tuple[int, int]:
        return divmod(a, self.n)

    def vector(self, coefficients: Dict[int, complex]) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        for a, c in coefficients.items():
            v[a] += c
        return v

    @property
    def unit(self) -> np.ndarray:
        return self.vector({self.index(g, self.group.identity): 1.0 for g in range(self.n)})

    def multiply(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return self.algebra.multiply(x, y)

    def inverse(self, x: np.ndarray) -> np.ndarray:
        return np.linalg.solve(self.algebra.left_regular(x), self.unit)

    def drinfeld_element(self) -> np.ndarray:
        """u = m∘(S⊗1)(R₂₁) = Σ S(R⁽²⁾) R⁽¹⁾."""
        eye = np.eye(self.dim)
        u = np.zeros(self.dim, dtype=complex)
        for (a, b), value in self.R.items():
            u += value * self.multiply(eye[self.antipode_index(b)], eye[a])
        return u

    # --- Hopf structure on basis elements ---

    def coproduct(self, a: int) -> Tensor:
        g, h = self.pair(a)
        return {(self.index(g1, h), self.index(self.group.mul(self.group.inverse[g1], g), h)): 1.0
                for g1 in range(self.n)}

    def counit(self, a: int) -> float:
        g, _ = self.pair(a)
        return 1.0 if g == self.group.identity else 0.0

    def antipode_index(self, a: int) -> int:
        g, h = self.pair(a)
        G = self.group
        return self.index(G.conj(G.inverse[h], G.inverse[g]), G.inverse[h])

    def antipode(self, x: np.ndarray) -> np.ndarray:
        out = np.zeros_like(x)
        for a in np.flatnonzero(x):
            out[self.antipode_index(a)] += x[a]
        return out

    def counit_of(self, x: np.ndarray) -> complex:
        return complex(sum(x[a] * self.counit(a) for a in np.flatnonzero(x)))

    def tensor_multiply(self, left: Tensor, right: Tensor) -> Tensor:
        out: Dict[Tuple[int, ...], complex] = defaultdict(complex)
        for ka, va in left.items():
            for kb, vb in right.items():
                key = tuple(int(self.mult_index[x, y]) for x, y in zip(ka, kb))
                if min(key) >= 0:
                    out[key] += va * vb
        return _clean(out)

    def coproduct_of(self, x: np.ndarray) -> Tensor:
        out: Dict[Tuple[int, ...], complex] = defaultdict(complex)
        for a in np.flatnonzero(x):
            for key, value in self.coproduct(a).items():
                out[key] += x[a] * value
        return _clean(out)

    def embed(self, tensor: Tensor, positions: Tuple[int, ...], arity: int) -> Tensor:
        """Places the legs of ``tensor`` at ``positions`` of an ``arity``-fold tensor, 1 elsewhere."""
        one = [self.index(g, self.group.identity) for g in range(self.n)]
        out: Dict[Tuple[int, ...], complex] = defaultdict(complex)
        free = [p for p in range(arity) if p not in positions]
        for key, value in tensor.items():
            for filler in product(one, repeat=len(free)):
                full = [0] * arity
                for p, k in zip(positions, key):
                    full[p] = k
                for p, k in zip(free, filler):
                    full[p] = k
                out[tuple(full)] += value
        return _clean(out)

    def apply_leg(self, tensor: Tensor, leg: int, func: Callable[[int], Tensor]) -> Tensor:
        """Applies a map D -> D^{⊗k} to one leg of ``tensor``."""
        out: Dict[Tuple[int, ...], complex] = defaultdict(complex)
        for key, value in tensor.items():
            for image, coefficient in func(key[leg]).items():
                out[key[:leg] + image + key[leg + 1:]] += value * coefficient
        return _clean(out)

    # --- integrals and Fourier transforms ---

    def solve_integrals(self) -> None:
        """Λ with xΛ = ε(x)Λ, μ with (id⊗μ)Δ(x) = μ(x)1, rescaled so that 𝔖₊∘𝔖₋ = id and ⟨μ, Λ⟩ = 1."""
        eye = np.eye(self.dim)
        rows = [self.algebra.left_regular(eye[a]) - self.counit(a) * eye for a in range(self.dim)]
        Lambda = null_space(np.vstack(rows), self.tolerance)[:, 0]

        system = np.zeros((self.dim * self.dim, self.dim), dtype=complex)
        unit = self.unit
        for x in range(self.dim):
            block = np.zeros((self.dim, self.dim), dtype=complex)
            for (b, c), value in self.coproduct(x).items():
                block[b, c] += value
            block[:, x] -= unit
            system[x * self.dim:(x + 1) * self.dim] = block
        mu = null_space(system, self.tolerance)[:, 0]
        mu = mu / (mu @ unit)

        self.mu = mu
        composite = self.fourier_plus() @ self.fourier_minus()
        scale = complex(np.trace(composite) / self.dim)
        mu = mu / np.sqrt(scale)
        if (mu @ unit).real < 0:
            mu = -mu
        self.mu = mu
        self.integral_scale = abs(scale)
        self.Lambda = Lambda / (mu @ Lambda)
        logger.info(f"Integrals of D({self.group.name}) solved; μ rescaled by 1/sqrt({abs(scale):.6g}).")

    def _fourier(self, left: Tensor, right: Tensor) -> np.ndarray:
        """Matrix of b -> (id⊗μ)(left (1⊗b) right)."""
        one = self.unit
        matrix = np.zeros((self.dim, self.dim), dtype=complex)
        for b in range(self.dim):
            middle = {(a, b): one[a] for a in np.flatnonzero(one)}
            total = self.tensor_multiply(self.tensor_multiply(left, middle), right)
            for (x, y), value in total.items():
                matrix[x, b] += value * self.mu[y]
        return matrix

    def fourier_plus(self) -> np.ndarray:
        """𝔖₊(b) = (id⊗μ)(R₂₁(1⊗b)R₁₂)."""
        r21 = {(b, a): v for (a, b), v in self.R.items()}
        return self._fourier(r21, self.R)

    def fourier_minus(self) -> np.ndarray:
        """𝔖₋(b) = (id⊗μ)(R₁₂⁻¹(1⊗b)R₂₁⁻¹)."""
        r21_inverse = {(b, a): v for (a, b), v in self.R_inverse.items()}
        return self._fourier(self.R_inverse, r21_inverse)

    def twist_map(self) -> np.ndarray:
        """𝒯(b) = θb."""
        return self.algebra.left_regular(self.theta)


def build_double(group: GroupSpec, tolerance: float = 1e-9) -> GroupDoubleAlgebra:
    double = GroupDoubleAlgebra(group, tolerance)
    double.solve_integrals()
    logger.info(f"Built D({group.name}) of dimension {double.dim}.")
    return double


def hopf_axioms_certificate(D: GroupDoubleAlgebra) -> Certificate:
    """Coassociativity, counit, multiplicativity of Δ, antipode, S² = id, quasitriangularity."""
    cert = Certificate(name=f"hopf_axioms:D({D.group.name})")
    coassoc = counit = multiplicative = antipode = 0.0
    eye = np.eye(D.dim)
    for a in range(D.dim):
        delta = D.coproduct(a)
        left = D.apply_leg(delta, 0, D.coproduct)
        right = D.apply_leg(delta, 1, D.coproduct)
        coassoc = max(coassoc, _distance(left, right))
        reduced = np.zeros(D.dim)
        for (b, c), value in delta.items():
            reduced[c] += D.counit(b) * value
        counit = max(counit, float(np.max(np.abs(reduced - eye[a]))))
        s_applied = np.zeros(D.dim, dtype=complex)
        for (b, c), value in delta.items():
            s_applied += value * D.multiply(eye[D.antipode_index(b)], eye[c])
        antipode = max(antipode, float(np.max(np.abs(s_applied - D.counit(a) * D.unit))))
        for b in range(D.dim):
            c = D.mult_index[a, b]
            product_delta = D.coproduct(c) if c >= 0 else {}
            multiplicative = max(multiplicative, _distance(product_delta, D.tensor_multiply(delta, D.coproduct(b))))
    involutive = max(abs(D.antipode_index(D.antipode_index(a)) - a) for a in range(D.dim))
    cert.checks.append(Check.below("coassociativity", coassoc, EXACT))
    cert.checks.append(Check.below("counit", counit, EXACT))
    cert.checks.append(Check.below("coproduct_multiplicative", multiplicative, EXACT))
    cert.checks.append(Check.below("antipode", antipode, EXACT))
    cert.checks.append(Check.below("antipode_involutive", float(involutive), 0.5))

    quasi = 0.0
    for a in range(D.dim):
        delta = D.coproduct(a)
        opposite = {(c, b): v for (b, c), v in delta.items()}
        quasi = max(quasi, _distance(D.tensor_multiply(opposite, D.R), D.tensor_multiply(D.R, delta)))
    r13, r23, r12 = D.embed(D.R, (0, 2), 3), D.embed(D.R, (1, 2), 3), D.embed(D.R, (0, 1), 3)
    first = _distance(D.apply_leg(D.R, 0, D.coproduct), D.tensor_multiply(r13, r23))
    second = _distance(D.apply_leg(D.R, 1, D.coproduct), D.tensor_multiply(r13, r12))
    cert.checks.append(Check.below("R_intertwines_coproduct", quasi, EXACT))
    cert.checks.append(Check.below("R_coproduct_left", first, EXACT))
    cert.checks.append(Check.below("R_coproduct_right", second, EXACT))
    return cert


def drinfeld_and_ribbon_checks(D: GroupDoubleAlgebra) -> Certificate:
    cert = Certificate(name=f"ribbon:D({D.group.name})")
    u, theta = D.u, D.theta

    def commutator(x: np.ndarray) -> float:
        return float(np.max(np.abs(D.algebra.left_regular(x) - D.algebra.right_regular(x))))

    cert.checks.append(Check.below("u_closed_form", float(np.max(np.abs(u - D.u_closed_form))), EXACT,
                                   detail="u = Σ_g δ_g⊗g⁻¹"))
    cert.checks.append(Check.below("u_invertible", float(np.max(np.abs(D.multiply(u, D.inverse(u)) - D.unit))), EXACT))
    cert.checks.append(Check.below("u_central", commutator(u), EXACT))
    u_inv_s_u = D.multiply(D.inverse(u), D.antipode(u))
    cert.checks.append(Check.below("u_inverse_S_u_central", commutator(u_inv_s_u), EXACT))
    pivot_tensor = {(a, b): D.pivot[a] * D.pivot[b] for a in np.flatnonzero(D.pivot) for b in np.flatnonzero(D.pivot)}
    cert.checks.append(Check.below("pivot_grouplike", _distance(D.coproduct_of(D.pivot), _clean(pivot_tensor)), EXACT))
    cert.checks.append(Check.below("theta_central", commutator(theta), EXACT))
    cert.checks.append(Check.below("theta_squared", float(np.max(np.abs(
        D.multiply(theta, theta) - D.multiply(u, D.antipode(u))))), EXACT))
    cert.checks.append(Check.below("theta_antipode", float(np.max(np.abs(D.antipode(theta) - theta))), EXACT))
    cert.checks.append(Check.below("theta_counit", abs(D.counit_of(theta) - 1.0), EXACT))
    cert.checks.append(Check.below("u_counit", abs(D.counit_of(u) - 1.0), EXACT))

    r21 = {(b, a): v for (a, b), v in D.R.items()}
    monodromy = D.tensor_multiply(r21, D.R)
    u_tensor = {(a, b): u[a] * u[b] for a in np.flatnonzero(u) for b in np.flatnonzero(u)}
    cert.checks.append(Check.below("coproduct_of_u", _distance(
        D.tensor_multiply(D.coproduct_of(u), monodromy), u_tensor), EXACT))
    cert.checks.append(Check.below("quantum_trace_is_trace", float(np.max(np.abs(
        D.multiply(u, D.theta_inverse) - D.unit))), EXACT))
    return cert


def fourier_transforms(D: GroupDoubleAlgebra) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Matrices of 𝔖₊, 𝔖₋ and 𝒯."""
    return D.fourier_plus(), D.fourier_minus(), D.twist_map()


def fourier_certificate(D: GroupDoubleAlgebra) -> Tuple[Certificate, complex]:
    """The modular relations of the Fourier transforms; also returns λ_H with 𝔖₊(θ) = λ_H θ⁻¹."""
    s_plus, s_minus, t_map = fourier_transforms(D)
    eye = np.eye(D.dim)
    cert = Certificate(name=f"fourier:D({D.group.name})")
    cert.notes["integral_scale"] = f"{D.integral_scale:.12g}"
    cert.checks.append(Check.below("plus_minus_inverse", float(np.max(np.abs(s_plus @ s_minus - eye))), 1e-10))
    cert.checks.append(Check.below("minus_plus_inverse", float(np.max(np.abs(s_minus @ s_plus - eye))), 1e-10))

    image = s_plus @ D.theta
    lam = complex(np.vdot(D.theta_inverse, image) / np.vdot(D.theta_inverse, D.theta_inverse))
    cert.checks.append(Check.below("theta_eigen", float(np.max(np.abs(image - lam * D.theta_inverse))), 1e-10))
    st = s_plus @ t_map
    cert.checks.append(Check.below("modular_relation", float(np.max(np.abs(st @ st @ st - lam * s_plus @ s_plus))), 1e-9))

    center = center_basis(D.algebra)
    worst = max(float(np.max(np.abs(D.algebra.left_regular(s_plus @ z) - D.algebra.right_regular(s_plus @ z))))
                for z in center)
    cert.checks.append(Check.below("center_preserved", worst, 1e-10))
    return cert, lam


@dataclass(frozen=True)
class HopfModularData:
    projectors: List[np.ndarray]
    dims: np.ndarray
    S: np.ndarray
    S_fourier: np.ndarray
    S_stated: np.ndarray
    S_center: np.ndarray
    mu_projectors: np.ndarray
    expansion_residual: float
    T: np.ndarray
    lambda_h: complex
    classes: List[int]


def _irrep_trace(D: GroupDoubleAlgebra, P: np.ndarray, d: float) -> np.ndarray:
    """Tr_P(e_a) for every basis element, from μ(e_a P) rescaled so that Tr_P(1) = d."""
    return (D.mu @ D.algebra.right_regular(P)) * d / complex(D.mu @ P)


def hopf_smatrix(D: GroupDoubleAlgebra, seed: int = 0, max_attempts: int = 8) -> HopfModularData:
    """S from the Hopf link (Tr_i ⊗ Tr_j)(R₂₁R₁₂) and from the Fourier transform; trivial irrep first."""
    projectors = central_idempotents(D.algebra, seed=seed, max_attempts=max_attempts)
    projectors.sort(key=lambda P: abs(D.counit_of(P)) < 0.5)
    regular = np.einsum("abb->a", D.algebra.constants)
    dims = np.array([np.sqrt(complex(regular @ P)).real for P in projectors])
    traces = [_irrep_trace(D, P, d) for P, d in zip(projectors, dims)]

    r21 = {(b, a): v for (a, b), v in D.R.items()}
    monodromy = D.tensor_multiply(r21, D.R)
    k = len(projectors)
    S = np.zeros((k, k), dtype=complex)
    for i, j in product(range(k), repeat=2):
        S[i, j] = sum(value * traces[i][a] * traces[j][b] for (a, b), value in monodromy.items())

    s_plus, _, _ = fourier_transforms(D)
    images = [s_plus @ P for P in projectors]
    mu_projectors = np.array([complex(D.mu @ P) for P in projectors])
    S_stated = np.array([[dims[i] * complex(D.mu @ D.multiply(projectors[i], images[j])) for j in range(k)]
                         for i in range(k)])
    # 𝔖₊(P_j) = Σ_i c_ij P_i, c_ij = μ(P_i 𝔖₊(P_j)) / μ(P_i); d_i μ(P_i 𝔖₊(P_j)) is c_ij only when μ(P_i) = 1/d_i
    S_center = S_stated / (dims[:, None] * mu_projectors[:, None])
    expansion = max(float(np.max(np.abs(images[j] - sum(S_center[i, j] * projectors[i] for i in range(k)))))
                    for j in range(k))
    # with μ(δ_g⊗h) = δ_{h,e}: c_ij = (d_j / (|G| d_i)) S_ij
    S_fourier = D.n * S_center * dims[:, None] / dims[None, :]

    twists = []
    classes = []
    for P in projectors:
        n = int(np.argmax(np.abs(P)))
        twists.append(complex(P[n] / D.multiply(D.theta, P)[n]))
        support = [g for g in range(D.n) if abs(P[D.index(g, D.group.identity)]) > 1e-9]
        classes.append(support[0])
    _, lam = fourier_certificate(D)
    logger.info(f"Hopf-side S-matrix of D({D.group.name}) has rank {k}.")
    return HopfModularData(projectors=projectors, dims=dims, S=S, S_fourier=S_fourier, S_stated=S_stated,
                           S_center=S_center, mu_projectors=mu_projectors, expansion_residual=expansion,
                           T=np.array(twists), lambda_h=lam, classes=classes)


def hopf_modular_certificate(D: GroupDoubleAlgebra, data: HopfModularData) -> Certificate:
    cert = Certificate(name=f"hopf_modular:D({D.group.name})")
    k = len(data.projectors)
    cert.checks.append(Check.below("projectors_sum", float(np.max(np.abs(sum(data.projectors) - D.unit))), 1e-8))
    rounded = np.round(data.dims)
    cert.checks.append(Check.below("integer_dims", float(np.max(np.abs(data.dims - rounded))), 1e-6))
    cert.checks.append(Check.below("dims_squared", abs(float(np.sum(rounded ** 2)) - D.n ** 2), 0.5))
    cert.checks.append(Check.below("fourier_expansion", data.expansion_residual, 1e-9,
                                   detail="𝔖₊(P_j) = Σ_i c_ij P_i"))
    expected_mu = data.dims ** 2 / D.n
    cert.checks.append(Check.below("mu_of_projectors", float(np.max(np.abs(data.mu_projectors - expected_mu))), 1e-9,
                                   detail="μ(P_i) = d_i² / |G|"))
    cert.notes["stated_formula_factors"] = ",".join(
        f"{(d * m).real:.6g}" for d, m in zip(data.dims, data.mu_projectors)
    )
    cert.checks.append(Check.below("formulas_agree", float(np.max(np.abs(data.S - data.S_fourier))), 1e-9))
    det = abs(np.linalg.det(data.S))
    cert.checks.append(Check.above("det_S", det, np.sqrt(D.tolerance) * float(D.n) ** k, detail=f"|det S| = {det:.6g}"))
    orders = max(abs(w ** D.group.element_order(g) - 1.0) for w, g in zip(data.T, data.classes))
    cert.checks.append(Check.below("twist_orders", orders, 1e-9))
    return cert


def kerler_diagram_check(D: GroupDoubleAlgebra) -> Certificate:
    """𝔖₋(ι(x) ι̂(β)) = ι̂(ℱ(x)) ι(ℱ̂(β)) on the basis x = h, β = δ_g.

    ℱ(x)(y) = μ_G(x y⁻¹) and ℱ̂(β) = Σ_k β(k) k⁻¹, with μ_G = δ_e and Λ_G = Σ_k k.
    """
    G, n = D.group, D.n
    _, s_minus, _ = fourier_transforms(D)

    def iota(x: np.ndarray) -> np.ndarray:
        return D.vector({D.index(k, h): x[h] for k in range(n) for h in range(n) if x[h] != 0})

    def iota_hat(beta: np.ndarray) -> np.ndarray:
        return D.vector({D.index(g, G.identity): beta[g] for g in range(n) if beta[g] != 0})

    def fourier(x: np.ndarray) -> np.ndarray:
        return np.array([sum(x[h] * (G.mul(h, G.inverse[y]) == G.identity) for h in range(n)) for y in range(n)],
                        dtype=complex)

    def fourier_hat(beta: np.ndarray) -> np.ndarray:
        out = np.zeros(n, dtype=complex)
        for k in range(n):
            out[G.inverse[k]] += beta[k]
        return out

    eye = np.eye(n)
    worst = other_order = 0.0
    for g, h in product(range(n), repeat=2):
        x, beta = eye[h], eye[g]
        lhs = s_minus @ D.multiply(iota(x), iota_hat(beta))
        rhs = D.multiply(iota_hat(fourier(x)), iota(fourier_hat(beta)))
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        lhs_other = s_minus @ D.multiply(iota_hat(beta), iota(x))
        rhs_other = D.multiply(iota(fourier_hat(beta)), iota_hat(fourier(x)))
        other_order = max(other_order, float(np.max(np.abs(lhs_other - rhs_other))))
    cert = Certificate(name=f"kerler:D({G.name})")
    cert.checks.append(Check.below("diagram_commutes", worst, 1e-12))
    cert.notes["other_factor_order_residual"] = f"{other_order:.3e}"
    return cert


def _match(hopf: HopfModularData, dims: np.ndarray, twists: np.ndarray, S: np.ndarray,
           tolerance: float) -> Optional[List[int]]:
    k = len(hopf.dims)
    assignment: List[int] = []

    def fits(i: int, t: int) -> bool:
        if abs(hopf.dims[i] - dims[t]) > tolerance or abs(hopf.T[i] - twists[t]) > tolerance:
            return False
        for i2, t2 in enumerate(assignment):
            if abs(hopf.S[i, i2] - S[t, t2]) > tolerance or abs(hopf.S[i2, i] - S[t2, t]) > tolerance:
                return False
        return abs(hopf.S[i, i] - S[t, t]) <= tolerance

    def extend(i: int) -> bool:
        if i == k:
            return True
        for t in range(k):
            if t not in assignment and fits(i, t):
                assignment.append(t)
                if extend(i + 1):
                    return True
                assignment.pop()
        return False

    return assignment if extend(0) else None


def cross_check_vs_tube(hopf: HopfModularData, dims: np.ndarray, twists: np.ndarray, S: np.ndarray,
                        tolerance: float = 1e-7) -> Certificate:
    """Bijection Hopf irreps -> tube simples preserving d, ω and S."""
    if len(hopf.dims) != len(dims):
        raise NoMatching(f"{len(hopf.dims)} Hopf irreps vs {len(dims)} tube simples")
    matching = _match(hopf, dims, twists, S, tolerance)
    if matching is None:
        raise NoMatching("no bijection matches dimensions, twists and S entries")
    cert = Certificate(name="cross_check")
    permuted = S[np.ix_(matching, matching)]
    cert.checks.append(Check.below("S_match", float(np.max(np.abs(hopf.S - permuted))), tolerance))
    cert.checks.append(Check.below("T_match", float(np.max(np.abs(hopf.T - twists[matching]))), tolerance))
    cert.checks.append(Check.below("fourier_S_match", float(np.max(np.abs(hopf.S_fourier - permuted))), tolerance))
    # d_i μ(P_i 𝔖₊(P_j)) against the tube S: the factor is μ(P_i) d_j / |G|
    d = hopf.dims
    n = int(round(float(np.sqrt(np.sum(d ** 2)))))
    factor = np.outer(hopf.mu_projectors, d) / n
    rescaled = permuted * factor
    scale = max(1.0, float(np.max(np.abs(hopf.S_stated))))
    cert.checks.append(Check.below("stated_formula_normalization", float(np.max(np.abs(hopf.S_stated - rescaled))),
                                   tolerance * scale, detail="d_i μ(P_i 𝔖₊(P_j)) = μ(P_i) d_j S_ij / |G|"))
    cert.notes["matching"] = ",".join(str(t) for t in matching)
    return cert
