"""Command orchestration: validate, double, group-double, compare.

Every command returns a ``Report``. Input errors (unreadable files, schema
violations, invalid groups) propagate to the caller; any other library error
stops the run and is recorded as the report's failure.
"""
import logging
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple, Union

import numpy as np

from src.center.analysis import (
    DoubleSimple,
    ModularData,
    count_bound_check,
    double_simples,
    gauss_and_dimension_checks,
    induction_check,
    s_matrix,
    simple_residual,
    simples_certificate,
    twist,
    verify_modularity,
    verlinde_fusion,
)
from src.center.half_braidings import braided_embeddings, idempotent_from_halfbraiding, match_simple, z2_center
from src.data_processing.ingestion import load_category, load_group_file
from src.fusion.data import FusionCategoryData
from src.fusion.validation import validate
from src.hopf.group_double import (
    GroupDoubleAlgebra,
    HopfModularData,
    build_double,
    cross_check_vs_tube,
    drinfeld_and_ribbon_checks,
    fourier_certificate,
    hopf_axioms_certificate,
    hopf_modular_certificate,
    hopf_smatrix,
    kerler_diagram_check,
)
from src.hopf.groups import GroupSpec, cyclic_group, group_from_file, group_of_category, symmetric_group
from src.reporting.schemas import Certificate, Check, ModularDataReport, Report, SimpleRow
from src.tube.algebra import TubeAlgebra, build_tube_algebra, tube_certificate
from src.utils.config import Settings
from src.utils.errors import DoubleError, InvalidGroup, ParseError, SchemaError

logger = logging.getLogger(__name__)

INPUT_ERRORS = (ParseError, SchemaError, InvalidGroup)


def round_sig(x: float, digits: int = 12) -> float:
    value = float(f"{x:.{digits}g}")
    return 0.0 if value == 0 else value


def pair(z: complex) -> List[float]:
    """Complex number as [re, im], 12 significant digits."""
    z = complex(z)
    return [round_sig(z.real), round_sig(z.imag)]


def matrix_pairs(m: np.ndarray) -> List[List[List[float]]]:
    return [[pair(v) for v in row] for row in m]


def resolve_group(path: Optional[Union[str, Path]] = None, cyclic: Optional[int] = None,
                  symmetric: Optional[int] = None, data_dir: Optional[Path] = None) -> GroupSpec:
    """Group from a file or from one of the shorthands."""
    given = [path is not None, cyclic is not None, symmetric is not None]
    if sum(given) != 1:
        raise InvalidGroup("give exactly one of a group file, --cyclic or --symmetric")
    if cyclic is not None:
        if cyclic < 1:
            raise InvalidGroup(f"cyclic order must be positive, got {cyclic}")
        return cyclic_group(cyclic)
    if symmetric is not None:
        if not 1 <= symmetric <= 5:
            raise InvalidGroup(f"symmetric degree must lie in 1..5, got {symmetric}")
        return symmetric_group(symmetric)
    return group_from_file(load_group_file(path, data_dir))


def _projector_residual(D: GroupDoubleAlgebra, P: np.ndarray, twist_value: complex) -> float:
    """max of |P·P - P|, the commutator residual of P and |θP - ω⁻¹P|."""
    square = float(np.max(np.abs(D.multiply(P, P) - P)))
    commutator = float(np.max(np.abs(D.algebra.left_regular(P) - D.algebra.right_regular(P))))
    turned = float(np.max(np.abs(D.multiply(D.theta, P) - P / twist_value)))
    return max(square, commutator, turned)


class DoublePipeline:
    """Runs the commands with the tolerance, seed and split budget of ``settings``."""

    def __init__(self, settings: Settings, timings: bool = True):
        self.settings = settings
        self.record_timings = timings
        self._timings: Dict[str, float] = {}

    # --- bookkeeping ---

    @contextmanager
    def _stage(self, name: str) -> Iterator[None]:
        logger.info(f"--- {name} ---")
        start = time.perf_counter()
        try:
            yield
        finally:
            self._timings[name] = round(time.perf_counter() - start, 4)

    def _new_report(self, command: str, descriptor: Dict[str, str]) -> Report:
        self._timings = {}
        return Report(command=command, input=descriptor, tolerance=self.settings.tolerance, seed=self.settings.seed)

    def _add(self, report: Report, cert: Certificate) -> bool:
        report.certificates.append(cert.summary())
        if cert.passed:
            logger.info(f"Certificate '{cert.name}' passed ({len(cert.checks)} checks).")
            return True
        failure = cert.first_failure()
        logger.error(f"Certificate '{cert.name}' failed at '{failure.name}' "
                     f"(residual {failure.residual:.3e}, threshold {failure.threshold:.1e})")
        if report.failure is None:
            report.failure = f"{cert.name}:{failure.name}"
        report.passed = False
        return False

    def _fail(self, report: Report, error: DoubleError) -> Report:
        logger.error(f"{type(error).__name__}: {error}")
        if report.failure is None:
            report.failure = f"{type(error).__name__}: {error}"
        report.passed = False
        return report

    def _finish(self, report: Report) -> Report:
        if self.record_timings:
            report.timings = dict(self._timings)
        logger.info(f"Command '{report.command}' finished: {'PASSED' if report.passed else 'FAILED'}")
        return report

    # --- commands ---

    def validate(self, path: Union[str, Path]) -> Report:
        cat = load_category(path, self.settings.data_dir)
        report = self._new_report("validate", {"category": str(path), "name": cat.name})
        with self._stage("validation"):
            cert = validate(cat, self.settings.tolerance)
        self._add(report, cert)
        return self._finish(report)

    def double(self, path: Union[str, Path]) -> Report:
        cat = load_category(path, self.settings.data_dir)
        report = self._new_report("double", {"category": str(path), "name": cat.name})
        try:
            self._run_double(cat, report)
        except INPUT_ERRORS:
            raise
        except DoubleError as e:
            self._fail(report, e)
        return self._finish(report)

    def _run_double(self, cat: FusionCategoryData, report: Report) -> Optional[Tuple[TubeAlgebra, List[DoubleSimple], ModularData]]:
        tol, seed = self.settings.tolerance, self.settings.seed
        with self._stage("validation"):
            valid = self._add(report, validate(cat, tol))
        if not valid:
            return None

        with self._stage("tube_algebra"):
            tube = build_tube_algebra(cat, tol)
            self._add(report, tube_certificate(tube, seed))
        with self._stage("simples"):
            simples = double_simples(tube, seed=seed, max_attempts=self.settings.max_split_attempts)
            self._add(report, simples_certificate(tube, simples))
        with self._stage("modular_data"):
            data = s_matrix(tube, simples)
            self._add(report, verify_modularity(data, tube))
            self._add(report, gauss_and_dimension_checks(data, tube.dim_c))
            self._add(report, count_bound_check(simples, cat))
            self._add(report, induction_check(simples, cat, tube.dim_c))
            self._add(report, self._verlinde_certificate(data, simples))

        labels = cat.ring.labels
        report.simples = [
            SimpleRow(index=s.index, dimension=pair(s.d), twist=pair(s.omega),
                      multiplicities={labels[i]: n for i, n in s.mult.items()},
                      residual=round_sig(simple_residual(tube, s)))
            for s in simples
        ]
        report.modular_data = self._modular_report(data.S, data.normalized_s(tube.dim_c), data.T,
                                                   data.conjugation, data.delta_plus, data.delta_minus,
                                                   data.dim_double)
        report.values.update({
            "dim_c": pair(tube.dim_c), "lambda": pair(tube.lam),
            "unit_lambda_residual": pair(tube.unit_closed_form_residual),
            "unit_dim_c_residual": pair(tube.unit_dim_c_residual),
        })
        if cat.braided:
            with self._stage("braided_input"):
                self._add(report, self._braided_certificate(tube, simples))
        return tube, simples, data

    def _verlinde_certificate(self, data: ModularData, simples: List[DoubleSimple]) -> Certificate:
        """Verlinde coefficients against the fusion of the underlying objects: N_XY^Z d(Z) summed = d(X)d(Y)."""
        fusion = verlinde_fusion(data)
        cert = Certificate(name="verlinde")
        dims = data.dims
        worst = float(np.max(np.abs(np.einsum("xyz,z->xy", fusion, dims) - np.outer(dims, dims))))
        cert.checks.append(Check.below("fusion_dimensions", worst, 1e-6 * max(1.0, abs(data.dim_double))))
        unit = data.unit_index
        identity = np.all(fusion[unit] == np.eye(len(simples), dtype=int))
        cert.checks.append(Check.below("unit_fusion", 0.0 if identity else 1.0, 0.5))
        return cert

    def _braided_certificate(self, tube: TubeAlgebra, simples: List[DoubleSimple]) -> Certificate:
        """Embeddings C -> Z(C) through the braiding and its inverse, and the modularity of C."""
        cat = tube.cat
        calc = tube.calculus
        cert = Certificate(name="braided_input")
        transparent = z2_center(calc, self.settings.tolerance)
        cert.notes["z2_center"] = ",".join(cat.ring.labels[k] for k in transparent)
        cert.notes["input_modular"] = str(transparent == [0]).lower()
        forward, backward = braided_embeddings(calc, self.settings.tolerance)
        unmatched = 0
        dim_gap = twist_gap = 0.0
        images: Dict[str, List[int]] = {"I": [], "I~": []}
        for tag, family in (("I", forward), ("I~", backward)):
            for k, hb in enumerate(family):
                z = idempotent_from_halfbraiding(tube, hb)
                index = match_simple(z, simples)
                if index is None:
                    unmatched += 1
                    continue
                images[tag].append(index)
                dim_gap = max(dim_gap, abs(simples[index].d - cat.dims[k]))
                twist_gap = max(twist_gap, abs(twist(tube, z) - simples[index].omega))
        cert.checks.append(Check.below("embeddings_match_simples", float(unmatched), 0.5))
        cert.checks.append(Check.below("embedding_dimensions", dim_gap, 1e-7))
        cert.checks.append(Check.below("twist_from_half_braiding", twist_gap, 1e-7))
        cert.notes["image_I"] = ",".join(str(i) for i in images["I"])
        cert.notes["image_I~"] = ",".join(str(i) for i in images["I~"])
        return cert

    @staticmethod
    def _modular_report(S: np.ndarray, normalized: np.ndarray, T: np.ndarray, conjugation: List[int],
                        delta_plus: complex, delta_minus: complex, dim_double: complex) -> ModularDataReport:
        return ModularDataReport(
            S=matrix_pairs(S), S_normalized=matrix_pairs(normalized), T=[pair(t) for t in T],
            conjugation=list(conjugation), delta_plus=pair(delta_plus), delta_minus=pair(delta_minus),
            dim_double=pair(dim_double),
        )

    def group_double(self, group: GroupSpec) -> Report:
        report = self._new_report("group-double", {"group": group.name, "order": str(group.order)})
        try:
            self._run_group_double(group, report)
        except DoubleError as e:
            self._fail(report, e)
        return self._finish(report)

    def _run_group_double(self, group: GroupSpec, report: Report) -> Tuple[GroupDoubleAlgebra, HopfModularData]:
        tol, seed = self.settings.tolerance, self.settings.seed
        with self._stage("hopf_structure"):
            D = build_double(group, tol)
            self._add(report, hopf_axioms_certificate(D))
            self._add(report, drinfeld_and_ribbon_checks(D))
        with self._stage("fourier"):
            fourier, lam = fourier_certificate(D)
            self._add(report, fourier)
            self._add(report, kerler_diagram_check(D))
        with self._stage("hopf_modular_data"):
            data = hopf_smatrix(D, seed=seed, max_attempts=self.settings.max_split_attempts)
            self._add(report, hopf_modular_certificate(D, data))

        order = float(group.order)
        normalized = data.S / order
        square = normalized @ normalized
        conjugation = [int(np.argmax(np.abs(row))) for row in square]
        d2 = data.dims ** 2
        report.simples = [
            SimpleRow(index=i, dimension=pair(d), twist=pair(w), multiplicities={},
                      residual=round_sig(_projector_residual(D, P, w)))
            for i, (P, d, w) in enumerate(zip(data.projectors, data.dims, data.T))
        ]
        report.modular_data = self._modular_report(
            data.S, normalized, data.T, conjugation,
            complex(np.sum(data.T * d2)), complex(np.sum(d2 / data.T)), complex(np.sum(d2)),
        )
        report.values.update({"lambda_h": pair(lam), "integral_scale": pair(D.integral_scale)})
        return D, data

    def compare(self, path: Union[str, Path], group: GroupSpec) -> Report:
        cat = load_category(path, self.settings.data_dir)
        report = self._new_report("compare", {"category": str(path), "name": cat.name, "group": group.name})
        try:
            with self._stage("identify_group"):
                mapping = group_of_category(cat, group, self.settings.tolerance)
            report.input["label_map"] = ",".join(group.labels[g] for g in mapping)
            tube_side = self._run_double(cat, report)
            if tube_side is None:
                return self._finish(report)
            _, simples, data = tube_side
            _, hopf = self._run_group_double(group, report)
            with self._stage("cross_check"):
                dims = np.array([s.d for s in simples])
                cert = cross_check_vs_tube(hopf, dims, data.T, data.S)
            self._add(report, cert)
        except INPUT_ERRORS:
            raise
        except DoubleError as e:
            self._fail(report, e)
        return self._finish(report)

