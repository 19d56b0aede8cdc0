"""End-to-end criteria on the bundled inputs; the S3 cases are marked slow."""
from dataclasses import replace

import numpy as np
import pytest

from conftest import DATA_DIR, PHI, same_up_to_permutation, sorted_complex
from src.center.analysis import double_simples, s_matrix
from src.center.half_braidings import braided_embeddings, conditional_expectation, object_trace, tensor_halfbraiding
from src.data_processing.ingestion import load_category
from src.fusion.validation import validate
from src.hopf.group_double import (
    build_double,
    fourier_certificate,
    hopf_modular_certificate,
    hopf_smatrix,
    kerler_diagram_check,
)
from src.hopf.groups import cyclic_group, symmetric_group
from src.pipeline.double_pipeline import DoublePipeline
from src.tube.algebra import build_tube_algebra
from src.utils.config import Settings

DIM_FIB = (5 + np.sqrt(5)) / 2
VALID = ["vec_z2", "vec_z2_symmetric", "vec_z3", "fibonacci", "fibonacci_gauge", "semion", "yang_lee"]


@pytest.fixture(scope="module")
def pipeline():
    return DoublePipeline(Settings(tolerance=1e-9, seed=7, log_level="WARNING"), timings=False)


def run_double(pipeline, name):
    return pipeline.double(DATA_DIR / "categories" / f"{name}.json")


def complex_of(pair):
    return complex(pair[0], pair[1])


def test_toric_code(double_z2, tube_z2):
    simples, data = double_z2
    assert len(simples) == 4
    np.testing.assert_allclose(data.dims, 1.0, atol=1e-8)
    np.testing.assert_allclose(sorted_complex(data.T), sorted_complex([1, 1, 1, -1]), atol=1e-8)
    assert data.delta_plus == pytest.approx(2.0) and data.delta_minus == pytest.approx(2.0)
    assert data.dim_double == pytest.approx(4.0)
    signs = np.array([[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]])
    assert same_up_to_permutation(signs.astype(complex), data.S, 1e-8)


@pytest.mark.slow
def test_s3_double(pipeline):
    report = run_double(pipeline, "vec_s3")
    assert report.passed, report.failure
    dims = sorted(round(row.dimension[0]) for row in report.simples)
    assert dims == [1, 1, 2, 2, 2, 2, 3, 3]
    assert sum(row.dimension[0] ** 2 for row in report.simples) == pytest.approx(36.0, abs=1e-7)
    bound = next(c for c in report.certificates if c["name"] == "count_bound")
    assert bound["checks"][0]["detail"] == "8 <= 18"


def test_fibonacci_double(double_fib):
    simples, data = double_fib
    np.testing.assert_allclose(sorted(d.real for d in data.dims), [1, PHI, PHI, PHI ** 2], atol=1e-7)
    assert abs(data.delta_plus - DIM_FIB) < 1e-8
    assert abs(data.delta_minus - DIM_FIB) < 1e-8
    assert abs(data.dim_double - DIM_FIB ** 2) < 1e-7
    s_fib = np.array([[1, PHI], [PHI, -1]], dtype=complex)
    assert same_up_to_permutation(np.kron(s_fib, s_fib.conj()), data.S, 1e-7)


@pytest.mark.parametrize("name", VALID)
def test_gauss_sums_and_modularity(pipeline, name):
    report = run_double(pipeline, name)
    assert report.passed, report.failure
    dim_c = complex_of(report.values["dim_c"])
    md = report.modular_data
    scale = max(1.0, abs(dim_c))
    assert abs(complex_of(md.delta_plus) - dim_c) < 1e-8 * scale
    assert abs(complex_of(md.delta_minus) - dim_c) < 1e-8 * scale
    assert abs(complex_of(md.delta_plus) * complex_of(md.delta_minus) - complex_of(md.dim_double)) < 1e-8 * scale ** 2
    names = {c["name"]: c for c in report.certificates}
    assert names["modularity"]["passed"]


@pytest.mark.parametrize("fixture", ["tube_z2", "tube_fib", "tube_semion"])
def test_s_order_four_on_random_elements(request, fixture):
    tube = request.getfixturevalue(fixture)
    rng = np.random.default_rng(2024)
    for _ in range(50):
        x = (rng.standard_normal(tube.dim) + 1j * rng.standard_normal(tube.dim)) * tube.xi0
        y = x
        for _ in range(4):
            y = tube.apply_s(y)
        assert np.max(np.abs(y - x)) < 1e-8


@pytest.mark.parametrize("group", [cyclic_group(2), cyclic_group(3), symmetric_group(3)], ids=["Z2", "Z3", "S3"])
def test_hopf_suite(group):
    D = build_double(group)
    fourier, _ = fourier_certificate(D)
    for name in ("plus_minus_inverse", "modular_relation", "center_preserved"):
        assert fourier.check(name).passed
    assert kerler_diagram_check(D).check("diagram_commutes").residual < 1e-10
    data = hopf_smatrix(D, seed=5)
    assert hopf_modular_certificate(D, data).check("formulas_agree").passed


@pytest.mark.parametrize("category, group", [
    ("vec_z2", cyclic_group(2)),
    ("vec_z3", cyclic_group(3)),
    pytest.param("vec_s3", symmetric_group(3), marks=pytest.mark.slow),
])
def test_cross_check(pipeline, category, group):
    report = pipeline.compare(DATA_DIR / "categories" / f"{category}.json", group)
    assert report.passed, report.failure
    cross = report.certificates[-1]
    assert cross["name"] == "cross_check" and cross["passed"]


@pytest.mark.parametrize("calc_fixture", ["semion_calc", "fib_calc"])
def test_conditional_expectation_properties(request, calc_fixture):
    calc = request.getfixturevalue(calc_fixture)
    forward, backward = braided_embeddings(calc)
    x = tensor_halfbraiding(calc, forward[1], backward[1])
    y = tensor_halfbraiding(calc, forward[1], forward[1])
    rng = np.random.default_rng(9)
    for _ in range(50):
        t = {i: rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)) for i, n in x.mult.items()}
        e_t = conditional_expectation(calc, x, x, t)
        e_e_t = conditional_expectation(calc, x, x, e_t)
        for i in e_t:
            np.testing.assert_allclose(e_e_t[i], e_t[i], atol=1e-9)
        assert abs(object_trace(calc.cat, e_t) - object_trace(calc.cat, t)) < 1e-9
        common = set(x.mult) & set(y.mult)
        s = {i: rng.standard_normal((y.mult[i], x.mult[i])) + 0j for i in common}
        e_s = conditional_expectation(calc, x, y, s)
        e_e_s = conditional_expectation(calc, x, y, e_s)
        for i in e_s:
            np.testing.assert_allclose(e_e_s[i], e_s[i], atol=1e-9)


def _perturbed(cat, key, row, col, amount=1e-3):
    blocks = {k: v.copy() for k, v in cat.F.items()}
    blocks[key][row, col] += amount
    return replace(cat, F=blocks, _cache={})


def test_single_f_entry_perturbations_fail_pentagon(fibonacci):
    keys = [k for k, block in fibonacci.F.items() if 0 not in k[:3] and block.size]
    assert keys
    for key in keys:
        block = fibonacci.F[key]
        for row in range(block.shape[0]):
            for col in range(block.shape[1]):
                if block[row, col] == 0:
                    continue
                cert = validate(_perturbed(fibonacci, key, row, col))
                assert not cert.check("pentagon").passed, (key, row, col)


def test_gauge_equivalent_inputs(double_fib):
    tube = build_tube_algebra(load_category(DATA_DIR / "categories" / "fibonacci_gauge.json"))
    data = s_matrix(tube, double_simples(tube, seed=3))
    reference = double_fib[1]
    np.testing.assert_allclose(sorted_complex(data.dims), sorted_complex(reference.dims), atol=1e-7)
    np.testing.assert_allclose(sorted_complex(data.T), sorted_complex(reference.T), atol=1e-7)
    assert same_up_to_permutation(reference.S, data.S, 1e-7)
