import numpy as np
import pytest

from conftest import sorted_complex
from src.hopf.group_double import (
    build_double,
    cross_check_vs_tube,
    drinfeld_and_ribbon_checks,
    fourier_certificate,
    fourier_transforms,
    hopf_axioms_certificate,
    hopf_modular_certificate,
    hopf_smatrix,
    kerler_diagram_check,
)
from src.hopf.groups import cyclic_group, symmetric_group
from src.utils.errors import NoMatching

OMEGA = np.exp(2j * np.pi / 3)


@pytest.fixture(scope="module")
def d_z2():
    return build_double(cyclic_group(2))


@pytest.fixture(scope="module")
def d_s3():
    return build_double(symmetric_group(3))


@pytest.fixture(scope="module")
def hopf_z2(d_z2):
    return hopf_smatrix(d_z2, seed=3)


def test_structure(d_z2, d_s3):
    assert d_z2.dim == 4
    assert d_s3.dim == 36
    np.testing.assert_allclose(d_s3.multiply(d_s3.unit, d_s3.unit), d_s3.unit)


@pytest.mark.parametrize("group", [cyclic_group(2), cyclic_group(3), symmetric_group(3)])
def test_hopf_and_ribbon_axioms(group):
    D = build_double(group)
    for cert in (hopf_axioms_certificate(D), drinfeld_and_ribbon_checks(D)):
        assert cert.passed, cert.first_failure()


def test_integrals_are_normalized(d_s3):
    assert abs(complex(d_s3.mu @ d_s3.Lambda) - 1.0) < 1e-9
    assert np.isfinite(d_s3.integral_scale)


def test_fourier_transforms_are_inverse(d_s3):
    s_plus, s_minus, _ = fourier_transforms(d_s3)
    np.testing.assert_allclose(s_plus @ s_minus, np.eye(d_s3.dim), atol=1e-10)
    cert, _ = fourier_certificate(d_s3)
    assert cert.passed, cert.first_failure()
    assert "integral_scale" in cert.notes


def test_kerler_diagram(d_s3):
    cert = kerler_diagram_check(d_s3)
    assert cert.passed
    assert "other_factor_order_residual" in cert.notes


def test_z2_modular_data(d_z2, hopf_z2):
    assert len(hopf_z2.projectors) == 4
    np.testing.assert_allclose(hopf_z2.dims, np.ones(4), atol=1e-9)
    np.testing.assert_allclose(np.abs(hopf_z2.S), np.ones((4, 4)), atol=1e-9)
    np.testing.assert_allclose(hopf_z2.S, hopf_z2.S_fourier, atol=1e-9)
    np.testing.assert_allclose(sorted_complex(hopf_z2.T), sorted_complex([1, 1, 1, -1]), atol=1e-9)
    assert hopf_modular_certificate(d_z2, hopf_z2).passed


@pytest.mark.slow
def test_s3_modular_data(d_s3):
    data = hopf_smatrix(d_s3, seed=3)
    assert sorted(np.round(data.dims).astype(int).tolist()) == [1, 1, 2, 2, 2, 2, 3, 3]
    np.testing.assert_allclose(data.S[0], data.dims, atol=1e-9)
    np.testing.assert_allclose(
        sorted_complex(data.T), sorted_complex([1, 1, 1, 1, 1, -1, OMEGA, OMEGA.conjugate()]), atol=1e-9
    )
    cert = hopf_modular_certificate(d_s3, data)
    assert cert.passed, cert.first_failure()


def test_cross_check_against_tube(hopf_z2, double_z2):
    _, tube_data = double_z2
    cert = cross_check_vs_tube(hopf_z2, tube_data.dims, tube_data.T, tube_data.S)
    assert cert.passed
    assert sorted(int(t) for t in cert.notes["matching"].split(",")) == [0, 1, 2, 3]


def test_cross_check_detects_mismatch(hopf_z2, double_z2):
    _, tube_data = double_z2
    with pytest.raises(NoMatching):
        cross_check_vs_tube(hopf_z2, tube_data.dims, -tube_data.T, tube_data.S)
    with pytest.raises(NoMatching):
        cross_check_vs_tube(hopf_z2, tube_data.dims[:3], tube_data.T[:3], tube_data.S[:3, :3])


@pytest.mark.parametrize("group", [cyclic_group(2), cyclic_group(3), symmetric_group(3)], ids=["Z2", "Z3", "S3"])
def test_drinfeld_element_comes_from_r_matrix(group):
    D = build_double(group)
    np.testing.assert_allclose(D.u, D.u_closed_form, atol=1e-12)
    np.testing.assert_allclose(D.pivot, D.unit, atol=1e-12)
    np.testing.assert_allclose(D.theta, D.u, atol=1e-12)
    cert = drinfeld_and_ribbon_checks(D)
    for name in ("u_closed_form", "u_inverse_S_u_central", "pivot_grouplike", "theta_central"):
        assert cert.check(name).passed, name


def test_stated_formula_on_projectors(d_z2, hopf_z2):
    np.testing.assert_allclose(hopf_z2.mu_projectors, hopf_z2.dims ** 2 / d_z2.n, atol=1e-9)
    assert hopf_z2.expansion_residual < 1e-9
    cert = hopf_modular_certificate(d_z2, hopf_z2)
    assert cert.check("fourier_expansion").passed
    assert cert.check("mu_of_projectors").passed
    assert len(cert.notes["stated_formula_factors"].split(",")) == 4
    # μ(P_i) = 1/2 and d_j = 1 for D(Z2), so the stated formula gives S/4
    np.testing.assert_allclose(hopf_z2.S_stated, hopf_z2.S / 4, atol=1e-9)


def test_stated_formula_against_tube(hopf_z2, double_z2):
    _, tube_data = double_z2
    cert = cross_check_vs_tube(hopf_z2, tube_data.dims, tube_data.T, tube_data.S)
    assert cert.check("fourier_S_match").passed
    assert cert.check("stated_formula_normalization").passed


@pytest.mark.slow
def test_s3_stated_formula(d_s3):
    data = hopf_smatrix(d_s3, seed=3)
    np.testing.assert_allclose(data.mu_projectors, data.dims ** 2 / 6, atol=1e-9)
    expected = data.S * np.outer(data.mu_projectors, data.dims) / 6
    np.testing.assert_allclose(data.S_stated, expected, atol=1e-9)
