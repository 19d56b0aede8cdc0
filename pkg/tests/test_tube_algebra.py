import numpy as np
import pytest

from src.algebra.kernel import associativity_residual, center_basis
from src.tube.algebra import tube_certificate
from src.utils.errors import NotInXi0


@pytest.mark.parametrize("fixture, expected", [("tube_z2", 4), ("tube_fib", 7), ("tube_semion", 4), ("tube_s3", 36)])
def test_dimension(request, fixture, expected):
    assert request.getfixturevalue(fixture).dim == expected


def test_xi0_of_group_tubes(tube_z2, tube_s3):
    # i == k exactly when j commutes with i: |G| times the number of classes
    assert tube_z2.xi0.all()
    assert tube_s3.dim == 36
    assert int(tube_s3.xi0.sum()) == 18


def test_fibonacci_has_components_outside_xi0(tube_fib):
    assert not tube_fib.xi0.all()
    outside = np.zeros(tube_fib.dim, dtype=complex)
    outside[int(np.flatnonzero(~tube_fib.xi0)[0])] = 1.0
    with pytest.raises(NotInXi0):
        tube_fib.apply_s(outside)


def test_associative(tube_fib):
    assert associativity_residual(tube_fib.algebra.constants) < 1e-10


def test_unit_is_lambda_times_identity(tube_fib, tube_z2):
    for tube in (tube_fib, tube_z2):
        assert tube.unit_closed_form_residual < 1e-9
        np.testing.assert_allclose(tube.unit, tube.closed_form_unit(tube.lam), atol=1e-9)


def test_unit_acts_trivially(tube_fib, np_random):
    x = np_random.standard_normal(tube_fib.dim) + 1j * np_random.standard_normal(tube_fib.dim)
    np.testing.assert_allclose(tube_fib.multiply(tube_fib.unit, x), x, atol=1e-9)
    np.testing.assert_allclose(tube_fib.multiply(x, tube_fib.unit), x, atol=1e-9)


def test_t_is_central(tube_fib, tube_semion):
    assert tube_fib.commutator_residual(tube_fib.t_vector()) < 1e-9
    assert tube_semion.commutator_residual(tube_semion.t_vector()) < 1e-9


def test_phi_of_t_is_global_dimension(tube_fib):
    assert tube_fib.phi(tube_fib.t_vector()) == pytest.approx(tube_fib.dim_c)


def test_s_has_order_four_on_xi0(tube_fib, np_random):
    x = (np_random.standard_normal(tube_fib.dim) + 0j) * tube_fib.xi0
    y = x
    for _ in range(4):
        y = tube_fib.apply_s(y)
    np.testing.assert_allclose(y, x, atol=1e-8)


@pytest.mark.parametrize("fixture", ["tube_z2", "tube_z2_symmetric", "tube_fib", "tube_semion"])
def test_certificate_passes(request, fixture):
    cert = tube_certificate(request.getfixturevalue(fixture), seed=11)
    assert cert.passed, cert.first_failure()
    assert cert.notes["unit_closed_form"] == "lambda"


@pytest.mark.parametrize("fixture", ["tube_z2", "tube_fib", "tube_semion"])
def test_trivial_idempotent_is_central_idempotent(request, fixture):
    tube = request.getfixturevalue(fixture)
    z = tube.trivial_idempotent()
    np.testing.assert_allclose(tube.multiply(z, z), z, atol=1e-9)
    assert tube.commutator_residual(z) < 1e-9
    assert tube.phi(z) == pytest.approx(1.0)


@pytest.mark.parametrize("fixture", ["tube_z2", "tube_fib", "tube_semion"])
def test_s_preserves_the_center(request, fixture):
    tube = request.getfixturevalue(fixture)
    for z in center_basis(tube.algebra):
        assert np.max(np.abs(z[~tube.xi0]), initial=0.0) < 1e-8
        image = tube.apply_s(z)
        scale = max(1.0, float(np.max(np.abs(image))))
        assert tube.commutator_residual(image) < 1e-8 * scale
