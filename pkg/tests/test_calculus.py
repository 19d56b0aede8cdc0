import numpy as np
import pytest

from conftest import PHI
from src.morphisms.calculus import chain, compose
from src.utils.errors import DegenerateBasis, ShapeMismatch, WordTooLong

T = 1  # label "t" / "s"


def test_hom_dimensions(fib_calc):
    assert fib_calc.hom_dim((T, T), (T, T)) == 2
    assert fib_calc.hom_dim((T, T, T), (T,)) == 2
    assert fib_calc.hom_dim((), (T, T)) == 1
    assert fib_calc.hom_dim((T,), ()) == 0


def test_long_words_rejected(fib_calc):
    with pytest.raises(WordTooLong):
        fib_calc.identity((T, T, T, T))
    with pytest.raises(WordTooLong):
        fib_calc.tensor(fib_calc.identity((T, T)), fib_calc.identity((T, T)))


def test_compose_type_mismatch(fib_calc):
    with pytest.raises(ShapeMismatch):
        compose(fib_calc.identity((T,)), fib_calc.identity((T, T)))


def test_identity_is_neutral(fib_calc, np_random):
    f = fib_calc.random((T, T), (T, T), np_random)
    assert (compose(fib_calc.identity((T, T)), f) - f).max_abs() < 1e-12
    assert (compose(f, fib_calc.identity((T, T))) - f).max_abs() < 1e-12


def test_interchange_law(fib_calc, np_random):
    f1, f2 = (fib_calc.random((T, T), (T, T), np_random) for _ in range(2))
    g1, g2 = (fib_calc.random((T,), (T,), np_random) for _ in range(2))
    lhs = compose(fib_calc.tensor(f1, g1), fib_calc.tensor(f2, g2))
    rhs = fib_calc.tensor(compose(f1, f2), compose(g1, g2))
    assert (lhs - rhs).max_abs() < 1e-10


def test_f_move_inverse_pair(fib_calc):
    forward = fib_calc.f_move((T, T, T), T, "right", "left")
    backward = fib_calc.f_move((T, T, T), T, "left", "right")
    np.testing.assert_allclose(forward @ backward, np.eye(2), atol=1e-12)
    # Fibonacci F^{ttt}_t is a real symmetric involution
    np.testing.assert_allclose(forward @ forward, np.eye(2), atol=1e-12)


def test_f_move_needs_three_letters(fib_calc):
    with pytest.raises(ShapeMismatch):
        fib_calc.f_move((T, T), 0)


def test_zigzag_and_loops(fib_calc):
    first, second = fib_calc.zigzag_residuals(T)
    assert first < 1e-12 and second < 1e-12
    left, right = fib_calc.loops(T)
    assert left == pytest.approx(PHI)
    assert right == pytest.approx(PHI)


def test_semion_loops_are_one(semion_calc):
    left, right = semion_calc.loops(T)
    assert left == pytest.approx(1.0)
    assert right == pytest.approx(1.0)


def test_traces_of_identity(fib_calc):
    identity = fib_calc.identity((T, T))
    assert fib_calc.trace(identity) == pytest.approx(PHI ** 2)
    assert fib_calc.right_trace(identity) == pytest.approx(PHI ** 2)
    assert fib_calc.left_trace(identity) == pytest.approx(PHI ** 2)


def test_left_and_right_traces_agree(fib_calc, np_random):
    f = fib_calc.random((T, T), (T, T), np_random)
    assert fib_calc.left_trace(f) == pytest.approx(fib_calc.right_trace(f))
    assert fib_calc.trace(f) == pytest.approx(fib_calc.right_trace(f))


def test_dual_basis_and_completeness(fib_calc):
    basis = [fib_calc.split(T, T, m) for m in (0, T)]
    for m, t in zip((0, T), basis):
        (t_dual,) = fib_calc.dual_basis([t])
        assert compose(t_dual, t).scalar() == pytest.approx(1.0)
    assert fib_calc.completeness_residual(T, T) < 1e-12


def test_dual_basis_rejects_overcomplete_family(fib_calc):
    t = fib_calc.split(T, T, T)
    with pytest.raises(DegenerateBasis):
        fib_calc.dual_basis([t, t])


def test_braiding_inverse(fib_calc):
    c = fib_calc.braiding(T, T)
    c_inv = fib_calc.braiding_inverse(T, T)
    assert (compose(c_inv, c) - fib_calc.identity((T, T))).max_abs() < 1e-12


def test_semion_double_braiding_on_unit_channel(semion_calc):
    # c(s, s)² restricted to the unit channel is R² = -1
    c = semion_calc.braiding(T, T)
    square = chain(semion_calc.fuse(T, T, 0), c, c, semion_calc.split(T, T, 0))
    assert square.scalar() == pytest.approx(-1.0)
