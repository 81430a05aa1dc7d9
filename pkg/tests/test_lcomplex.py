import mpmath
import pytest

from rankineis.exactnum import DirichletCharacter
from rankineis.lcomplex import (Ball, LSeriesSpec, afe_value, as_fraction, critical_ratio,
                                dirichlet_L, rankin_series)
from rankineis.modspace import fixture


@pytest.fixture(scope="module")
def spec():
    return LSeriesSpec(fixture("delta_e10", 400), fixture("delta", 400), 400)


def test_dirichlet_L():
    assert Ball(mpmath.pi ** 2 / 6, 0).overlaps(dirichlet_L(DirichletCharacter.trivial(1), 2))
    L = dirichlet_L(DirichletCharacter.trivial(1), 2, removed_primes=(2,))
    assert abs(L.center - mpmath.pi ** 2 / 8) < 1e-12


def test_ball_arithmetic():
    a, b = Ball(2, 0.1), Ball(4, 0.2)
    assert (a * b).contains(8)
    assert (a / b).contains(0.5)
    with pytest.raises(ZeroDivisionError):
        a / Ball(0.1, 0.2)


def test_afe_matches_series(spec):
    a = afe_value(spec, 21)
    b = rankin_series(spec.f, spec.g, 21, spec.n_max, spec)
    assert a.overlaps(b)
    assert abs(a.center - b.center) / abs(b.center) < 1e-10


def test_root_number(spec):
    afe_value(spec, 21)
    assert abs(spec.epsilon - 1) < 1e-8


def test_critical_ratio(spec):
    r, _ = critical_ratio(spec, 20, 21)
    assert abs(r.center - mpmath.mpf(11) / 50) < 1e-9
    assert as_fraction(r.center, 1000) == as_fraction(mpmath.mpf(11) / 50)
    with pytest.raises(ValueError):
        critical_ratio(spec, 11, 21)


def test_perturbation_moves_value(spec):
    base = afe_value(spec, 21)
    q = spec.perturbed(2)
    try:
        moved = afe_value(q, 21)
    except ArithmeticError:
        return
    assert not moved.overlaps(base)


def test_series_needs_convergence(spec):
    b = rankin_series(spec.f, spec.g, 18, spec.n_max, spec)
    a = afe_value(spec, 18)
    assert a.radius < b.radius
