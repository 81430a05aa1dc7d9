import random
from fractions import Fraction

import pytest
import sympy

from rankineis.eisenstein import eis_padic
from rankineis.modspace import fixture
from rankineis.qseries import CycRing
from rankineis.regulator import (CUP_SIGN, FpPolynomial, HypothesisError, UntestableConfiguration,
                                 beilinson_constant, c_polynomial, decompose_ab,
                                 euler_factor_identity, fp_star, perrin_riou_factor,
                                 perrin_riou_sign_check, power_series_identity_check,
                                 regulator_two_route_check, splur_closed_form, splur_prefactor)


def test_fp_star_linear():
    a, b = sympy.symbols("a b")
    assert fp_star(FpPolynomial([1, -a]), FpPolynomial([1, -b])) == FpPolynomial([1, -a * b])


def test_fp_star_unit():
    R = FpPolynomial.from_roots([2, 3, 5])
    assert fp_star(FpPolynomial([1, -1]), R) == R
    assert R @ FpPolynomial([1]) == FpPolynomial([1])


def test_fp_star_random_against_roots():
    rnd = random.Random(11)
    for _ in range(10):
        ra = [Fraction(rnd.randint(-9, 9), rnd.randint(1, 5)) for _ in range(rnd.randint(1, 3))]
        rb = [Fraction(rnd.randint(-9, 9), rnd.randint(1, 5)) for _ in range(rnd.randint(1, 3))]
        lhs = fp_star(FpPolynomial.from_roots(ra), FpPolynomial.from_roots(rb))
        assert lhs == FpPolynomial.from_roots([x * y for x in ra for y in rb])


def test_decompose_ab():
    a, b = decompose_ab(FpPolynomial.from_roots([2, 3]))
    assert a == 1
    X, Y = sympy.symbols("X Y")
    assert b.free_symbols <= {X, Y}


def test_c_polynomial():
    al, be = sympy.symbols("alpha beta", nonzero=True)
    c = c_polynomial(al, be, 1, 7)
    assert c.equal
    assert len(c.terms()) == 2
    with pytest.raises(ZeroDivisionError):
        c_polynomial(0, 3, 0, 5)


def test_constants():
    assert beilinson_constant(0, 0, 0) == -4
    assert beilinson_constant(2, 2, 1) == 1
    assert perrin_riou_factor(1, 0) == Fraction(-1, 4)
    assert euler_factor_identity()
    assert all(perrin_riou_sign_check(k, kp, j)
               for k in range(5) for kp in range(k + 1) for j in range(kp + 1))


def test_splur_prefactor_closed_form():
    assert CUP_SIGN == -1
    for k in range(5):
        for kp in range(k + 1):
            for j in range(kp + 1):
                assert splur_prefactor(k, kp, j)[0] == splur_closed_form(k, kp, j)
    with pytest.raises(ValueError):
        splur_prefactor(1, 2, 0)


@pytest.fixture(scope="module")
def lemma_inputs():
    g = fixture("11a")
    p, M, Q = 7, 6, 100
    ring = CycRing(11, p ** M)
    A = g.qexp(Q).map(lambda c: ring.coerce(c), ring)
    B = eis_padic(2, 1, 1, 11, p, Q, M)
    return A, g.rational_ap(7), B


def test_lemma_exact_identity(lemma_inputs):
    A, lam, B = lemma_inputs
    rep = power_series_identity_check(A, lam, 7, B, 49, 7)
    assert rep.ok
    # the form without the V-correction term is recorded, and does not hold
    assert not rep.printed_ok


def test_lemma_hypotheses_checked(lemma_inputs):
    A, lam, B = lemma_inputs
    with pytest.raises(HypothesisError):
        power_series_identity_check(A, lam, 7, B, 50, 7)
    with pytest.raises(HypothesisError):
        power_series_identity_check(A, lam + 1, 7, B, 49, 7)


def test_two_route_degenerate():
    with pytest.raises(ZeroDivisionError):
        regulator_two_route_check(fixture("11a"), fixture("11a"), 0, 7)


def test_two_route_untestable():
    with pytest.raises(UntestableConfiguration):
        regulator_two_route_check(fixture("14k8"), fixture("14a"), 0, 13)
