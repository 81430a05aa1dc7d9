from fractions import Fraction

import pytest

from rankineis.eisenstein import (derham_eis, eis_depleted, eis_holo, eis_padic, nabla,
                                  syntomic_alpha_rig, TSymSection)
from rankineis.exactnum import CycElement, zeta_neg
from rankineis.qseries import CycRing, theta, u_op, v_op, deplete


def test_holo_constant_and_a1():
    for k in range(0, 5):
        F = eis_holo(k, 1, 5, 10)
        z = CycElement.zeta(5)
        assert F.coeffs[0] == zeta_neg(k)
        assert F.coeffs[1] == z + (-1) ** k * z ** 4
    with pytest.raises(ValueError):
        eis_holo(2, 5, 5, 10)


def test_holo_a6():
    z = CycElement.zeta(5)
    F = eis_holo(0, 1, 5, 8)
    s = lambda e: z ** e + z ** (5 - e)
    assert F.coeffs[6] == s(1) + 2 * s(2) + 3 * s(3) + 6 * s(1)


def test_holo_symmetry():
    for k in range(4):
        A = eis_holo(k, 1, 7, 30)
        B = eis_holo(k, 6, 7, 30)
        for n in range(1, 30):
            assert B.coeffs[n] == A.coeffs[n].galois(6)


@pytest.mark.parametrize("p", [5, 7])
def test_theta_shift_all_parameters(p):
    N = 3
    for t in range(-6, 7):
        for s in range(-6, 7):
            F = eis_padic(t, s, 1, N, p, 60, 6)
            G = eis_padic(t + 2, s - 1, 1, N, p, 60, 6)
            T = theta(F)
            if T.ring != G.ring:
                exact_is_T = str(T.ring).startswith("Q")
                T, G = (T.change_ring(G.ring), G) if exact_is_T else (T, G.change_ring(T.ring))
            assert T == G, (t, s)


def test_s_zero_matches_holo_away_from_p():
    N, p, k = 5, 7, 2
    F = eis_padic(k + 2, 0, 1, N, p, 101)
    H = eis_holo(k, 1, N, 101)
    assert F.coeffs[0] == 0
    for n in range(1, 101):
        if n % p:
            assert F.coeffs[n] == H.coeffs[n]


def test_u_eigenvector():
    for (k, kp, j) in [(2, 0, 0), (4, 2, 1), (6, 0, 0)]:
        F = eis_padic(k - kp, kp - j + 1, 1, 5, 7, 150, 8)
        assert u_op(F, 7) == F.scale(7 ** (k - j)).truncate(u_op(F, 7).prec)


def test_depleted():
    F = eis_padic(2, 1, 1, 5, 7, 140, 6)
    D = eis_depleted(2, 1, 1, 5, 7, 140, 6)
    assert D == F - v_op(u_op(F, 7), 7).truncate(140)
    assert u_op(D, 7).is_zero()
    assert D.ring.is_zero(D.coeffs[0])


def test_derham_section():
    sec = derham_eis(2, 1, 5, 20)
    assert all(sec[j].is_zero() for j in range(2))
    assert sec[2].coeffs[0] == -25 * zeta_neg(2)
    s0 = derham_eis(0, 1, 5, 20)
    assert s0[0] == eis_holo(0, 1, 5, 20).scale(-1)


def test_alpha_rig_components():
    sec = syntomic_alpha_rig(0, 1, 5, 7, 30, 6)
    assert sec.k == 0 and sec[0] == eis_padic(0, 1, 1, 5, 7, 30, 6).scale(-1)
    assert len(syntomic_alpha_rig(3, 1, 5, 7, 10, 6).components) == 4


@pytest.mark.parametrize("p", [7])
def test_telescoping(p):
    N = 5
    for b in (1, 2):
        for k in range(0, 7):
            sec = nabla(syntomic_alpha_rig(k, b, N, p, 80, 8))
            top = eis_padic(k + 2, 0, b, N, p, 80, 8).scale(-N ** k)
            assert all(sec[i].is_zero() for i in range(k))
            assert sec[k] == top


def test_nabla_boundary():
    F = eis_padic(2, 1, 1, 5, 7, 20, 6)
    z = F.scale(0)
    sec = TSymSection(2, [F, z, z])  # pure v^[2,0]
    out = nabla(sec)
    assert out[0] == theta(F)
    assert out[1].is_zero() and out[2].is_zero()
