import random
from math import factorial

import pytest

from rankineis.tsym import (SymVector, TSymVector, cg_map, cg_oracle, cg_trilinear,
                            motive_fil_dim, trilinear_value, tsym_mul)


def test_tsym_mul():
    u = TSymVector.basis(1, 0)
    v = TSymVector.basis(0, 1)
    assert tsym_mul(u, u) == 2 * TSymVector.basis(2, 0)
    assert tsym_mul(TSymVector(0, [1]), u) == u
    assert tsym_mul(u, v) == TSymVector.basis(1, 1)


def test_cg_oracle_exhaustive():
    for k in range(5):
        for kp in range(5):
            for j in range(min(k, kp) + 1):
                K = k + kp - 2 * j
                for r in range(K + 1):
                    t = TSymVector.basis(r, K - r)
                    assert cg_map(k, kp, j, t) == cg_oracle(k, kp, j, t), (k, kp, j, r)


def test_cg_trilinear_closed_form():
    for k in range(7):
        for kp in range(7):
            for j in range(min(k, kp) + 1):
                a, b = SymVector.basis(0, k), SymVector.basis(kp, 0)
                val = cg_trilinear(k, kp, j, a, b, TSymVector.basis(kp - j, k - j))
                assert val.pair_det(j).scalar() == trilinear_value(k, kp, j)
                K = k + kp - 2 * j
                for s in range(K + 1):
                    if s != kp - j:
                        t = TSymVector.basis(s, K - s)
                        assert cg_trilinear(k, kp, j, a, b, t).pair_det(j).scalar() == 0


def test_trilinear_example():
    v = cg_trilinear(2, 2, 1, SymVector.basis(0, 2), SymVector.basis(2, 0), TSymVector.basis(1, 1))
    assert v.pair_det(1).scalar() == 4


def test_det_twist_not_dropped():
    v = cg_trilinear(1, 1, 1, SymVector.basis(0, 1), SymVector.basis(1, 0), TSymVector(0, [1]))
    with pytest.raises(ValueError):
        v.scalar()


def test_cg_inequalities():
    with pytest.raises(ValueError):
        cg_map(1, 1, 2, TSymVector(0, [1]))


def test_trilinear_multilinear():
    rnd = random.Random(5)
    for _ in range(30):
        k, kp = rnd.randint(0, 4), rnd.randint(0, 4)
        j = rnd.randint(0, min(k, kp))
        K = k + kp - 2 * j
        a1 = SymVector(k, [rnd.randint(-3, 3) for _ in range(k + 1)])
        a2 = SymVector(k, [rnd.randint(-3, 3) for _ in range(k + 1)])
        b = SymVector(kp, [rnd.randint(-3, 3) for _ in range(kp + 1)])
        t = TSymVector(K, [rnd.randint(-3, 3) for _ in range(K + 1)])
        s = SymVector(k, [x + y for x, y in zip(a1.coeffs, a2.coeffs)])
        lhs = cg_trilinear(k, kp, j, s, b, t).value
        rhs = cg_trilinear(k, kp, j, a1, b, t).value + cg_trilinear(k, kp, j, a2, b, t).value
        assert lhs == rhs


def hodge_oracle(k, kp, n):
    # Hodge types of f x g: p-values k+k'+2, k+1, k'+1, 0
    return sum(1 for h in (k + kp + 2, k + 1, kp + 1, 0) if h >= n)


def test_motive_fil_dim():
    assert motive_fil_dim(2, 2, 0) == 4
    assert motive_fil_dim(2, 2, 1) == 3
    assert motive_fil_dim(2, 3, 8) == 0
    for k in range(5):
        for kp in range(5):
            for n in range(-2, k + kp + 5):
                assert motive_fil_dim(k, kp, n) == hodge_oracle(k, kp, n)
