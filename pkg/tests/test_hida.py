import random
from fractions import Fraction

import pytest

from rankineis.exactnum import NonOrdinaryError, rational_reconstruct
from rankineis.hida import (IsotypicProjector, OrdinaryProjector, PadicRankin, berkowitz,
                            default_probes, hensel_split, ordinary_oracle, predicted_ratio,
                            unit_idempotent, up_matrix)
from rankineis.linalg import charpoly
from rankineis.modspace import build_space, fixture


def test_default_probes():
    assert tuple(default_probes(1)) == (2, 3, 5)
    assert tuple(default_probes(70)) == (3, 11, 13)


def test_berkowitz_matches_charpoly():
    rnd = random.Random(7)
    for n in range(1, 6):
        A = [[rnd.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        exact = [Fraction(c) for c in charpoly([[Fraction(x) for x in r] for r in A])]
        assert berkowitz(A) == exact
        m = 7 ** 5
        assert berkowitz(A, m) == [int(c) % m for c in exact]


def test_hensel_split():
    # (X - 1)(X - 7)(X - 3) mod 7^6
    p, M = 7, 6
    m = p ** M
    poly = [(-21) % m, 31, (-11) % m, 1]
    u, n = hensel_split(poly, p, M)
    assert len(u) - 1 == 2 and len(n) - 1 == 1


def test_ordinary_projector_against_oracle():
    for N, w, p in [(7, 6, 7), (11, 4, 11), (5, 4, 5)]:
        sp = build_space(N, w, lattice_prime=p, prec=p * 20)
        up = up_matrix(sp, p, 6)
        E = OrdinaryProjector(up)
        assert E.matrix == ordinary_oracle(up)


def test_isotypic_projector_11a():
    f = fixture("11a")
    sp = build_space(11, 2, lattice_prime=11, prec=400)
    proj = OrdinaryProjector(up_matrix(sp, 11, 6))
    iso = IsotypicProjector(proj, f)
    x = sp.coordinates(f.qexp(sp.prec))
    assert iso.coefficient(x) == 1


def test_non_ordinary_raises():
    with pytest.raises(NonOrdinaryError):
        PadicRankin(fixture("delta_e10"), 5, 6)


def test_flagship_prediction():
    f, g1, g2 = fixture("delta_e10"), fixture("delta"), fixture("delta_e4")
    rk = PadicRankin(f, 11, 8)
    pred, unit = predicted_ratio(rk, g2, g1)
    assert rational_reconstruct(pred) == Fraction(11, 21)
    assert unit.is_unit() or unit.valuation_floor >= 0
