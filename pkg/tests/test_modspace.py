import json
from fractions import Fraction

import pytest

from rankineis.modspace import (build_space, check_against_qexp, dim_cusp_forms, dim_modular_forms, eigenforms,
                                eta_quotients, export_newform, fixture, gamma0_index,
                                ingest_newform, matrices_commute, newform_from_qexp, p_stabilize,
                                sturm_bound)
from rankineis.hida import default_probes
from rankineis.qseries import eta_quotient, u_op


def test_dimensions():
    assert gamma0_index(11) == 12
    assert [dim_modular_forms(1, w) for w in (4, 12, 14, 24)] == [1, 2, 1, 3]
    assert dim_cusp_forms(11, 2) == 1
    assert dim_cusp_forms(5, 4) == 1
    assert dim_modular_forms(7, 6) == 5


def test_sturm_bound():
    assert sturm_bound(1, 12, margin=0) == 1
    assert sturm_bound(11, 2, margin=0) == 2


def test_spaces_certified():
    for N, w in [(1, 12), (11, 2), (5, 4), (11, 4), (7, 6)]:
        sp = build_space(N, w)
        assert sp.certified
        assert sp.dim == dim_modular_forms(N, w)


def test_eta_quotients_are_in_space():
    sp = build_space(11, 2, prec=60)
    assert sp.contains(eta_quotient({1: 2, 11: 2}, 60))
    for r in eta_quotients(11, 2):
        assert r


@pytest.mark.parametrize("name,level,weight,expected", [
    ("delta", 1, 12, {2: -24, 3: 252, 5: 4830, 7: -16744, 11: 534612, 13: -577738,
                      17: -6905934, 19: 10661420}),
    ("11a", 11, 2, {2: -2, 3: -1, 5: 1, 7: -2, 11: 1, 13: 4, 17: -2, 19: 0}),
    ("5k4", 5, 4, None),
])
def test_eigenforms(name, level, weight, expected):
    if expected is None:
        eta = eta_quotient({1: 4, 5: 4}, 21)
        expected = {ell: eta.coeffs[ell] for ell in (2, 3, 5, 7, 11, 13, 17, 19)}
    sp = build_space(level, weight, prec=200)
    probes = default_probes(level)
    mats = [sp.hecke_matrix(ell) for ell in probes]
    assert all(matrices_commute(a, b) for a in mats for b in mats)
    forms = [nf for nf in eigenforms(sp, probes, simple_only=True) if nf.constant == 0]
    assert len(forms) == 1
    nf = forms[0]
    assert {ell: nf.rational_ap(ell) for ell in expected} == expected
    assert {ell: fixture(name).rational_ap(ell) for ell in expected} == expected


def test_newform_roundtrip():
    nf = fixture("11a")
    doc = json.loads(json.dumps(export_newform(nf, n_check=30)))
    back = ingest_newform(doc)
    assert all(back.rational_ap(ell) == nf.rational_ap(ell) for ell in (2, 3, 5, 7, 97))


def test_newform_from_qexp_consistency():
    D = fixture("delta").qexp(60)
    assert check_against_qexp(newform_from_qexp(1, 12, D), D)
    bad = D + D.scale(0)
    bad.coeffs[4] += 1
    assert not check_against_qexp(newform_from_qexp(1, 12, bad), bad)
    bad.coeffs[1] = 2
    with pytest.raises(ValueError):
        newform_from_qexp(1, 12, bad)


def test_p_stabilization():
    nf = fixture("11a")
    from rankineis.modspace import hecke_roots
    alpha, beta = hecke_roots(nf, 7, 8)
    fa = p_stabilize(nf, 7, alpha, 200)
    # U_7 f_alpha = alpha f_alpha
    assert u_op(fa, 7) == fa.truncate(u_op(fa, 7).prec).scale(alpha.value)


def test_extend_reproduces_basis():
    sp = build_space(5, 4, prec=40)
    old = [list(b.coeffs) for b in sp.basis]
    sp.extend(120)
    assert all(b.coeffs[:40] == o for b, o in zip(sp.basis, old))
    assert sp.prec == 120
