"""Acceptance criteria, one pass/fail line each.

Run with pytest, or directly: python3 tests/test_acceptance.py
"""
import random
import sys
from fractions import Fraction
from math import factorial

import pytest

from rankineis.eisenstein import eis_depleted, eis_padic, nabla, syntomic_alpha_rig
from rankineis.exactnum import all_characters, gauss_sum, rational_reconstruct
from rankineis.hida import PadicRankin, calibrate, default_probes
from rankineis.lcomplex import LSeriesSpec, afe_value, algebraic_part, rankin_series
from rankineis.modspace import build_space, eigenforms, fixture, matrices_commute
from rankineis.qseries import CycRing, QExpansion, QQ, deplete, eta_quotient, theta, u_op, v_op
from rankineis.regulator import (FpPolynomial, HypothesisError, UntestableConfiguration,
                                 beilinson_constant, c_polynomial, fp_star, perrin_riou_factor,
                                 power_series_identity_check, regulator_two_route_check)
from rankineis.tsym import (SymVector, TSymVector, cg_map, cg_oracle, cg_trilinear,
                            motive_fil_dim)

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:
    ACCEPTANCE_LINES = {}


def c1_clebsch_gordan():
    n = 0
    for k in range(5):
        for kp in range(5):
            for j in range(min(k, kp) + 1):
                K = k + kp - 2 * j
                for r in range(K + 1):
                    t = TSymVector.basis(r, K - r)
                    if cg_map(k, kp, j, t) != cg_oracle(k, kp, j, t):
                        return False, "cg_map != oracle at (%d,%d,%d) r=%d" % (k, kp, j, r)
                    n += 1
    m = 0
    for k in range(7):
        for kp in range(7):
            for j in range(min(k, kp) + 1):
                v = cg_trilinear(k, kp, j, SymVector.basis(0, k), SymVector.basis(kp, 0),
                                 TSymVector.basis(kp - j, k - j)).pair_det(j).scalar()
                want = Fraction(factorial(k) * factorial(kp),
                                factorial(j) * factorial(k - j) * factorial(kp - j))
                if v != want:
                    return False, "trilinear (%d,%d,%d) = %s, want %s" % (k, kp, j, v, want)
                m += 1
    return True, "%d oracle images, %d trilinear values exact" % (n, m)


def c2_eisenstein_operators():
    Q, M, N = 150, 6, 3
    n = 0
    for p in (5, 7):
        series = {}

        def F(t, s):
            if (t, s) not in series:
                series[(t, s)] = eis_padic(t, s, 1, N, p, Q, M)
            return series[(t, s)]

        for t in range(-6, 7):
            for s in range(-6, 7):
                a, b = theta(F(t, s)), F(t + 2, s - 1)
                if a.ring != b.ring:
                    if str(a.ring).startswith("Q"):
                        a = a.change_ring(b.ring)
                    else:
                        b = b.change_ring(a.ring)
                if a != b:
                    return False, "theta shift fails at p=%d (t,s)=(%d,%d)" % (p, t, s)
                n += 1
        for k, kp, j in [(2, 0, 0), (4, 2, 1), (6, 0, 0)]:
            G = F(k - kp, kp - j + 1)
            U = u_op(G, p)
            if U != G.scale(p ** (k - j)).truncate(U.prec):
                return False, "U_%d eigenvalue fails for (%d,%d,%d)" % (p, k, kp, j)
            D = eis_depleted(k - kp, kp - j + 1, 1, N, p, Q, M)
            if D != G - v_op(U, p).truncate(Q) or D != deplete(G, p):
                return False, "(1-VU)F != F^[p] for (%d,%d,%d), p=%d" % (k, kp, j, p)
            if not u_op(D, p).is_zero():
                return False, "U F^[p] != 0 for (%d,%d,%d), p=%d" % (k, kp, j, p)
            n += 3
    return True, "%d exact identities at Q=%d mod p^%d, p in {5,7}" % (n, Q, M)


def _telescope(N, p, Q=150, M=8):
    for b in (1, 2):
        for k in range(7):
            sec = nabla(syntomic_alpha_rig(k, b, N, p, Q, M))
            top = eis_padic(k + 2, 0, b, N, p, Q, M).scale(-N ** k)
            if not all(sec[i].is_zero() for i in range(k)) or sec[k] != top:
                return "telescoping fails at k=%d b=%d N=%d p=%d" % (k, b, N, p)
    return None


def c3_telescoping():
    err = _telescope(5, 7)
    if err:
        return False, err
    # p = 5 cannot be paired with N = 5 (p must not divide N)
    try:
        syntomic_alpha_rig(0, 1, 5, 5, 10, 4)
        return False, "p | N was accepted"
    except ValueError:
        pass
    err = _telescope(7, 5)
    if err:
        return False, err
    return True, ("k<=6, b in {1,2}, Q=150 exact for (N,p)=(5,7); (5,5) inadmissible "
                  "(p | N, rejected), p=5 run with N=7 instead")


def _lemma_inputs(Q=100):
    g = fixture("11a")
    p, M = 7, 6
    ring = CycRing(11, p ** M)
    A = g.qexp(Q).map(lambda c: ring.coerce(c), ring)
    B = eis_padic(2, 1, 1, 11, p, Q, M)
    return A, g.rational_ap(p), B


def c4_power_series_lemma():
    A, lam, B = _lemma_inputs()
    rep = power_series_identity_check(A, lam, 7, B, 49, 7)
    one = QExpansion.one(100)
    triv = power_series_identity_check(one, 1, 0, one, 1, 7)
    controls = 0
    for bad in [(lam, 7, 50), (lam + 1, 7, 49), (lam, 8, 49)]:
        try:
            power_series_identity_check(A, bad[0], bad[1], B, bad[2], 7)
        except HypothesisError:
            controls += 1
    pr, ex = rep.printed, rep.exact
    detail = ("stated form: %d/%d coefficients mismatch (first at n=%s); "
              "corrected form with the V(VA.(1-VU)B) term: %d mismatches; "
              "trivial case A=B=1 %s; negative controls caught %d/3"
              % (pr["mismatches"], pr["precision"], pr["first"], ex["mismatches"],
                 "ok" if triv.printed_ok and triv.ok else "FAILS", controls))
    ok = rep.printed_ok and triv.printed_ok and controls == 3
    return ok, detail


def c5_c_polynomial_and_star():
    import sympy
    rnd = random.Random(20)
    for _ in range(20):
        al = Fraction(rnd.randint(1, 50), rnd.randint(1, 9))
        be = Fraction(rnd.randint(-50, -1), rnd.randint(1, 9))
        c_polynomial(sympy.Rational(al.numerator, al.denominator),
                     sympy.Rational(be.numerator, be.denominator),
                     rnd.randint(0, 3), rnd.choice([5, 7, 11, 13]))
    X, Y = sympy.symbols("X Y")
    c = c_polynomial(7, 1, 0, 7)
    if sympy.expand(c.closed - (1 - 7 * X ** 2 * Y)) != 0:
        return False, "weight-2 example wrong: %s" % c.closed
    one = FpPolynomial([1, -1])

    def rand_poly():
        roots = [Fraction(rnd.choice([-1, 1]) * rnd.randint(1, 9), rnd.randint(1, 4))
                 for _ in range(rnd.randint(1, 3))]
        return FpPolynomial.from_roots(roots), roots

    for i in range(50):
        (P, ra), (Qp, rb) = rand_poly(), rand_poly()
        PQ = fp_star(P, Qp)
        if PQ != fp_star(Qp, P):
            return False, "star not commutative on pair %d" % i
        if fp_star(one, P) != P:
            return False, "(1-T) is not an identity on pair %d" % i
        if PQ != FpPolynomial.from_roots([x * y for x in ra for y in rb]):
            return False, "star disagrees with root products on pair %d" % i
        if PQ.degree != P.degree * Qp.degree:
            return False, "degree law fails on pair %d" % i
        if i < 10:
            R, _ = rand_poly()
            if fp_star(fp_star(P, Qp), R) != fp_star(P, fp_star(Qp, R)):
                return False, "star not associative on pair %d" % i
    return True, "c(X,Y) closed form on 20 random inputs; star laws on 50 random pairs"


def c6_eigenforms():
    cases = [("delta", 1, 12, {1: 24}), ("11a", 11, 2, {1: 2, 11: 2}),
             ("5k4", 5, 4, {1: 4, 5: 4})]
    out = []
    for name, N, w, eta in cases:
        sp = build_space(N, w, prec=200)
        if not sp.certified:
            return False, "%s: space not certified" % name
        probes = default_probes(N)
        mats = [sp.hecke_matrix(ell) for ell in probes]
        if not all(matrices_commute(a, b) for a in mats for b in mats):
            return False, "%s: probe matrices do not commute" % name
        forms = [nf for nf in eigenforms(sp, probes, simple_only=True) if nf.constant == 0]
        want = eta_quotient(eta, 21)
        got = [nf for nf in forms
               if all(nf.rational_ap(ell) == want.coeffs[ell] for ell in (2, 3, 5, 7, 11, 13, 17, 19))]
        if len(got) != 1:
            return False, "%s: eta product not recovered" % name
        out.append(name)
    return True, "a_l (l<=20) exact for %s; probes commute" % ", ".join(out)


def c7_flagship(p=11, M=8, n_max=400, tol=1e-3):
    f, g1, g2 = fixture("delta_e10", n_max), fixture("delta", n_max), fixture("delta_e4", n_max)
    rk = PadicRankin(f, p, M)  # raises NonOrdinaryError unless f is p-ordinary
    specs = [LSeriesSpec(f, g, n_max) for g in (g1, g2)]
    A = [algebraic_part(s, g.weight) for s, g in zip(specs, (g1, g2))]
    cal = calibrate(rk, [(g1, float(A[0].real), float(A[0].radius)),
                         (g2, float(A[1].real), float(A[1].radius))], tol)
    rels = []
    for spec in specs:
        a = afe_value(spec, spec.k + 1)
        d = rankin_series(spec.f, spec.g, spec.k + 1, spec.n_max, spec)
        rels.append(float(abs(a.center - d.center) / abs(d.center)))
    chk = cal.checks[0]
    # sensitivity control: (f, g2) with the sign of a_2(g2) flipped must not pass
    a2 = g2.rational_ap(2)
    bad = specs[1].perturbed(2, -2 * a2)
    shift = None
    try:
        Ab = algebraic_part(bad, g2.weight)
        shift = float(abs(Ab.real / A[1].real - 1))
        control = not calibrate(rk, [(g1, float(A[0].real), float(A[0].radius)),
                                     (g2, float(Ab.real), float(Ab.radius))], tol).ok
    except ArithmeticError:
        control = True
    ok = cal.ok and all(r <= tol for r in rels) and control
    return ok, ("p=%d ordinary, predicted %s vs complex %.12f (+-%.1e); AFE/series rel %s; "
                "a_2(g2) sign-flip control %s (value shift %s)"
                % (p, chk["reconstructed"], chk["complex_ratio"], chk["radius"],
                   ["%.1e" % r for r in rels], "rejected" if control else "ACCEPTED",
                   "n/a" if shift is None else "%.1e" % shift))


def c8_two_route():
    rep = regulator_two_route_check(fixture("14k8"), fixture("14a"), 0, 5)
    notes = []
    try:
        regulator_two_route_check(fixture("14k8"), fixture("14a"), 0, 13)
        notes.append("p=13 not flagged")
    except UntestableConfiguration:
        notes.append("p=13 reported untestable")
    try:
        regulator_two_route_check(fixture("11a"), fixture("11a"), 0, 7)
        notes.append("degenerate case not flagged")
    except ZeroDivisionError:
        notes.append("degenerate E(f,g,1) surfaced")
    ok = (rep.agree and rep.structural_identity and rep.nondegenerate
          and notes == ["p=13 reported untestable", "degenerate E(f,g,1) surfaced"])
    return ok, ("(6,0,0,5): route A=%s route B=%s mod 5, structural %s, v(E(f,g,1))=%d; %s"
                % (rep.route_A, rep.route_B, rep.structural_identity, rep.E_fg_valuation,
                   "; ".join(notes)))


def c9_constants():
    n = 0
    for N in range(1, 25):
        for eps in all_characters(N):
            e = eps.primitive()
            if gauss_sum(e) * gauss_sum(~e) != e.parity * e.modulus:
                return False, "gauss identity fails mod %d" % N
            n += 1
    consts = [beilinson_constant(0, 0, 0) == -4, beilinson_constant(2, 2, 1) == 1,
              perrin_riou_factor(1, 0) == Fraction(-1, 4),
              all(perrin_riou_factor(kp, kp) == Fraction((-1) ** (kp + 1) * factorial(kp), 4)
                  for kp in range(6))]
    if not all(consts):
        return False, "constants %s" % consts
    rnd = random.Random(9)
    triples = [(0, 0, 0), (2, 2, 1), (2, 3, 8)]
    while len(triples) < 20:
        k, kp = rnd.randint(0, 8), rnd.randint(0, 8)
        triples.append((k, kp, rnd.randint(-2, k + kp + 4)))
    for k, kp, m in triples:
        want = sum(1 for h in (k + kp + 2, k + 1, kp + 1, 0) if h >= m)
        if motive_fil_dim(k, kp, m) != want:
            return False, "motive_fil_dim%s" % ((k, kp, m),)
    return True, "%d characters, 4 constant checks, 20 filtration triples" % n


CRITERIA = [
    (1, "Clebsch-Gordan exactness", c1_clebsch_gordan),
    (2, "Eisenstein operator identities", c2_eisenstein_operators),
    (3, "Syntomic-section telescoping", c3_telescoping),
    (4, "Power-series identity", c4_power_series_lemma),
    (5, "c(X,Y) and star product", c5_c_polynomial_and_star),
    (6, "Eigenform generation", c6_eigenforms),
    (7, "Flagship interpolation", c7_flagship),
    (8, "Regulator two-route congruence", c8_two_route),
    (9, "Exact constants", c9_constants),
]


def evaluate(num, name, fn):
    try:
        ok, detail = fn()
    except Exception as e:  # report, then let pytest see the failure
        ok, detail = False, "%s: %s" % (type(e).__name__, e)
    line = "[%s] criterion %d %s: %s" % ("PASS" if ok else "FAIL", num, name, detail)
    print(line)
    ACCEPTANCE_LINES[num] = line
    return ok, line


@pytest.mark.parametrize("num,name,fn", CRITERIA, ids=["c%d" % c[0] for c in CRITERIA])
def test_criterion(num, name, fn):
    ok, line = evaluate(num, name, fn)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(*c)[0] for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
