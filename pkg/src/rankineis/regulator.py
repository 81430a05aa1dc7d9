"""Star products, the power-series lemma and the syntomic regulator formula.

Symbolic work (star products, c(X,Y), Euler-factor identities) uses sympy;
q-expansion work stays in the exact rings of the qseries module.
"""

from fractions import Fraction
from math import comb, factorial

import sympy

from .eisenstein import eis_padic, syntomic_alpha_rig
from .exactnum import (CycElement, NonOrdinaryError, PadicNum, cyc_embedding_root,
                       embed_element, gauss_sum)
from .qseries import QQ, CycRing, QExpansion, ZmodRing, deplete, mul, theta, u_op, v_op
from .tsym import SymVector, TSymVector, cg_trilinear

T = sympy.Symbol("T")
X, Y = sympy.symbols("X Y")


class UntestableConfiguration(ValueError):
    """A configuration outside the range where the check is meaningful."""


# ---------------------------------------------------------- star product

class FpPolynomial:
    """A polynomial P(T) with P(0) = 1.

    ``field`` optionally records the defining polynomial of the extension
    holding the coefficients (kept for reports only).
    """

    def __init__(self, coeffs, field=None):
        coeffs = [sympy.nsimplify(c) if isinstance(c, float) else sympy.sympify(c) for c in coeffs]
        while len(coeffs) > 1 and sympy.simplify(coeffs[-1]) == 0:
            coeffs.pop()
        if sympy.simplify(coeffs[0] - 1) != 0:
            raise ValueError("constant term must be 1")
        self.coeffs = coeffs
        self.field = field

    @classmethod
    def from_roots(cls, roots, field=None):
        """prod (1 - r T)."""
        expr = sympy.Integer(1)
        for r in roots:
            expr = expr * (1 - sympy.sympify(r) * T)
        return cls.from_expr(expr, field)

    @classmethod
    def from_expr(cls, expr, field=None):
        poly = sympy.Poly(sympy.expand(expr), T)
        return cls(poly.all_coeffs()[::-1], field)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def expr(self):
        return sum(c * T ** i for i, c in enumerate(self.coeffs))

    def __call__(self, t):
        return sympy.simplify(self.expr().subs(T, t))

    def star(self, other):
        return fp_star(self, other)

    __matmul__ = star

    def __eq__(self, other):
        if not isinstance(other, FpPolynomial) or self.degree != other.degree:
            return False
        return all(sympy.simplify(a - b) == 0 for a, b in zip(self.coeffs, other.coeffs))

    def __repr__(self):
        return "FpPolynomial(%s)" % sympy.expand(self.expr())


def fp_star(P, Q):
    """prod(1 - a_i T) * prod(1 - b_j T) = prod(1 - a_i b_j T), via the
    resultant Res_Z(Z^d P(1/Z), Q(Z T)); no roots are extracted."""
    Z = sympy.Symbol("Z")
    d = P.degree
    rev = sympy.expand(sum(c * Z ** (d - i) for i, c in enumerate(P.coeffs)))
    q = sympy.expand(Q.expr().subs(T, Z * T))
    if d == 0:
        return FpPolynomial([1], P.field or Q.field)
    if Q.degree == 0:
        return FpPolynomial([1], P.field or Q.field)
    res = sympy.expand(sympy.resultant(rev, q, Z))
    # the resultant equals the star product up to the sign (-1)^(deg P deg Q)
    res = sympy.expand(res / res.subs(T, 0))
    return FpPolynomial.from_expr(res, P.field or Q.field)


# ------------------------------------------------------------ a, b and c

def decompose_ab(P):
    """(a, b) with P(XY) = a P(X) + b (1 - Y), taking a = 1."""
    px = P.expr().subs(T, X)
    pxy = P.expr().subs(T, X * Y)
    q, r = sympy.div(sympy.expand(pxy - px), 1 - Y, Y)
    if sympy.simplify(r) != 0:
        raise ArithmeticError("1 - Y does not divide P(XY) - P(X)")
    a = sympy.Integer(1)
    b = sympy.expand(q)
    if sympy.expand(a * px + b * (1 - Y) - pxy) != 0:
        raise ArithmeticError("decomposition identity fails")
    return a, b


class CPolynomial:
    def __init__(self, division, closed):
        self.division = division
        self.closed = closed
        self.equal = sympy.simplify(division - closed) == 0

    def terms(self):
        return sympy.Poly(self.closed, X, Y).terms()

    def __repr__(self):
        return "c(X,Y) = %s" % self.closed


def c_polynomial(alpha, beta, j, p):
    """c(X,Y) = (P_g(XY) - Y P_g(X)) / (1 - Y) with
    P_g(X) = (1 - p^(1+j) X / alpha)(1 - p^(1+j) X / beta)."""
    alpha, beta, p = sympy.sympify(alpha), sympy.sympify(beta), sympy.sympify(p)
    if sympy.simplify(alpha * beta) == 0:
        raise ZeroDivisionError("alpha * beta must be invertible")
    Pg = lambda x: (1 - p ** (1 + j) * x / alpha) * (1 - p ** (1 + j) * x / beta)
    num = sympy.expand(Pg(X * Y) - Y * Pg(X))
    q, r = sympy.div(num, 1 - Y, Y)
    if sympy.simplify(r) != 0:
        raise ArithmeticError("1 - Y does not divide the numerator")
    closed = 1 - p ** (2 + 2 * j) * X ** 2 * Y / (alpha * beta)
    out = CPolynomial(sympy.expand(q), sympy.expand(closed))
    if not out.equal:
        raise ArithmeticError("division form and closed form differ")
    return out


# ------------------------------------------------------ power-series lemma

def _lin(a, b, ca, cb):
    """ca * a + cb * b on the common precision."""
    Q = min(a.prec, b.prec)
    return a.truncate(Q).scale(ca) + b.truncate(Q).scale(cb)


def _mismatch(a, b):
    Q = min(a.prec, b.prec)
    bad = [n for n in range(Q) if not a.ring.is_zero(a.coeffs[n] - b.coeffs[n])]
    return {"precision": Q, "mismatches": len(bad), "first": bad[0] if bad else None}


class IdentityReport:
    """Outcome of the power-series identity check.

    ``printed`` compares A(1-VU)B with
        (1 - lam nu V + mu nu^2 V^2)(AB) + (1-VU)[mu V^2(A) B - A V(B)];
    ``exact`` compares it with
        (1 - lam nu V + mu nu^2 V^2)(AB) - nu (1-VU)[A V(B)] + mu nu V[V(A) (1-VU)B],
    which follows from U(X V(Y)) = U(X) Y.  The last term is killed by U^2, so
    both right-hand sides have the same image under any finite-slope
    projection only through the first term; ``ok`` reports the exact form.
    """

    def __init__(self, printed, exact, hypotheses):
        self.printed = printed
        self.exact = exact
        self.hypotheses = hypotheses
        self.ok = exact["mismatches"] == 0
        self.printed_ok = printed["mismatches"] == 0

    def __bool__(self):
        return self.ok

    def to_dict(self):
        return {"ok": self.ok, "printed_ok": self.printed_ok, "hypotheses": self.hypotheses,
                "printed": self.printed, "exact": self.exact}


class HypothesisError(ValueError):
    pass


def power_series_identity_check(A, lam, mu, B, nu, p, Q=None):
    """Check A(1-VU)B against the lemma, given UA = lam A - mu VA and UB = nu B.

    The hypotheses are checked first (to precision floor(Q/p)) and a
    HypothesisError is raised if they fail.  See IdentityReport for the two
    right-hand sides compared.
    """
    if A.ring != B.ring:
        raise TypeError("A and B must share a ring")
    Q = Q or min(A.prec, B.prec)
    A, B = A.truncate(Q), B.truncate(Q)
    hq = Q // p
    UA = u_op(A, p).truncate(hq)
    rhsA = _lin(A, v_op(A, p), lam, -mu).truncate(hq)
    UB = u_op(B, p).truncate(hq)
    hyp = {"UA": _mismatch(UA, rhsA), "UB": _mismatch(UB, B.scale(nu).truncate(hq))}
    if hyp["UA"]["mismatches"] or hyp["UB"]["mismatches"]:
        raise HypothesisError("hypotheses fail: %s" % hyp)
    V = lambda F: v_op(F, p).truncate(Q)
    D = lambda F: deplete(F.truncate(Q), p)
    lhs = mul(A, D(B)).truncate(Q)
    AB = mul(A, B).truncate(Q)
    first = AB + V(AB).scale(-lam * nu) + V(V(AB)).scale(mu * nu * nu)
    AVB = mul(A, V(B))
    printed = first + D(mul(V(V(A)), B).scale(mu) - AVB)
    exact = first - D(AVB).scale(nu) + V(mul(V(A), D(B))).scale(mu * nu)
    return IdentityReport(_mismatch(lhs, printed), _mismatch(lhs, exact), hyp)


# ------------------------------------------------ unit-root splitting

# Pairing a differential (odd degree) with the Eisenstein component in the
# cup-product order used by the closed formula contributes this sign.
CUP_SIGN = -1


def _check_kkj(k, kp, j):
    if not (0 <= j <= min(k, kp)):
        raise ValueError("need 0 <= j <= min(k, k')")
    if k < kp:
        raise ValueError("need k >= k'")


def splur_prefactor(k, kp, j, N=1):
    """Scalar in front of G(eps_g^-1) g F^(p)_{k-k', k'-j+1, b}.

    Built from the CG trilinear value on (w^(0,k), w^(k',0), w^[k'-j,k-j])
    and the coefficient of the selected alpha_rig component i = k - j.
    Returns (prefactor, itemization).
    """
    _check_kkj(k, kp, j)
    K = k + kp - 2 * j
    i = k - j
    a = SymVector.basis(0, k)
    b = SymVector.basis(kp, 0)
    t = TSymVector.basis(kp - j, k - j)
    cg = cg_trilinear(k, kp, j, a, b, t).pair_det(j).scalar()
    rig = -N ** K * (-1) ** (K - i) * factorial(K - i)
    pre = CUP_SIGN * cg * rig
    return Fraction(pre), {"cg_trilinear": Fraction(cg), "alpha_rig_coefficient": rig,
                           "component": i, "cup_sign": CUP_SIGN}


def splur_closed_form(k, kp, j, N=1):
    """-N^(k+k'-2j) (-1)^(k'-j-1) k'! C(k, j)."""
    return Fraction(-N ** (k + kp - 2 * j) * (-1) ** (kp - j - 1) * factorial(kp) * comb(k, j))


def _gauss_inverse(nf):
    """G(eps^-1) as a CycElement (1 for the trivial character)."""
    eps = nf.character
    if eps.is_trivial():
        return CycElement(1, [1])
    return gauss_sum(~eps)


def splur_product(f_unused, g, k, kp, j, b, N, p, Q, M):
    """The p-adic modular form -N^K (-1)^(k'-j-1) k'! C(k,j) G(eps_g^-1) g F^(p)_{k-k',k'-j+1,b}.

    The scalar is assembled from the CG trilinear pairing and the selected
    component of the syntomic Eisenstein section.
    """
    _check_kkj(k, kp, j)
    if N % p == 0:
        raise ValueError("p must not divide N")
    if g.weight != kp + 2:
        raise ValueError("g must have weight k'+2")
    K = k + kp - 2 * j
    i = k - j
    sec = syntomic_alpha_rig(K, b, N, p, Q, M)
    comp = sec[i]
    cg = cg_trilinear(k, kp, j, SymVector.basis(0, k), SymVector.basis(kp, 0),
                      TSymVector.basis(kp - j, k - j)).pair_det(j).scalar()
    G = _gauss_inverse(g)
    if G.N != 1 and N % G.N:
        raise NotImplementedError("Gauss sum field must lie inside Q(zeta_N)")
    ring = comp.ring
    Gq = _cyc_into(G, N, ring)
    gq = g.qexp(Q)
    gq = QExpansion([ring.coerce(Fraction(c.rational_part()) if hasattr(c, "rational_part") else c)
                     for c in gq.coeffs], ring, Q)
    out = mul(gq, comp).scale(CUP_SIGN * cg)
    return QExpansion._raw([Gq * c for c in out.coeffs], ring)


def _cyc_into(z, N, ring):
    """Image of z in Q(zeta_m) inside the ring of Q(zeta_N), m | N."""
    m = z.N
    exps = {}
    for e, c in enumerate(z.coeffs):
        if c:
            exps[(e * (N // m)) % N] = c
    return CycElement.from_exponent_sum(N, exps, ring.mod)


# ---------------------------------------------------- regulator value

def _padic_gauss(nf, p, M, choice=0):
    G = _gauss_inverse(nf)
    if G.N == 1:
        return PadicNum.from_rational(Fraction(G.coeffs[0]), p, M), None
    root = cyc_embedding_root(G.N, p, M, choice)
    return embed_element(G, p, M, root), {"modulus": G.N, "root": root}


class RegulatorValue:
    def __init__(self, value, factors):
        self.value = value
        self.factors = factors

    def to_dict(self):
        out = {}
        for key, v in self.factors.items():
            if isinstance(v, PadicNum):
                out[key] = {"value": v.value, "valuation_floor": v.valuation_floor, "M": v.M}
            elif isinstance(v, Fraction):
                out[key] = str(v)
            else:
                out[key] = v
        out["value"] = {"value": self.value.value, "valuation_floor": self.value.valuation_floor,
                        "M": self.value.M}
        return out


def regulator_value(f, g, j, p, lp_value, M=None):
    """(-1)^(k'-j+1) k'! C(k,j) G(eps_f^-1) G(eps_g^-1) E(f)E*(f)/E(f,g,1+j) L_p(f,g,1+j)."""
    from .modspace import euler_factors
    k, kp = f.weight - 2, g.weight - 2
    _check_kkj(k, kp, j)
    M = M or lp_value.M
    E, Estar, Efg = euler_factors(f, g, p, 1 + j, M)
    if Efg.is_zero():
        raise ZeroDivisionError("E(f,g,1+j) vanishes to the working precision")
    Gf, emb_f = _padic_gauss(f, p, M)
    Gg, emb_g = _padic_gauss(g, p, M)
    const = Fraction((-1) ** (kp - j + 1) * factorial(kp) * comb(k, j))
    value = PadicNum.from_rational(const, p, M) * Gf * Gg * E * Estar / Efg * lp_value
    return RegulatorValue(value, {"constant": const, "G_f": Gf, "G_g": Gg, "embedding_f": emb_f,
                                  "embedding_g": emb_g, "E(f)": E, "E*(f)": Estar,
                                  "E(f,g,1+j)": Efg, "L_p": lp_value})


# --------------------------------------------------- exact constants

def beilinson_constant(k, kp, j, n_eps_f=1, n_eps_g=1):
    """(-1)^(k'-j+1) 4/(N_f N_g) (k-j)!(k'-j)!/(k! k'!)."""
    if not (0 <= j <= min(k, kp)):
        raise ValueError("need 0 <= j <= min(k, k')")
    return (Fraction((-1) ** (kp - j + 1) * 4, n_eps_f * n_eps_g)
            * Fraction(factorial(k - j) * factorial(kp - j), factorial(k) * factorial(kp)))


def gamma_residue(n):
    """Residue of Gamma(s) at s = -n."""
    return Fraction((-1) ** n, factorial(n))


def perrin_riou_factor(kp, j):
    """4^-1 (-1)^(k'+1) Gamma(j+1) Res_{s=j-k'} Gamma(s)."""
    if j > kp or j < 0:
        raise ValueError("need 0 <= j <= k'")
    return Fraction((-1) ** (kp + 1), 4) * factorial(j) * gamma_residue(kp - j)


def euler_factor_identity(j=None):
    """Symbolic check that E(f,g,j+1) equals
    det(1 - p^-1 phi^-1 | N) det(1 - phi | D_cris) / det(1 - phi | N)
    with phi acting through the root products divided by p^(j+1)."""
    af, bf, ag, bg, p = sympy.symbols("alpha_f beta_f alpha_g beta_g p", nonzero=True)
    jj = sympy.Symbol("j", integer=True, nonnegative=True) if j is None else j
    s = jj + 1
    N_phi = (1 - af * ag / p ** s) * (1 - af * bg / p ** s)
    N_inv = (1 - p ** jj / (af * ag)) * (1 - p ** jj / (af * bg))
    dcris = N_phi * (1 - bf * ag / p ** s) * (1 - bf * bg / p ** s)
    lhs = N_inv * dcris / N_phi
    # the form used by the library: symmetric in the roots of g
    a_g, c_g = ag + bg, ag * bg
    first = 1 - p ** (s - 1) * a_g / (af * c_g) + p ** (2 * s - 2) / (af ** 2 * c_g)
    second = 1 - bf * a_g / p ** s + bf ** 2 * c_g / p ** (2 * s)
    diff = sympy.simplify(sympy.expand(lhs - first * second))
    return diff == 0


def perrin_riou_sign_check(k, kp, j):
    """(-1)^(j+1) times the regulator constant equals the constant (-1)^k' k'! C(k,j)
    that appears once the (-t)^(-j-1) twist is applied."""
    reg = (-1) ** (kp - j + 1) * factorial(kp) * comb(k, j)
    return (-1) ** (j + 1) * reg == (-1) ** kp * factorial(kp) * comb(k, j)


# ------------------------------------------------------ two-route check

def _fermat_shift(s, p):
    """e in [0, p-2] with d^-s = d^e mod p for p !| d."""
    return (-s) % (p - 1)


def _int_series(F, p):
    """Coefficients of a p-integral series reduced mod p."""
    out = []
    for c in F.coeffs:
        if hasattr(c, "rational_part"):
            if not c.is_rational():
                raise NotImplementedError("cyclotomic coefficients in the surrogate")
            c = c.rational_part()
        c = Fraction(c)
        if c.denominator % p == 0:
            raise ValueError("series is not p-integral")
        out.append(c.numerator * pow(c.denominator, -1, p) % p)
    return out


def _theta_power(a, i, p):
    return [c * pow(n, i, p) % p for n, c in enumerate(a)]


def _mulmod(a, b, p, Q):
    import numpy as np
    x = np.array(a[:Q], dtype=np.int64)
    y = np.array(b[:Q], dtype=np.int64)
    return [int(v) % p for v in np.convolve(x, y)[:Q]]


def _solve_mod_p(cols, rhs, p):
    """One solution of sum x_i cols[i] = rhs over F_p (cols are lists), or None."""
    import numpy as np
    A = np.array(cols, dtype=np.int64).T % p
    b = np.array(rhs, dtype=np.int64) % p
    m, n = A.shape
    aug = np.concatenate([A, b[:, None]], axis=1)
    piv = []
    r = 0
    for c in range(n):
        rows = np.nonzero(aug[r:, c])[0]
        if len(rows) == 0:
            continue
        i = r + rows[0]
        aug[[r, i]] = aug[[i, r]]
        aug[r] = aug[r] * pow(int(aug[r, c]), -1, p) % p
        col = aug[:, c].copy()
        col[r] = 0
        aug = (aug - np.outer(col, aug[r])) % p
        piv.append(c)
        r += 1
        if r == m:
            break
    if np.any(aug[r:, n] % p):
        return None
    x = [0] * n
    for i, c in enumerate(piv):
        x[c] = int(aug[i, n])
    return x


class TwoRouteReport:
    def __init__(self, **kw):
        self.__dict__.update(kw)

    def __bool__(self):
        return bool(self.agree)

    def to_dict(self):
        return {k: v for k, v in self.__dict__.items() if not k.startswith("_")}


def surrogate_spaces(level, weight, p, sigma, prec, cache=None):
    """Spaces of weight weight - 2i (i = 0..sigma) on Gamma_0(level), saturated at p,
    each with q-precision at least prec (the top one also at least p * sturm)."""
    from .modspace import build_space, sturm_bound
    cache = {} if cache is None else cache
    out = {}
    for i in range(sigma + 1):
        w = weight - 2 * i
        need = max(prec, p * sturm_bound(level, w)) if i == 0 else prec
        sp = cache.get((level, w))
        if sp is None:
            sp = build_space(level, w, prec=need, lattice_prime=p)
            cache[(level, w)] = sp
        if sp.prec < need:
            sp.extend(need)
        out[i] = sp
    return out


def regulator_two_route_check(f, g, j, p, M0=1, probes=None, cache=None):
    """Compare the F^(p) route and the F^[p] route modulo p.

    Route A: g F^(p)_{k-k',k'-j+1} is replaced by the Fermat surrogate
    g theta^e F^(p)_{t',0} (d'^-s = d'^e mod p), decomposed as
    sum theta^i c_i with c_i classical of weight k+2-2i, and c_0 is projected
    onto the f_alpha line.  Route B applies U_p to g F^[p] and projects the
    result (divided by alpha).  The lemma predicts
        route B = (1 - a_p(g) nu / alpha + mu nu^2 / alpha^2) route A.
    """
    from .hida import IsotypicProjector, OrdinaryProjector, UpMatrix, padic_coordinates
    from .modspace import euler_factors, hecke_roots, sturm_bound
    if M0 != 1:
        raise NotImplementedError("only the one-digit surrogate is available")
    k, kp = f.weight - 2, g.weight - 2
    _check_kkj(k, kp, j)
    ap = f.padic_ap(p, p, 1)
    if ap.value % p == 0:
        raise NonOrdinaryError("f is not ordinary at p")
    Mx = 4
    E, Estar, Efg = euler_factors(f, g, p, 1 + j, Mx)
    if Efg.is_zero() or Efg.valuation() > 0:
        raise ZeroDivisionError("E(f,g,1+j) has positive valuation: dividing by it loses "
                                "all precision")
    t, s = k - kp, kp - j + 1
    e = _fermat_shift(s, p)
    tb = t + s - e
    base = k + kp - 2 * j + 2 - (p - 1)
    w = k + 2
    if base < 2 or w - 2 * e < 2:
        raise UntestableConfiguration(
            "base weight %d or component weight %d below 2: the mod-p surrogate is not classical"
            % (base, w - 2 * e))
    if tb < 4 or tb % 2:
        raise UntestableConfiguration("surrogate Eisenstein weight %d is not classical at level one"
                                      % tb)
    alpha, _ = hecke_roots(f, p, Mx)
    from math import lcm
    level = lcm(f.level, g.level) * p
    from .modspace import sturm_bound as _sb
    Qd = 3 * _sb(level, w)
    spaces = surrogate_spaces(level, w, p, e, Qd, cache)
    top = spaces[0]
    up = UpMatrix(top, p, 1)
    proj = OrdinaryProjector(up)
    iso = IsotypicProjector(proj, f, probes)
    Q = max(Qd, p * 2 * top.sturm)
    gq = _int_series(g.qexp(Q), p)
    # Fermat congruences, verified coefficientwise
    FA = _int_series(eis_padic(t, s, 1, 1, p, Q), p)
    FB = _int_series(deplete(eis_padic(t, s, 1, 1, p, Q), p), p)
    base_series = _int_series(eis_padic(tb, 0, 1, 1, p, Q), p)
    sur = _theta_power(base_series, e, p)
    fermat_A = FA == sur
    fermat_B = FB == _int_series(deplete(QExpansion(sur, QQ, Q), p), p)
    # route A: theta decomposition
    phiA = _mulmod(gq, sur, p, Qd)
    cols, owners = [], []
    for i in range(e + 1):
        for b in spaces[i].basis:
            cols.append(_theta_power(_int_series(b.truncate(Qd), p), i, p))
            owners.append(i)
    x = _solve_mod_p(cols, phiA, p)
    decomposed = x is not None
    lamA = None
    if decomposed:
        x0 = [xi for xi, o in zip(x, owners) if o == 0]
        lamA = iso.coefficient(x0).value % p
    # route B: U_p first on g F^[p]
    QB = p * 2 * top.sturm
    phiB = _mulmod(gq, FB, p, QB)
    psiB = QExpansion(phiB[::p], QQ, (QB + p - 1) // p)
    xB = padic_coordinates(top, psiB, p, 1)
    lamB = iso.coefficient(xB).value * pow(alpha.value, -1, p) % p
    # lemma factor: second factor of E(f,g,1+j)
    nu = p ** (k - j)
    mu = g.hecke_constant(p)
    a_g = g.padic_ap(p, p, Mx)
    one = PadicNum.from_rational(1, p, Mx)
    lemma = (one - a_g * PadicNum.from_rational(nu, p, Mx) / alpha
             + PadicNum.from_rational(mu * nu * nu, p, Mx) / (alpha * alpha))
    predicted = None if lamA is None else lamA * lemma.value % p
    # before projection the routes differ by (1-VU)-images and U^2-null terms
    Ql = min(Q, 100)
    ring = ZmodRing(p ** Mx)
    A = g.qexp(Ql).change_ring(ring)
    B = eis_padic(t, s, 1, 1, p, Ql, Mx)
    B = QExpansion([c.coeffs[0] if c.coeffs else 0 for c in B.coeffs], ring, Ql)
    structural = power_series_identity_check(A, g.rational_ap(p), mu, B, nu, p).ok
    nondegenerate = lamB != 0
    agree = (decomposed and fermat_A and fermat_B and structural and nondegenerate
             and predicted == lamB)
    return TwoRouteReport(k=k, kprime=kp, j=j, p=p, level=level, theta_power=e,
                          base_weight=tb, fermat_A=fermat_A, fermat_B=fermat_B,
                          decomposed=decomposed, route_A=lamA, route_B=lamB,
                          lemma_factor_mod_p=lemma.value % p, predicted_B=predicted,
                          E_f_mod_p=E.value % p, E_fg_valuation=Efg.valuation(),
                          structural_identity=structural,
                          nondegenerate=nondegenerate, probe=iso.probe,
                          ordinary_rank=proj.rank, agree=agree)
