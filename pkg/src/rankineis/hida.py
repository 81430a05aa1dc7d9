"""Ordinary projection on spaces of level Np and p-adic Rankin values.

Matrices act on row vectors of coordinates: a form x . basis is sent to
(x U) . basis.  Everything p-adic is carried as integers modulo p^M.
"""

from fractions import Fraction

from .exactnum import (NonOrdinaryError, PadicNum, PrecisionError, is_prime, rational_reconstruct,
                       valuation, zeta_neg)
from .linalg import charpoly, identity, mat_mul, mat_pow, mat_reduce, poly_of_matrix, vec_mat
from .modspace import SeparationError, InconsistentSpanError, euler_factors, hecke_roots
from .qseries import QExpansion, QQ, mul, u_op
from .eisenstein import eis_depleted


# ------------------------------------------------------ polynomials mod m
# lowest degree first

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a, b, m):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % m for c in out])


def _psub(a, b, m):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x - y) % m for x, y in zip(a, b)])


def _pdivmod(a, b, m):
    """Division by b whose leading coefficient is a unit modulo m."""
    a = [x % m for x in a]
    b = _trim([x % m for x in b])
    inv = pow(b[-1], -1, m)
    q = [0] * max(len(a) - len(b) + 1, 1)
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] * inv % m
        q[i] = c
        if c:
            for j, y in enumerate(b):
                a[i + j] = (a[i + j] - c * y) % m
    return _trim(q), _trim(a[:len(b) - 1])


def _pinv_mod_p(a, b, p):
    """a^-1 modulo b over F_p (extended Euclid)."""
    r0, r1 = _trim([x % p for x in b]), _trim([x % p for x in a])
    s0, s1 = [], [1]
    while r1 and len(r1) > 1:
        q, r = _pdivmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(s0, _pmul(q, s1, p), p)
    if not r1:
        raise SeparationError("polynomials are not coprime modulo p")
    c = pow(r1[0], -1, p)
    return [x * c % p for x in s1]


def _peval(a, x, m):
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % m
    return acc


def hensel_split(chi, p, M):
    """Factor a monic chi = u n modulo p^M with u(0) a unit and n = X^m mod p.

    Returns (u, n); the roots of u are the p-adic units among those of chi.
    """
    mod = p ** M
    chi = [c % mod for c in chi]
    m = 0
    while m < len(chi) - 1 and chi[m] % p == 0:
        m += 1
    n = [0] * m + [1]
    u, _ = _pdivmod([c % p for c in chi], n, p)
    if m == 0:
        return chi, [1]
    if len(u) == 1:
        return [1], chi
    # s u + t n = 1 modulo p
    t = _pinv_mod_p(n, u, p)
    s, _ = _pdivmod(_psub([1], _pmul(t, n, p), p), u, p)
    k = 1
    while k < M:
        e = _psub(chi, _pmul(u, n, mod), mod)
        e = [c // p ** k % p for c in e]
        q, r = _pdivmod(_pmul(e, s, p), n, p)
        du = [(x + y) % p for x, y in zip(_pmul(e, t, p) + [0] * len(u), _pmul(q, u, p) + [0] * len(u))]
        du = _trim(du)
        pk = p ** k
        k += 1
        m2 = p ** k
        n = _trim([(x + pk * y) % m2 for x, y in zip(n + [0] * len(r), r + [0] * len(n))])
        u = _trim([(x + pk * y) % m2 for x, y in zip(u + [0] * len(du), du + [0] * len(u))])
    if _psub(chi, _pmul(u, n, mod), mod):
        raise ArithmeticError("Hensel lift failed")
    return u, n


def unit_idempotent(chi, p, M):
    """h(X) with h(A) the projector onto the unit-root part for any A with
    characteristic polynomial chi."""
    mod = p ** M
    u, n = hensel_split(chi, p, M)
    if len(n) == 1:
        return [1]
    if len(u) == 1:
        return [0]
    # t n = 1 modulo u, lifted by Newton
    t = _pinv_mod_p(n, u, p)
    _, nr = _pdivmod(n, u, mod)
    prec = 1
    while prec < M:
        prec *= 2
        tn = _pdivmod(_pmul(t, nr, mod), u, mod)[1]
        t = _pdivmod(_pmul(t, _psub([2], tn, mod), mod), u, mod)[1]
    h = _pmul(t, n, mod)
    return _pdivmod(h, chi, mod)[1]


def berkowitz(A, mod=None):
    """Characteristic polynomial det(X - A) without division, lowest degree first."""
    n = len(A)
    if n == 0:
        return [1]
    red = (lambda x: x % mod) if mod else (lambda x: x)
    C = [1, red(-A[0][0])]
    for k in range(1, n):
        R = A[k][:k]
        v = [A[i][k] for i in range(k)]
        qs = []
        for _ in range(k):
            qs.append(red(sum(a * b for a, b in zip(R, v))))
            v = [red(sum(A[i][l] * v[l] for l in range(k))) for i in range(k)]
        t = [1, red(-A[k][k])] + [red(-q) for q in qs]
        C = [red(sum(t[i - j] * C[j] for j in range(len(C)) if 0 <= i - j < len(t)))
             for i in range(k + 2)]
    return list(reversed(C))


# ------------------------------------------------------------ U_p matrix

class UpMatrix:
    """U_p on a space of level divisible by p, exact and modulo p^M."""

    def __init__(self, space, p, M):
        if space.level % p:
            raise ValueError("p must divide the level")
        if space.lattice_prime != p:
            raise ValueError("space basis must be saturated at p")
        self.space = space
        self.p = p
        self.M = M
        self.mod = p ** M
        self.exact = space.hecke_matrix(p)
        for row in self.exact:
            for x in row:
                if Fraction(x).denominator % p == 0:
                    raise ValueError("U_p is not p-integral on this basis")
        self.matrix = mat_reduce(self.exact, self.mod)
        self._charpoly = None

    def charpoly(self):
        if self._charpoly is None:
            cp = charpoly([[Fraction(x) for x in r] for r in self.exact])
            self._charpoly = [c.numerator * pow(c.denominator, -1, self.mod) % self.mod for c in cp]
        return self._charpoly


def up_matrix(space, p, M):
    return UpMatrix(space, p, M)


class OrdinaryProjector:
    """e_ord = h(U_p) with h from the unit/non-unit splitting of charpoly(U_p)."""

    def __init__(self, up):
        self.up = up
        self.p, self.M, self.mod = up.p, up.M, up.mod
        self.poly = unit_idempotent(up.charpoly(), self.p, self.M)
        self.matrix = poly_of_matrix(self.poly, up.matrix, self.mod)
        u, n = hensel_split(up.charpoly(), self.p, self.M)
        self.rank = len(u) - 1
        self.check()

    def check(self):
        E, U, m = self.matrix, self.up.matrix, self.mod
        if mat_mul(E, E, m) != E:
            raise ArithmeticError("projector is not idempotent")
        if mat_mul(E, U, m) != mat_mul(U, E, m):
            raise ArithmeticError("projector does not commute with U_p")

    def apply(self, x):
        return vec_mat(x, self.matrix, self.mod)


def ordinary_projector(up):
    return OrdinaryProjector(up)


def ordinary_oracle(up):
    """lim U^(n!) computed as one large power: the exponent kills the
    non-unit part and is a multiple of the order of U on the unit part."""
    from math import lcm
    p, M, d = up.p, up.M, len(up.matrix)
    e = 1
    for j in range(1, d + 1):
        e = lcm(e, p ** j - 1)
    t = 0
    while p ** t < d:
        t += 1
    e *= p ** (t + M - 1)
    while e < M * d:
        e *= p
    return mat_pow(up.matrix, e, up.mod)


# -------------------------------------------------------- isotypic part

def _free_basis(E, mod, p):
    """Row basis (unit pivots, reduced) of the row space of an idempotent mod p^M."""
    rows = [list(r) for r in E]
    out, piv = [], []
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        i = next((i for i, r in enumerate(rows) if r[c] % p), None)
        if i is None:
            continue
        r = rows.pop(i)
        inv = pow(r[c], -1, mod)
        r = [x * inv % mod for x in r]
        rows = [[(x - s[c] * y) % mod for x, y in zip(s, r)] for s in rows]
        out = [[(x - s[c] * y) % mod for x, y in zip(s, r)] for s in out]
        out.append(r)
        piv.append(c)
    return out, piv


def _restrict(T, basis, piv, mod):
    return [[x for i, x in enumerate(vec_mat(b, T, mod)) if i in piv] for b in basis]


def default_probes(level, count=3):
    """The first ``count`` primes not dividing the level."""
    out, ell = [], 2
    while len(out) < count:
        if is_prime(ell) and level % ell:
            out.append(ell)
        ell += 1
    return tuple(out)


class IsotypicProjector:
    """Projection onto the f-eigenline inside the ordinary part.

    For each probe ell the characteristic polynomial of T_ell on the ordinary
    part is divided by (X - a_ell(f)); the quotient R gives R(T)/R(a_ell(f)).
    """

    def __init__(self, proj, f, probes=None):
        sp, p, mod = proj.up.space, proj.p, proj.mod
        probes = probes or default_probes(sp.level)
        self.proj = proj
        self.f = f
        basis, piv = _free_basis(proj.matrix, mod, p)
        if not basis:
            raise NonOrdinaryError("ordinary part is zero")
        self.ord_dim = len(basis)
        P = proj.matrix
        used = []
        for ell in probes:
            if sp.level % ell == 0:
                continue
            T = mat_reduce(sp.hecke_matrix(ell, auto_extend=True), mod)
            chi = berkowitz(_restrict(T, basis, piv, mod), mod)
            a = f.padic_ap(ell, p, proj.M).value
            R, rem = _pdivmod(chi, [(-a) % mod, 1], mod)
            if rem and rem[0] % mod:
                raise SeparationError("a_%d(f) is not an eigenvalue on the ordinary part" % ell)
            ra = _peval(R, a, mod)
            used.append(ell)
            if ra % p:
                P = mat_mul(P, poly_of_matrix([c * pow(ra, -1, mod) % mod for c in R], T, mod), mod)
                self.probe = ell
                break
        else:
            raise SeparationError("f is congruent modulo p to another ordinary eigensystem "
                                  "for every probe %s" % (used,))
        self.matrix = P

    def coefficient(self, x):
        """a_1 of the projection of the form with coordinates x."""
        sp, mod = self.proj.up.space, self.proj.mod
        y = vec_mat(x, self.matrix, mod)
        c = 0
        for yi, b in zip(y, sp.basis):
            if yi:
                a = Fraction(b.coeffs[1])
                c += yi * a.numerator * pow(a.denominator, -1, mod)
        return PadicNum(self.proj.p, self.proj.M, c % mod)


def padic_coordinates(space, phi, p, M):
    """Coordinates mod p^M of a q-expansion (rational or mod p^M ints), checked
    against the basis up to the common precision."""
    mod = p ** M

    def red(a):
        a = Fraction(a)
        if a.denominator % p == 0:
            raise ValueError("form is not p-integral")
        return a.numerator * pow(a.denominator, -1, mod) % mod

    cs = [red(c) for c in phi.coeffs]
    x = [cs[c] for c in space.pivots]
    Q = min(len(cs), space.prec)
    for n in range(Q):
        s = sum(xi * red(b.coeffs[n]) for xi, b in zip(x, space.basis) if xi)
        if (s - cs[n]) % mod:
            raise InconsistentSpanError("form is not in the span modulo p^%d (coefficient %d)"
                                        % (M, n))
    return x


def isotypic_coefficient(phi, f, space, p, M, probes=None, up=None, proj=None):
    """Coefficient of f_alpha in e_ord(phi) for phi in the space."""
    up = up or UpMatrix(space, p, M)
    proj = proj or OrdinaryProjector(up)
    iso = IsotypicProjector(proj, f, probes)
    return iso.coefficient(padic_coordinates(space, phi, p, M))


# ---------------------------------------------------- p-adic Rankin value

class PadicLValue:
    def __init__(self, raw, value, s, alpha, euler, prec):
        self.raw = raw
        self.value = value
        self.s = s
        self.alpha = alpha
        self.euler = euler
        self.prec = prec

    def to_dict(self):
        return {"s": self.s, "raw": self.raw.value, "value": self.value.value,
                "valuation_floor": self.value.valuation_floor,
                "p": self.raw.p, "M": self.raw.M}

    def __repr__(self):
        return "PadicLValue(s=%d, %r)" % (self.s, self.value)


def rankin_product_form(g, t, p, Q):
    """g . F^[p]_{t,0} at level one, as an exact rational q-expansion."""
    if g.level != 1:
        raise NotImplementedError("only level-one forms are supported here")
    F = eis_depleted(t, 0, 1, 1, p, Q)
    F = QExpansion([c.rational_part() for c in F.coeffs], QQ, Q)
    G = g.qexp(Q)
    G = QExpansion([Fraction(c.rational_part()) if hasattr(c, "rational_part") else Fraction(c)
                    for c in G.coeffs], QQ, Q)
    return mul(G, F)


class PadicRankin:
    """Raw classical-point values c(g) = <f_alpha, e_ord(g F^[p])> / alpha-normalised.

    The product g F^[p]_{t,0} (t = k - k') has level p^2; U_p moves it to
    level p where the ordinary projection is computed, and e_ord commutes
    with U_p so the f_alpha coefficient is divided by alpha at the end.
    """

    def __init__(self, f, p, M, space=None, probes=None):
        from .modspace import build_space, sturm_bound
        if f.level != 1:
            raise NotImplementedError("only level-one f is supported here")
        self.f, self.p, self.M = f, p, M
        self.alpha, self.beta = hecke_roots(f, p, M)
        if space is None:
            B = sturm_bound(p, f.weight)
            space = build_space(p, f.weight, prec=p * B, lattice_prime=p)
        self.space = space
        self.up = UpMatrix(space, p, M)
        self.proj = OrdinaryProjector(self.up)
        self.iso = IsotypicProjector(self.proj, f, probes)

    def raw(self, g):
        t = self.f.weight - g.weight
        if t < 2 or t % 2:
            raise ValueError("need k - k' even and positive")
        Q = self.p * 2 * self.space.sturm
        psi = u_op(rankin_product_form(g, t, self.p, Q), self.p)
        x = padic_coordinates(self.space, psi, self.p, self.M)
        return self.iso.coefficient(x) / self.alpha

    def value(self, g, unit=None):
        """u_f * raw / E*(f); unit defaults to 1."""
        s = g.weight
        E, Estar, Efg = euler_factors(self.f, g, self.p, s, self.M)
        raw = self.raw(g)
        v = raw / Estar
        if unit is not None:
            v = v * unit
        return PadicLValue(raw, v, s, self.alpha, (E, Estar, Efg), self.M)


def padic_rankin_classical(f, g, p, M, space=None):
    return PadicRankin(f, p, M, space).value(g)


# ---------------------------------------------------------- calibration

class Calibration:
    def __init__(self, unit, checks, ok):
        self.unit = unit
        self.checks = checks
        self.ok = ok

    def to_dict(self):
        return {"unit": self.unit.value, "ok": self.ok, "checks": self.checks}


def predicted_ratio(rk, g, base_g, base_alg=1):
    """The algebraic value at g implied by the p-adic side, after fixing the
    unit from base_g (whose algebraic value is base_alg)."""
    E, _, E1 = euler_factors(rk.f, base_g, rk.p, base_g.weight, rk.M)
    c1 = rk.raw(base_g)
    unit_times = E1 * PadicNum.from_rational(base_alg, rk.p, rk.M) / (c1 * E)
    _, _, E2 = euler_factors(rk.f, g, rk.p, g.weight, rk.M)
    c2 = rk.raw(g)
    return unit_times * c2 * E / E2, unit_times


def calibrate(rk, pairs, tol=1e-6):
    """pairs: list of (g, complex algebraic value A(g), radius).

    The first pair fixes the p-adic unit (absorbing the period); each other
    pair is predicted p-adically, reconstructed as a rational and compared
    with the complex ratio A(g)/A(g_1).
    """
    g1, A1, r1 = pairs[0]
    checks = []
    ok = True
    unit = None
    for g, A, r in pairs[1:]:
        pred, unit = predicted_ratio(rk, g, g1)
        rat = rational_reconstruct(pred)
        ratio = A / A1
        err = abs(ratio) * (r / abs(A) + r1 / abs(A1))
        good = rat is not None and abs(float(rat) - ratio) <= max(tol, 10 * err)
        ok = ok and good
        checks.append({"weight": g.weight, "padic": pred.value,
                       "reconstructed": None if rat is None else str(rat),
                       "complex_ratio": ratio, "radius": err, "ok": good})
    return Calibration(unit, checks, ok)
