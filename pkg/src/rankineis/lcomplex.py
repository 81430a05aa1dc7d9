"""Complex Rankin L-values: Dirichlet series with tail bounds, and a
smoothed approximate functional equation for the whole critical strip."""

import copy
from fractions import Fraction
from math import gcd
import warnings

import mpmath
import numpy as np
from mpmath import mpf
from scipy.special import kve

from .exactnum import DirichletCharacter, PolyQuotientElement, factorint
from .modspace import extend_coefficients


class Ball:
    """center +- radius (complex center, real radius)."""

    def __init__(self, center, radius):
        self.center = center
        self.radius = mpf(radius)

    def contains(self, x):
        return abs(x - self.center) <= self.radius

    def overlaps(self, other):
        return abs(self.center - other.center) <= self.radius + other.radius

    def __mul__(self, other):
        if isinstance(other, Ball):
            c = self.center * other.center
            r = abs(self.center) * other.radius + abs(other.center) * self.radius \
                + self.radius * other.radius
            return Ball(c, r)
        return Ball(self.center * other, self.radius * abs(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Ball):
            if other.radius >= abs(other.center):
                raise ZeroDivisionError("ball contains zero")
            inv_c = 1 / other.center
            inv_r = other.radius / (abs(other.center) * (abs(other.center) - other.radius))
            return self * Ball(inv_c, inv_r)
        return Ball(self.center / other, self.radius / abs(other))

    @property
    def real(self):
        return mpmath.re(self.center)

    def to_dict(self):
        c = self.center
        out = {"radius": mpmath.nstr(self.radius, 6)}
        if mpmath.im(c) == 0:
            out["center"] = mpmath.nstr(mpmath.re(c), 20)
        else:
            out["center"] = [mpmath.nstr(mpmath.re(c), 20), mpmath.nstr(mpmath.im(c), 20)]
        return out

    def __repr__(self):
        return "Ball(%s +- %s)" % (mpmath.nstr(self.center, 15), mpmath.nstr(self.radius, 3))


# ----------------------------------------------------------- Dirichlet L

def dirichlet_L(eps, s, removed_primes=(), tol=1e-15):
    """L(eps, s) for real s > 1 with the Euler factors at removed_primes taken out.

    The tail beyond the partial sum is bounded by Euler-Maclaurin (trivial
    character) or by partial summation over full periods (others).
    """
    s = mpf(s)
    if s <= 1:
        raise ValueError("need s > 1")
    if eps is None:
        eps = DirichletCharacter.trivial(1)
    m = eps.modulus
    tol = mpf(tol)
    if eps.is_trivial() and m == 1:
        # Euler-Maclaurin with three correction terms
        n0 = 10
        while True:
            R = s * (s + 1) * (s + 2) * mpf(n0) ** (-s - 3) / 360
            if R < tol / 2 or n0 > 10 ** 7:
                break
            n0 *= 2
        head = mpmath.fsum(mpf(n) ** (-s) for n in range(1, n0))
        tail = (mpf(n0) ** (1 - s) / (s - 1) + mpf(n0) ** (-s) / 2
                + s * mpf(n0) ** (-s - 1) / 12)
        val = Ball(head + tail, R)
    else:
        # |sum_{n > n0} eps(n) n^-s| <= 2 * (period partial sums) * n0^-s
        n0 = m
        while True:
            R = 2 * m * mpf(n0) ** (-s)
            if eps.is_trivial():
                R = mpf(n0) ** (1 - s) / (s - 1)
            if R < tol / 2 or n0 > 10 ** 7:
                break
            n0 *= 2
        n0 = (n0 // m) * m
        val = Ball(mpmath.fsum(eps.value_complex(n) * mpf(n) ** (-s) for n in range(1, n0 + 1)), R)
    for p in removed_primes:
        val = val * (1 - eps.value_complex(p) * mpf(p) ** (-s))
    return val


def _tau_sq_tail(x, sigma):
    """Upper bound for sum_{n > x} d(n)^2 n^(-sigma), sigma > 1.

    d(n)^2 <= d_4(n) and sum_{n <= t} d_4(n) <= t (1 + log t)^3, then partial
    summation.
    """
    sigma = mpf(sigma)
    f = lambda t: sigma * (1 + mpmath.log(t)) ** 3 * t ** (-sigma)
    return mpmath.quad(f, [x, 10 * x, mpmath.inf])


# ---------------------------------------------------------- coefficients

def _complex_coeffs(nf, n_max, root_index=0):
    """a_1..a_n of a Newform embedded in C."""
    an = _rational_an(nf, n_max)
    if an is not None:
        return [mpf(a.numerator) / a.denominator for a in an]
    poly = [float(c) for c in nf.field_poly]
    roots = sorted(mpmath.polyroots(poly[::-1], maxsteps=200, extraprec=200),
                   key=lambda z: (mpmath.re(z), mpmath.im(z)))
    z = roots[root_index]
    out = []
    for a in extend_coefficients(nf, n_max):
        acc = mpmath.mpc(0)
        for c in reversed(a.coeffs):
            acc = acc * z + mpf(c.numerator) / c.denominator
        out.append(acc)
    return out


def _rational_an(nf, n_max):
    """Integer coefficients by a sieve (None when the field is not Q)."""
    if not nf.is_rational:
        return None
    from .modspace import _spf_table
    ap = {ell: Fraction(v.rational_part()) for ell, v in nf.ap.items()}
    spf = _spf_table(n_max)
    a = [Fraction(0), Fraction(1)] + [Fraction(0)] * (n_max - 1)
    for n in range(2, n_max + 1):
        ell = spf[n]
        m, r = n, 0
        while m % ell == 0:
            m //= ell
            r += 1
        if m > 1:
            a[n] = a[m] * a[n // m]
        elif r == 1:
            if ell not in ap:
                raise KeyError("missing eigenvalue a_%d" % ell)
            a[n] = ap[ell]
        else:
            c = nf.hecke_constant(ell) if nf.level % ell else 0
            a[n] = ap[ell] * a[n // ell] - c * a[n // ell ** 2]
    return a[1:]


class LSeriesSpec:
    """Data for L(f x g, s) = L_(N)(eps_f eps_g, 2s + 2 - w_f - w_g) sum a_n(f) a_n(g) n^-s.

    ``coeffs`` are the Dirichlet coefficients of the full product (the
    Dirichlet L-factor folded in), c_n = sum_{m^2 | n} eps(m) m^(k+k'+2)
    a_{n/m^2}(f) a_{n/m^2}(g).
    """

    def __init__(self, f, g, n_max, epsilon=None):
        if gcd(f.level, g.level) != 1:
            raise NotImplementedError("only coprime levels are supported")
        if g.k > f.k:
            f, g = g, f
        self.f, self.g = f, g
        self.k, self.kp = f.k, g.k
        self.n_max = n_max
        self.chi = f.character * g.character
        self.removed = sorted(set(factorint(f.level)) | set(factorint(g.level)))
        af = _complex_coeffs(f, n_max)
        ag = _complex_coeffs(g, n_max)
        self._af = af
        self.raw = [x * y for x, y in zip(af, ag)]
        self._fold()
        self.motivic_weight = self.k + self.kp + 2
        self.w = self.k + self.kp + 3
        self.a = self.kp + 1
        self.conductor_root = f.level * g.level
        self.epsilon = epsilon
        self.epsilon_residual = None
        self.epsilon_error = 0

    def _fold(self):
        w = self.k + self.kp + 2
        c = list(self.raw)
        m = 2
        while m * m <= self.n_max:
            e = self.chi.value_complex(m) * mpf(m) ** w
            if e:
                for n in range(m * m, self.n_max + 1, m * m):
                    c[n - 1] += e * self.raw[n // (m * m) - 1]
            m += 1
        self.coeffs = c

    def perturbed(self, n, delta=1):
        """A copy with a_n of the lower-weight form shifted by delta (a sensitivity control)."""
        out = copy.copy(self)
        out.raw = list(self.raw)
        out.raw[n - 1] += self._af[n - 1] * delta
        out._fold()
        out.epsilon = None
        out.epsilon_residual = None
        out.epsilon_error = 0
        return out

    def gamma(self, s):
        """A^s Gamma_C(s) Gamma_C(s - a)."""
        A = self.conductor_root
        gc = lambda z: 2 * (2 * mpmath.pi) ** (-z) * mpmath.gamma(z)
        return mpf(A) ** s * gc(s) * gc(s - self.a)

    def to_dict(self):
        return {"f": self.f.source, "g": self.g.source, "n_max": self.n_max,
                "k": self.k, "kprime": self.kp, "conductor": self.conductor_root ** 2,
                "removed_primes": self.removed,
                "epsilon": None if self.epsilon is None else [
                    mpmath.nstr(mpmath.re(self.epsilon), 15), mpmath.nstr(mpmath.im(self.epsilon), 15)]}


def rankin_series(f, g, s, n_max, spec=None, min_margin=1):
    """L(f, g, s) from the Dirichlet series, as a Ball with a rigorous tail bound."""
    if g.k > f.k:
        f, g = g, f
    k, kp = f.k, g.k
    s = mpf(s)
    delta = s - (mpf(k + kp) / 2 + 2)
    if delta < min_margin:
        raise ValueError("convergence margin %s < %s" % (delta, min_margin))
    if spec is None or spec.n_max < n_max:
        af = _complex_coeffs(f, n_max)
        ag = _complex_coeffs(g, n_max)
        raw = [x * y for x, y in zip(af, ag)]
    else:
        raw = spec.raw[:n_max]
    head = mpmath.fsum(c * mpf(n) ** (-s) for n, c in enumerate(raw, 1))
    sigma = s - (mpf(k + kp) / 2 + 1)
    tail = _tau_sq_tail(n_max, sigma)
    chi = f.character * g.character
    removed = sorted(set(factorint(f.level)) | set(factorint(g.level)))
    Lchi = dirichlet_L(chi, 2 * s + 2 - f.weight - g.weight, removed)
    return Lchi * Ball(head, tail)


# ------------------------------------------------------------------ AFE
#
# phi(y), the inverse Mellin transform of A^s Gamma_C(s) Gamma_C(s - a), is
# 8 (2 pi)^a (v/2)^-a K_a(v) with v = 4 pi sqrt(y / A).  The incomplete
# integrals int_n^oo phi(y) y^(s-1) dy become C(s) int_{v_n}^oo v^mu K_a(v) dv
# with mu = 2s - 1 - a, evaluated by panelled Gauss-Legendre in double
# precision (the AFE error is heuristic anyway).

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


def _bessel_moment(a, mu, v0, panel=2.0):
    """int_{v0}^oo v^mu K_a(v) dv for an array of lower limits v0."""
    v0 = np.asarray(v0, dtype=float)
    top = max(float(np.real(mu)), 0.0) + 60.0 + 2 * a
    npan = int(np.ceil(top / panel))
    # nodes for every panel, relative to v0
    offs = (np.arange(npan)[:, None] * panel + (_GL_NODES[None, :] + 1) * panel / 2).ravel()
    wts = np.tile(_GL_WEIGHTS * panel / 2, npan)
    v = v0[:, None] + offs[None, :]
    logk = np.log(kve(a, v)) - v
    vals = np.exp(mu * np.log(v) + logk)
    return vals @ wts


def _afe_constant(spec, s):
    a = spec.a
    A = mpf(spec.conductor_root)
    pi = mpmath.pi
    return 8 * (2 * pi) ** a * mpf(2) ** a * (A / (16 * pi ** 2)) ** (s - 1) * (A / (8 * pi ** 2))


def _afe_sum(spec, s, cutoff, conj=False):
    """sum_{n <= cutoff} c_n int_1^oo phi(n t) t^(s-1) dt."""
    ns = np.arange(1, cutoff + 1, dtype=float)
    v0 = 4 * np.pi * np.sqrt(ns / spec.conductor_root)
    mu = complex(2 * s - 1 - spec.a)
    if mu.imag == 0:
        mu = mu.real
    J = _bessel_moment(spec.a, mu, v0)
    C = _afe_constant(spec, s)
    total = mpmath.mpc(0)
    for n in range(1, cutoff + 1):
        c = spec.coeffs[n - 1]
        if not c:
            continue
        if conj:
            c = mpmath.conj(c)
        j = J[n - 1]
        total += c * mpmath.mpc(complex(j)) * mpf(n) ** (-s)
    return C * total


def _afe_parts(spec, s, cutoff):
    return _afe_sum(spec, s, cutoff), _afe_sum(spec, spec.w - s, cutoff, conj=True)


def afe_cutoff(spec, s, digits=17):
    """Length after which both smoothed sums at s, relative to the full Gamma
    integral and allowing for coefficient growth, drop below 10^-digits."""
    A = spec.conductor_root
    sr = float(mpmath.re(s))
    hi, lo = max(sr, spec.w - sr), min(sr, spec.w - sr)
    mu = 2 * hi - 1 - spec.a
    full = _bessel_moment(spec.a, mu, [1e-12])[0]
    grow = max((spec.k + spec.kp) / 2 + 2 - lo, 0)
    n = 1
    while True:
        v = 4 * np.pi * np.sqrt(n / A)
        rel = _bessel_moment(spec.a, mu, [v])[0] / full
        if rel * n ** grow < 10.0 ** (-digits) or rel == 0:
            return n
        n += max(1, n // 20)


def _checked_cutoff(spec, s):
    n = afe_cutoff(spec, s)
    if n > spec.n_max:
        raise ValueError("need %d coefficients for the AFE, have %d" % (n, spec.n_max))
    return n


def solve_epsilon(spec, s0, n_series=None, check_point=None, threshold=1e-6):
    """Solve Lambda(s0) = X + eps Y against the Dirichlet series; verify at a second point."""
    n_series = n_series or spec.n_max
    ref = rankin_series(spec.f, spec.g, s0, n_series, spec)
    X, Y = _afe_parts(spec, s0, _checked_cutoff(spec, s0))
    eps = (spec.gamma(s0) * ref.center - X) / Y
    spec.epsilon_error = abs(spec.gamma(s0)) * ref.radius / abs(Y)
    s1 = check_point if check_point is not None else s0 + 1
    ref1 = rankin_series(spec.f, spec.g, s1, n_series, spec)
    X1, Y1 = _afe_parts(spec, s1, _checked_cutoff(spec, s1))
    pred = (X1 + eps * Y1) / spec.gamma(s1)
    resid = abs(pred - ref1.center) / abs(ref1.center)
    spec.epsilon = eps
    spec.epsilon_residual = resid
    if abs(abs(eps) - 1) > 1e-4:
        warnings.warn("solved root number has |eps| = %s, not 1" % mpmath.nstr(abs(eps), 8))
    if resid > threshold + ref1.radius / abs(ref1.center):
        raise ArithmeticError("epsilon solve residual %s: evaluator unreliable for this pair"
                              % mpmath.nstr(resid, 3))
    return eps


def afe_value(spec, s, tol=1e-10):
    """L(f, g, s) via the smoothed functional equation.

    Returns a Ball whose radius is a heuristic error estimate: the change
    under a longer cutoff plus the epsilon-solve residual."""
    if spec.epsilon is None:
        s0 = int(mpmath.ceil(mpf(spec.k + spec.kp) / 2)) + 8
        solve_epsilon(spec, s0)
    s = mpmath.mpmathify(s)
    n1 = _checked_cutoff(spec, s)
    n2 = min(2 * n1, spec.n_max)
    X, Y = _afe_parts(spec, s, n2)
    val = (X + spec.epsilon * Y) / spec.gamma(s)
    Xs, Ys = _afe_parts(spec, s, n1)
    val1 = (Xs + spec.epsilon * Ys) / spec.gamma(s)
    scale = (abs(X) + abs(Y)) / abs(spec.gamma(s))
    err = (abs(val - val1) + scale * (mpf(2) ** -45) + abs(val) * spec.epsilon_residual
           + abs(Y) * spec.epsilon_error / abs(spec.gamma(s)))
    if mpmath.im(s) == 0 and abs(mpmath.im(spec.epsilon)) < 1e-8:
        val = mpmath.re(val)
    return Ball(val, err)


# ------------------------------------------------------- critical values

def shimura_factor(k, kp, s):
    """Gamma(s) Gamma(s-k'-1) / (pi^(2s-k'-1) (-i)^(k-k') 2^(2s+k-k'))."""
    s = mpf(s)
    sign = [1, -1j, -1, 1j][(k - kp) % 4]
    return (mpmath.gamma(s) * mpmath.gamma(s - kp - 1)
            / (mpmath.pi ** (2 * s - kp - 1) * sign * mpf(2) ** (2 * s + k - kp)))


def algebraic_part(spec, s, method="afe", tol=1e-12):
    """A(s) = shimura_factor * L(f, g, s) as a Ball."""
    if method == "afe":
        L = afe_value(spec, s, tol)
    else:
        L = rankin_series(spec.f, spec.g, s, spec.n_max, spec)
    return L * shimura_factor(spec.k, spec.kp, s)


def euler_factor_algebraic(f, g, p, s):
    """E(f, g, s) exactly in Q[x]/(x^2 - a_p x + eps(p) p^(w-1)) with x = alpha_f."""
    ap = f.rational_ap(p)
    c = f.hecke_constant(p)
    poly = (Fraction(c), Fraction(-ap), Fraction(1))
    alpha = PolyQuotientElement(poly, [0, 1])
    beta = PolyQuotientElement(poly, [ap, -1])
    ag = g.rational_ap(p)
    cg = g.hecke_constant(p)
    ps1 = Fraction(p) ** (s - 1)
    ps = Fraction(p) ** s
    first = 1 - alpha.inverse() * (ps1 * ag / cg) + (alpha * alpha).inverse() * (ps1 * ps1 / cg)
    second = 1 - beta * (Fraction(ag) / ps) + beta * beta * (Fraction(cg) / (ps * ps))
    return first * second


def critical_ratio(spec, s1, s2, p=None, method="afe", tol=1e-12):
    """Ratio of algebraic parts at two critical points of the same pair.

    Returns (ratio Ball of A(s1)/A(s2), exact Euler-factor ratio in Q(alpha_f)
    or None when p is not given)."""
    lo, hi = spec.kp + 2, spec.k + 1
    for s in (s1, s2):
        if not lo <= s <= hi:
            raise ValueError("s=%s outside the critical range [%d, %d]" % (s, lo, hi))
    A1 = algebraic_part(spec, s1, method, tol)
    A2 = algebraic_part(spec, s2, method, tol)
    if A2.radius >= abs(A2.center):
        raise ZeroDivisionError("L(f, g, s2) vanishes within tolerance")
    ratio = A1 / A2
    eul = None
    if p is not None:
        eul = euler_factor_algebraic(spec.f, spec.g, p, s1) / euler_factor_algebraic(spec.f, spec.g, p, s2)
    return ratio, eul


def as_fraction(x, max_den=10 ** 12):
    """Nearest fraction with bounded denominator (for displaying ratios)."""
    return Fraction(mpmath.nstr(mpmath.re(x), 40)).limit_denominator(max_den)
