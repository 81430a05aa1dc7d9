"""Eisenstein series q-expansions and the TSym-valued syntomic section.

F_{k+2,b}      holomorphic series of level N over Q(zeta_N)
F^(p)_{t,s,b}  p-adic series (p not dividing d'), any integers t, s
F^[p]_{t,s,b}  its p-depletion
"""

from fractions import Fraction
from math import factorial

from .exactnum import CycElement, zeta_neg, bernoulli
from .qseries import QQ, CycRing, QExpansion, deplete, divisor_sieve, theta


def _sign(t):
    return 1 if t % 2 == 0 else -1


def _assemble(rows, b, N, sign, ring, const):
    """Turn per-residue sums into coefficients sum_r c_r (z^{br} + sign z^{-br})."""
    out = []
    for n, row in enumerate(rows):
        if n == 0:
            out.append(ring.coerce(const))
            continue
        exps = {}
        for r, c in enumerate(row):
            if c:
                e = (b * r) % N
                exps[e] = exps.get(e, 0) + c
                exps[(-e) % N] = exps.get((-e) % N, 0) + sign * c
        out.append(CycElement.from_exponent_sum(N, exps, ring.mod))
    return QExpansion._raw(out, ring)


def eis_holo(k, b, N, Q):
    """F_{k+2,b}: constant zeta(-1-k), a_n = sum_{dd'=n} d^{k+1}(z^{bd'} + (-1)^k z^{-bd'})."""
    if k < -1:
        raise ValueError("k must be >= -1")
    if b % N == 0:
        raise ValueError("b must be nonzero modulo N")
    ring = CycRing(N)
    rows = divisor_sieve(Q, lambda d, dp: d ** (k + 1), lambda dp: dp % N, N)
    return _assemble(rows, b, N, _sign(k), ring, zeta_neg(k))


def eis_padic(t, s, b, N, p, Q, M=None):
    """F^(p)_{t,s,b} with a_0 = 0 and a_n = sum_{dd'=n, p !| d'} d^{t+s-1} d'^{-s}(...).

    With M given the result lives in (Z/p^M)[zeta_N]; the exponent t+s-1 may
    be negative, in which case terms with p | d leave Z_p and the series is
    returned exactly over Q(zeta_N) (it is reduced modulo p^M whenever all
    coefficients turn out to be p-integral).  M=None always gives the exact
    rational series.
    """
    if N % p == 0:
        raise ValueError("p must not divide N")
    a = t + s - 1
    if M is not None and a >= 0:
        mod = p ** M

        def weight(d, dp):
            if dp % p == 0:
                return 0
            return pow(d, a, mod) * pow(dp, -s, mod) % mod

        rows = divisor_sieve(Q, weight, lambda dp: dp % N, N, mod)
        return _assemble(rows, b, N, _sign(t), CycRing(N, mod), 0)

    def weight(d, dp):
        if dp % p == 0:
            return 0
        return Fraction(d) ** a * Fraction(dp) ** (-s)

    rows = divisor_sieve(Q, weight, lambda dp: dp % N, N)
    exact = _assemble(rows, b, N, _sign(t), CycRing(N), 0)
    if M is None:
        return exact
    if all(x.denominator % p for c in exact.coeffs for x in c.coeffs):
        return exact.change_ring(CycRing(N, p ** M))
    return exact


def eis_depleted(t, s, b, N, p, Q, M=None):
    """F^[p]_{t,s,b} = (1 - VU) F^(p)_{t,s,b}."""
    return deplete(eis_padic(t, s, b, N, p, Q, M), p)


def eis_level_one(w, Q):
    """Normalised rational E_w = 1 - (2w/B_w) sum sigma_{w-1}(n) q^n (w >= 4 even).

    For w = 2 this is the quasimodular E_2."""
    if w % 2 or w < 2:
        raise ValueError("weight must be even and >= 2")
    c = Fraction(-2 * w) / bernoulli(w)
    cs = [Fraction(0)] * Q
    cs[0] = Fraction(1)
    for d in range(1, Q):
        dw = d ** (w - 1)
        for m in range(d, Q, d):
            cs[m] += dw
    return QExpansion([cs[0]] + [c * x for x in cs[1:]], QQ, Q)


# ---------------------------------------------------------------- sections

class TSymSection:
    """Degree-k section; component j is the coefficient of v^[k-j, j]."""

    def __init__(self, k, components):
        components = list(components)
        if len(components) != k + 1:
            raise ValueError("need k+1 components")
        rings = {c.ring for c in components}
        if len(rings) != 1:
            raise TypeError("components must share a ring")
        Q = min(c.prec for c in components)
        self.k = k
        self.components = [c.truncate(Q) for c in components]

    @property
    def ring(self):
        return self.components[0].ring

    @property
    def prec(self):
        return self.components[0].prec

    def __getitem__(self, j):
        return self.components[j]

    def __add__(self, other):
        return TSymSection(self.k, [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other):
        return TSymSection(self.k, [a - b for a, b in zip(self.components, other.components)])

    def scale(self, c):
        return TSymSection(self.k, [a.scale(c) for a in self.components])

    def __eq__(self, other):
        return (isinstance(other, TSymSection) and self.k == other.k
                and all(a == b for a, b in zip(self.components, other.components)))

    def is_zero(self):
        return all(c.is_zero() for c in self.components)

    def to_dict(self):
        return {"degree": self.k, "components": [c.to_dict() for c in self.components]}

    def __repr__(self):
        return "TSymSection(k=%d, Q=%d, ring=%r)" % (self.k, self.prec, self.ring)


def _zero_like(f):
    return f.scale(0)


def derham_eis(k, b, N, Q):
    """-N^k F_{k+2,b} placed in component v^[0,k]."""
    F = eis_holo(k, b, N, Q)
    z = _zero_like(F)
    return TSymSection(k, [z] * k + [F.scale(-N ** k)])


def syntomic_alpha_rig(k, b, N, p, Q, M=None):
    """Components -N^k (-1)^(k-j) (k-j)! F^(p)_{2j-k, k+1-j, b}, j = 0..k."""
    comps = []
    for j in range(k + 1):
        F = eis_padic(2 * j - k, k + 1 - j, b, N, p, Q, M)
        c = -N ** k * (-1) ** (k - j) * factorial(k - j)
        comps.append(F.scale(c))
    return TSymSection(k, comps)


def nabla(sec):
    """Connection: F v^[r,s] -> theta(F) v^[r,s] + (r+1) F v^[r+1,s-1]; the
    second term is dropped when s = 0."""
    k = sec.k
    out = [theta(c) for c in sec.components]
    for j in range(1, k + 1):
        r = k - j
        out[j - 1] = out[j - 1] + sec.components[j].scale(r + 1)
    return TSymSection(k, out)
