"""Truncated q-expansions over exact rings.

A :class:`QExpansion` holds a_0 .. a_{Q-1} together with a ring descriptor.
Multiplication switches between schoolbook and number-theoretic-transform
convolution (several word-size primes glued by CRT); both paths give
identical results.
"""

from fractions import Fraction
from math import gcd

import numpy as np

from .exactnum import (CycElement, DirichletCharacter, PolyQuotientElement,
                       _mod_rational, as_rational, cyclotomic_poly, lcm)


# ------------------------------------------------------------------ rings

class QQRing:
    tag = "QQ"

    def coerce(self, x):
        if isinstance(x, int):
            return x
        if isinstance(x, Fraction):
            return x.numerator if x.denominator == 1 else x
        if isinstance(x, PolyQuotientElement):
            return self.coerce(x.rational_part())
        return self.coerce(as_rational(x))

    def zero(self):
        return 0

    def is_zero(self, x):
        return x == 0

    def __eq__(self, other):
        return isinstance(other, QQRing)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"

    def to_json(self, x):
        x = as_rational(x)
        return "%d/%d" % (x.numerator, x.denominator)


QQ = QQRing()


class ZmodRing:
    def __init__(self, m):
        self.m = m
        self.tag = "Z/%d" % m

    def coerce(self, x):
        if isinstance(x, PolyQuotientElement):
            x = x.rational_part()
        return _mod_rational(x, self.m)

    def zero(self):
        return 0

    def is_zero(self, x):
        return x % self.m == 0

    def __eq__(self, other):
        return isinstance(other, ZmodRing) and other.m == self.m

    def __hash__(self):
        return hash(("Z", self.m))

    def __repr__(self):
        return self.tag

    def to_json(self, x):
        return str(x)


class QuotientRing:
    """Q[x]/(P) or (Z/m)[x]/(P); with ``N`` set this is the cyclotomic ring."""

    def __init__(self, poly=None, mod=None, N=None):
        if N is not None:
            poly = cyclotomic_poly(N)
        self.poly = tuple(poly)
        self.mod = mod
        self.N = N
        base = "Q" if mod is None else "Z/%d" % mod
        self.tag = ("%s[zeta_%d]" % (base, N)) if N else "%s[x]/%s" % (base, list(self.poly))

    @property
    def degree(self):
        return len(self.poly) - 1

    def element(self, coeffs):
        if self.N is not None:
            return CycElement(self.N, coeffs, self.mod)
        return PolyQuotientElement(self.poly, coeffs, self.mod)

    def coerce(self, x):
        if isinstance(x, CycElement) and self.N is not None and x.N != self.N:
            if self.N % x.N == 0:
                x = x.lift_to(self.N)
            else:
                raise TypeError("cannot map Q(zeta_%d) into Q(zeta_%d)" % (x.N, self.N))
        if isinstance(x, PolyQuotientElement):
            if x.poly != self.poly:
                raise TypeError("ring mismatch")
            if x.mod != self.mod:
                if self.mod is None:
                    raise TypeError("cannot lift residues")
                x = x.reduce_mod(self.mod)
            return x
        return self.element([x])

    def zero(self):
        return self.element([0])

    def is_zero(self, x):
        return x.is_zero()

    def __eq__(self, other):
        return (isinstance(other, QuotientRing) and other.poly == self.poly
                and other.mod == self.mod)

    def __hash__(self):
        return hash((self.poly, self.mod))

    def __repr__(self):
        return self.tag

    def to_json(self, x):
        return x.to_list()


def CycRing(N, mod=None):
    return QuotientRing(N=N, mod=mod)


# ------------------------------------------------------------ convolution

def _find_ntt_primes(k=22, count=40):
    out = []
    c = (1 << 31) // (1 << k)
    while len(out) < count and c > 0:
        p = c * (1 << k) + 1
        if p < (1 << 31) and _isprime(p):
            out.append(p)
        c -= 1
    return out


def _isprime(n):
    if n < 2:
        return False
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % a == 0:
            return n == a
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _primitive_root(p):
    from .exactnum import factorint
    fac = factorint(p - 1)
    g = 2
    while any(pow(g, (p - 1) // q, p) == 1 for q in fac):
        g += 1
    return g


NTT_LOG = 22
NTT_PRIMES = _find_ntt_primes(NTT_LOG)
_ROOTS = {}
_TWIDDLE = {}
_BITREV = {}


def _bitrev(n):
    r = _BITREV.get(n)
    if r is None:
        bits = n.bit_length() - 1
        idx = np.arange(n, dtype=np.int64)
        r = np.zeros(n, dtype=np.int64)
        for b in range(bits):
            r |= ((idx >> b) & 1) << (bits - 1 - b)
        _BITREV[n] = r
    return r


def _twiddles(p, length, invert):
    key = (p, length, invert)
    w = _TWIDDLE.get(key)
    if w is None:
        g = _ROOTS.setdefault(p, _primitive_root(p))
        wl = pow(g, (p - 1) // (2 * length), p)
        if invert:
            wl = pow(wl, p - 2, p)
        w = np.ones(length, dtype=np.int64)
        filled = 1
        while filled < length:
            step = pow(wl, filled, p)
            m = min(filled, length - filled)
            w[filled:filled + m] = w[:m] * step % p
            filled += m
        _TWIDDLE[key] = w
    return w


def _ntt(a, p, invert=False):
    n = len(a)
    a = a[_bitrev(n)]
    length = 1
    while length < n:
        w = _twiddles(p, length, invert)
        blk = a.reshape(-1, 2 * length)
        u = blk[:, :length]
        v = blk[:, length:] * w % p
        a = np.concatenate([(u + v) % p, (u - v) % p], axis=1).reshape(-1)
        length *= 2
    if invert:
        a = a * pow(n, p - 2, p) % p
    return a


def _conv_mod_prime(a, b, p, n):
    fa = _ntt(np.concatenate([a % p, np.zeros(n - len(a), dtype=np.int64)]), p)
    fb = _ntt(np.concatenate([b % p, np.zeros(n - len(b), dtype=np.int64)]), p)
    return _ntt(fa * fb % p, p, invert=True)


def _to_residues(xs, p):
    return np.array([x % p for x in xs], dtype=np.int64)


def conv_transform(a, b, length=None):
    """Exact integer convolution via NTT over several primes plus CRT."""
    if not a or not b:
        return []
    full = len(a) + len(b) - 1
    length = full if length is None else min(length, full)
    ma = max(abs(x) for x in a)
    mb = max(abs(x) for x in b)
    bound = 2 * min(len(a), len(b)) * ma * mb + 1
    primes = []
    prod = 1
    for p in NTT_PRIMES:
        if prod > bound:
            break
        primes.append(p)
        prod *= p
    if prod <= bound:
        raise OverflowError("coefficients too large for the prime set")
    n = 1
    while n < full:
        n *= 2
    if n > (1 << NTT_LOG):
        raise OverflowError("transform length exceeds supported size")
    res = []
    for p in primes:
        ra = _to_residues(a, p)
        rb = _to_residues(b, p)
        res.append(_conv_mod_prime(ra, rb, p, n)[:length])
    # Garner
    ts = []
    for i, p in enumerate(primes):
        acc = np.zeros(length, dtype=np.int64)
        coef = 1
        for j in range(i):
            acc = (acc + ts[j] * coef) % p
            coef = coef * primes[j] % p
        ts.append((res[i] - acc) % p * pow(coef, p - 2, p) % p)
    out = ts[-1].astype(object)
    for i in range(len(primes) - 2, -1, -1):
        out = out * primes[i] + ts[i].astype(object)
    half = prod // 2
    return [int(x) - prod if x > half else int(x) for x in out]


def conv_schoolbook(a, b, length=None):
    """Direct O(n^2) integer convolution."""
    if not a or not b:
        return []
    full = len(a) + len(b) - 1
    length = full if length is None else min(length, full)
    ma = max(abs(x) for x in a)
    mb = max(abs(x) for x in b)
    if ma * mb * min(len(a), len(b)) < (1 << 62):
        out = np.convolve(np.array(a, dtype=np.int64), np.array(b, dtype=np.int64))
        return [int(x) for x in out[:length]]
    out = [0] * length
    for i, x in enumerate(a[:length]):
        if x:
            lim = length - i
            for j, y in enumerate(b[:lim]):
                out[i + j] += x * y
    return out


SCHOOLBOOK_CUTOFF = 48


def conv_int(a, b, length=None, method="auto"):
    if method == "schoolbook" or (method == "auto" and min(len(a), len(b)) < SCHOOLBOOK_CUTOFF):
        return conv_schoolbook(a, b, length)
    return conv_transform(a, b, length)


# --------------------------------------------------------------- sieve

def divisor_sieve(Q, d_weight, dp_class, nclasses, mod=None):
    """Accumulate sum_{d d' = n} d_weight(d, d') into bins dp_class(d').

    Returns a list of Q rows, each a list of ``nclasses`` integers; row n
    holds sum over factorisations n = d d' of d_weight(d, d') placed in bin
    dp_class(d').  Cost is O(Q log Q) weight evaluations.
    """
    rows = [[0] * nclasses for _ in range(Q)]
    for d in range(1, Q):
        for dp in range(1, (Q - 1) // d + 1):
            w = d_weight(d, dp)
            if w:
                r = rows[d * dp]
                c = dp_class(dp)
                r[c] += w
    if mod is not None:
        for r in rows:
            for i in range(nclasses):
                r[i] %= mod
    return rows


def divisor_sigma_table(Q, k):
    """sigma_k(n) for 0 <= n < Q (entry 0 is 0)."""
    out = [0] * Q
    for d in range(1, Q):
        dk = d ** k
        for m in range(d, Q, d):
            out[m] += dk
    return out


# ------------------------------------------------------------- QExpansion

class QExpansion:
    """Truncated power series a_0 + a_1 q + ... + a_{Q-1} q^{Q-1} + O(q^Q)."""

    def __init__(self, coeffs, ring=QQ, prec=None):
        coeffs = list(coeffs)
        if prec is None:
            prec = len(coeffs)
        if len(coeffs) < prec:
            coeffs += [ring.zero()] * (prec - len(coeffs))
        self.ring = ring
        self.coeffs = [ring.coerce(c) for c in coeffs[:prec]]
        self.prec = prec

    @classmethod
    def _raw(cls, coeffs, ring):
        obj = object.__new__(cls)
        obj.ring = ring
        obj.coeffs = coeffs
        obj.prec = len(coeffs)
        return obj

    @classmethod
    def one(cls, Q, ring=QQ):
        return cls([1], ring, Q)

    @classmethod
    def monomial(cls, n, Q, ring=QQ, c=1):
        cs = [0] * Q
        if n < Q:
            cs[n] = c
        return cls(cs, ring, Q)

    def __len__(self):
        return self.prec

    def __getitem__(self, n):
        if isinstance(n, slice):
            return self.coeffs[n]
        if n >= self.prec:
            raise IndexError("coefficient beyond precision")
        return self.coeffs[n]

    def truncate(self, Q):
        Q = min(Q, self.prec)
        return QExpansion._raw(self.coeffs[:Q], self.ring)

    def change_ring(self, ring):
        return QExpansion(self.coeffs, ring, self.prec)

    def map(self, fn, ring=None):
        ring = ring or self.ring
        return QExpansion([fn(c) for c in self.coeffs], ring, self.prec)

    def _check(self, other):
        if not isinstance(other, QExpansion):
            raise TypeError("expected a QExpansion")
        if other.ring != self.ring:
            raise TypeError("ring mismatch: %r vs %r" % (self.ring, other.ring))

    def _norm(self, c):
        if isinstance(self.ring, ZmodRing):
            return c % self.ring.m
        if self.ring is QQ or isinstance(self.ring, QQRing):
            return self.ring.coerce(c)
        return c

    def __add__(self, other):
        if not isinstance(other, QExpansion):
            cs = list(self.coeffs)
            cs[0] = self._norm(cs[0] + self.ring.coerce(other))
            return QExpansion._raw(cs, self.ring)
        self._check(other)
        Q = min(self.prec, other.prec)
        return QExpansion._raw([self._norm(a + b) for a, b in
                                zip(self.coeffs[:Q], other.coeffs[:Q])], self.ring)

    __radd__ = __add__

    def __neg__(self):
        return QExpansion._raw([self._norm(-a) for a in self.coeffs], self.ring)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = self.ring.coerce(c)
        return QExpansion._raw([self._norm(a * c) for a in self.coeffs], self.ring)

    def __mul__(self, other):
        if isinstance(other, QExpansion):
            return mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result = QExpansion.one(self.prec, self.ring)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def inverse(self):
        """Multiplicative inverse (a_0 must be invertible)."""
        a0 = self.coeffs[0]
        if self.ring is QQ:
            inv0 = Fraction(1) / as_rational(a0)
        elif isinstance(self.ring, ZmodRing):
            inv0 = pow(a0, -1, self.ring.m)
        else:
            inv0 = 1 / a0
        g = QExpansion([inv0], self.ring, 1)
        n = 1
        while n < self.prec:
            n = min(2 * n, self.prec)
            f = self.truncate(n)
            g = QExpansion(g.coeffs, self.ring, n)
            # g <- g (2 - f g)
            fg = mul(f, g)
            g = mul(g, (-fg) + 2)
        return g

    def __eq__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        if other.ring != self.ring:
            return False
        Q = min(self.prec, other.prec)
        if isinstance(self.ring, ZmodRing):
            m = self.ring.m
            return all((a - b) % m == 0 for a, b in zip(self.coeffs[:Q], other.coeffs[:Q]))
        return all(a == b for a, b in zip(self.coeffs[:Q], other.coeffs[:Q]))

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def is_zero(self):
        return all(self.ring.is_zero(c) for c in self.coeffs)

    def valuation(self):
        for i, c in enumerate(self.coeffs):
            if not self.ring.is_zero(c):
                return i
        return self.prec

    def __repr__(self):
        shown = []
        for i, c in enumerate(self.coeffs[:8]):
            if not self.ring.is_zero(c):
                shown.append("%s*q^%d" % (c, i))
        return "QExpansion(%s + O(q^%d) over %r)" % (" + ".join(shown) or "0", self.prec, self.ring)

    # operators
    def theta(self):
        return theta(self)

    def u_op(self, p):
        return u_op(self, p)

    def v_op(self, p):
        return v_op(self, p)

    def deplete(self, p):
        return deplete(self, p)

    def to_dict(self):
        return {"ring": self.ring.tag, "Q": self.prec,
                "coeffs": [self.ring.to_json(c) for c in self.coeffs]}

    @classmethod
    def from_dict(cls, d):
        tag = d["ring"]
        if tag != "QQ":
            raise ValueError("only rational expansions can be read back")
        return cls([Fraction(c) for c in d["coeffs"]], QQ, d["Q"])


# ------------------------------------------------------------------- mul

def _int_lanes(s):
    """Split a series into integer lanes plus a common denominator."""
    ring = s.ring
    if ring is QQ or isinstance(ring, QQRing):
        den = 1
        for c in s.coeffs:
            if isinstance(c, Fraction):
                den = lcm(den, c.denominator)
        lane = [int(c * den) if isinstance(c, Fraction) else c * den for c in s.coeffs]
        return [lane], den
    if isinstance(ring, ZmodRing):
        return [list(s.coeffs)], 1
    if isinstance(ring, QuotientRing):
        d = ring.degree
        if ring.mod is None:
            den = 1
            for c in s.coeffs:
                for x in c.coeffs:
                    den = lcm(den, x.denominator)
            lanes = [[int(c.coeffs[i] * den) for c in s.coeffs] for i in range(d)]
        else:
            den = 1
            lanes = [[c.coeffs[i] for c in s.coeffs] for i in range(d)]
        return lanes, den
    return None, None


def mul(a, b, method="auto"):
    """Cauchy product to precision min(Q_a, Q_b)."""
    a._check(b)
    ring = a.ring
    Q = min(a.prec, b.prec)
    la, da = _int_lanes(a.truncate(Q))
    lb, db = _int_lanes(b.truncate(Q))
    if la is None:
        return _mul_generic(a, b, Q)
    den = da * db
    if len(la) == 1:
        prod = conv_int(la[0], lb[0], Q, method)
        if isinstance(ring, ZmodRing):
            return QExpansion._raw([x % ring.m for x in prod], ring)
        if den == 1:
            return QExpansion._raw(prod, ring)
        return QExpansion._raw([ring.coerce(Fraction(x, den)) for x in prod], ring)
    # bivariate packing: index n*(2d-1) + i
    d = len(la)
    w = 2 * d - 1
    pa = [0] * (Q * w)
    pb = [0] * (Q * w)
    for i in range(d):
        pa[i::w] = la[i]
        pb[i::w] = lb[i]
    prod = conv_int(pa, pb, Q * w, method)
    prod += [0] * (Q * w - len(prod))
    out = []
    m = ring.mod
    for n in range(Q):
        cs = prod[n * w:(n + 1) * w]
        if m is None:
            if den != 1:
                cs = [Fraction(x, den) for x in cs]
        else:
            cs = [x % m for x in cs]
        out.append(ring.element(cs))
    return QExpansion._raw(out, ring)


def _mul_generic(a, b, Q):
    z = a.ring.zero()
    out = [z] * Q
    for i in range(Q):
        x = a.coeffs[i]
        if a.ring.is_zero(x):
            continue
        for j in range(Q - i):
            out[i + j] = out[i + j] + x * b.coeffs[j]
    return QExpansion._raw(out, a.ring)


# -------------------------------------------------------------- operators

def theta(a):
    """q d/dq: a_n -> n a_n."""
    z = a.ring.coerce(0)
    return QExpansion._raw([a._norm(c * n) if n else z for n, c in enumerate(a.coeffs)], a.ring)


def u_op(a, p):
    """U_p: a_n -> a_{np}; precision ceil(Q/p)."""
    Q = (a.prec + p - 1) // p
    return QExpansion._raw(a.coeffs[0:p * Q:p], a.ring)


def v_op(a, p):
    """V_p: q -> q^p; precision p*Q."""
    Q = a.prec * p
    z = a.ring.coerce(0)
    out = [z] * Q
    out[0::p] = a.coeffs
    return QExpansion._raw(out, a.ring)


def deplete(a, p):
    """(1 - V U) a: coefficients at multiples of p removed."""
    z = a.ring.coerce(0)
    return QExpansion._raw([z if n % p == 0 else c for n, c in enumerate(a.coeffs)], a.ring)


def _char_value(eps, ell, ring):
    if eps is None:
        return 1
    if isinstance(ring, (QQRing, ZmodRing)):
        return ring.coerce(eps.value_int(ell))
    return ring.coerce(eps(ell))


def hecke_t(a, ell, w, eps=None):
    """T_ell on a candidate form of weight w and character eps.

    (T a)_n = a_{n ell} + eps(ell) ell^(w-1) a_{n/ell}; precision floor(Q/ell).
    """
    Q = a.prec // ell
    c = _char_value(eps, ell, a.ring)
    if eps is not None and eps.exponent(ell) is None:
        c = 0
    c = a._norm(a.ring.coerce(c) * ell ** (w - 1)) if c else 0
    out = []
    for n in range(Q):
        x = a.coeffs[n * ell]
        if c and n % ell == 0:
            x = a._norm(x + c * a.coeffs[n // ell])
        out.append(x)
    return QExpansion._raw(out, a.ring)


# --------------------------------------------------------- eta quotients

def euler_product(Q):
    """prod_{n>=1} (1 - q^n) to precision Q (pentagonal numbers)."""
    cs = [0] * Q
    cs[0] = 1
    k = 1
    while k * (3 * k - 1) // 2 < Q:
        sign = -1 if k % 2 else 1
        for e in (k * (3 * k - 1) // 2, k * (3 * k + 1) // 2):
            if e < Q:
                cs[e] += sign
        k += 1
    return QExpansion._raw(cs, QQ)


def eta_quotient(exponents, Q):
    """q^(sum d r_d / 24) prod_d prod_n (1 - q^(d n))^(r_d)."""
    lead = sum(d * r for d, r in exponents.items())
    if lead % 24:
        raise ValueError("fractional leading exponent %d/24" % lead)
    lead //= 24
    if lead < 0:
        raise ValueError("negative leading exponent")
    if lead >= Q:
        return QExpansion([0], QQ, Q)
    W = Q - lead
    result = QExpansion.one(W)
    for d, r in sorted(exponents.items()):
        if r == 0:
            continue
        Wd = (W - 1) // d + 1
        result = result * v_op(_euler_power(Wd, r), d).truncate(W)
    return QExpansion._raw([0] * lead + list(result.coeffs), QQ)


def _euler_power(Q, r):
    """prod (1 - q^n)^r."""
    if r < 0:
        return _euler_power(Q, -r).inverse()
    if r % 3 == 0 and Q > 64:
        # Jacobi: prod (1-q^n)^3 = sum (-1)^m (2m+1) q^(m(m+1)/2)
        cube = [0] * Q
        m = 0
        while m * (m + 1) // 2 < Q:
            cube[m * (m + 1) // 2] = (-1) ** m * (2 * m + 1)
            m += 1
        return QExpansion._raw(cube, QQ) ** (r // 3)
    return euler_product(Q) ** r
