"""Exact coefficient arithmetic.

Rationals are plain :class:`fractions.Fraction`.  The module adds the
cyclotomic quotient ring Q[x]/Phi_N (optionally with coefficients taken
modulo an integer), capped p-adic numbers with a valuation floor, Dirichlet
characters, Bernoulli numbers, Gauss sums, Hensel lifting and rational
reconstruction.
"""

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

Rational = Fraction


class PrecisionError(ArithmeticError):
    pass


class NonOrdinaryError(ArithmeticError):
    pass


# ---------------------------------------------------------------- integers

def as_rational(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError("not a rational: %r" % (x,))


def factorint(n):
    """Prime factorisation by trial division, as a dict."""
    n = abs(n)
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n):
    ds = [1]
    for q, e in factorint(n).items():
        ds = [d * q ** i for d in ds for i in range(e + 1)]
    return sorted(ds)


def euler_phi(n):
    r = n
    for q in factorint(n):
        r = r // q * (q - 1)
    return r


def primes_up_to(n):
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i in range(n + 1) if sieve[i]]


def is_prime(n):
    return n >= 2 and factorint(n) == {n: 1}


def valuation(x, p):
    """p-adic valuation of a nonzero integer or rational."""
    x = as_rational(x)
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    a, b = x.numerator, x.denominator
    while a % p == 0:
        a //= p
        v += 1
    while b % p == 0:
        b //= p
        v -= 1
    return v


def lcm(a, b):
    return a // gcd(a, b) * b


# ------------------------------------------------------ Bernoulli and zeta

_BERN = [Fraction(1)]


def bernoulli(n):
    """B_n with B_0 = 1 and B_1 = -1/2."""
    if n < 0:
        raise ValueError("negative index")
    while len(_BERN) <= n:
        m = len(_BERN)
        # sum_{k<m+1} C(m+1, k) B_k = 0
        s = Fraction(0)
        c = 1
        for k in range(m):
            s += c * _BERN[k]
            c = c * (m + 1 - k) // (k + 1)
        _BERN.append(-s / (m + 1))
    return _BERN[n]


def zeta_neg(k):
    """zeta(-1-k) for integers k >= -1."""
    if k < -1:
        raise ValueError("k must be >= -1")
    if k == -1:
        return Fraction(-1, 2)
    return -bernoulli(k + 2) / (k + 2)


# ------------------------------------------------------------ polynomials

@lru_cache(maxsize=None)
def cyclotomic_poly(n):
    """Integer coefficients of Phi_n, lowest degree first."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n):
        if d < n:
            num = _poly_exact_div(num, cyclotomic_poly(d))
    return tuple(num)


def _poly_exact_div(a, b):
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    lead = b[-1]
    for i in range(len(q) - 1, -1, -1):
        c = a[i + len(b) - 1] // lead
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    assert not any(a), "inexact polynomial division"
    return q


# -------------------------------------------------------- quotient rings

class PolyQuotientElement:
    """Element of R[x]/(P) for a monic integer polynomial P.

    R is the rationals when ``mod`` is None, else Z/mod.  This covers the
    cyclotomic rings and the small coefficient fields of eigenforms.
    """

    __slots__ = ("poly", "coeffs", "mod")

    def __init__(self, poly, coeffs, mod=None):
        poly = tuple(poly)
        d = len(poly) - 1
        if poly[-1] != 1:
            raise ValueError("modulus polynomial must be monic")
        cs = list(coeffs)
        if len(cs) > d:
            cs = _reduce(cs, poly)
        cs = cs + [0] * (d - len(cs))
        if mod is None:
            cs = [c if isinstance(c, Fraction) else Fraction(c) for c in cs]
        else:
            cs = [int(c) % mod for c in cs]
        self.poly = poly
        self.coeffs = tuple(cs)
        self.mod = mod

    def _new(self, coeffs):
        obj = object.__new__(type(self))
        obj.poly = self.poly
        obj.coeffs = tuple(coeffs)
        obj.mod = self.mod
        if hasattr(self, "N"):
            obj.N = self.N
        return obj

    @property
    def degree(self):
        return len(self.poly) - 1

    def _coerce(self, other):
        if isinstance(other, PolyQuotientElement):
            if other.poly != self.poly or other.mod != self.mod:
                raise TypeError("ring mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return self._scalar(other)
        return NotImplemented

    def _scalar(self, c):
        cs = [0] * self.degree
        if self.mod is None:
            cs = [Fraction(0)] * self.degree
            cs[0] = as_rational(c)
        else:
            cs[0] = _mod_rational(c, self.mod)
        return self._new(cs)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.mod is None:
            return self._new([a + b for a, b in zip(self.coeffs, other.coeffs)])
        m = self.mod
        return self._new([(a + b) % m for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        if self.mod is None:
            return self._new([-a for a in self.coeffs])
        return self._new([(-a) % self.mod for a in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if self.mod is None:
                return self._new([a * other for a in self.coeffs])
            c = _mod_rational(other, self.mod)
            return self._new([a * c % self.mod for a in self.coeffs])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        prod = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        prod = _reduce(prod, self.poly)
        if self.mod is not None:
            prod = [c % self.mod for c in prod]
        return self._new(prod)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result = self._scalar(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if self.mod is None:
                return self * (Fraction(1) / other)
            return self * pow(int(other), -1, self.mod)
        other = self._coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def inverse(self):
        """Inverse via the resultant-free linear solve x * y = 1."""
        d = self.degree
        # multiplication matrix columns: self * x^i
        cols = []
        xi = self._scalar(1)
        gen = self._new([0, 1] + [0] * (d - 2)) if d > 1 else None
        for i in range(d):
            cols.append((self * xi).coeffs)
            if gen is not None:
                xi = xi * gen
        rows = [[cols[j][i] for j in range(d)] for i in range(d)]
        rhs = [1] + [0] * (d - 1)
        sol = _solve_square(rows, rhs, self.mod)
        return self._new(sol)

    def is_zero(self):
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._scalar(other)
        if not isinstance(other, PolyQuotientElement):
            return NotImplemented
        return (self.poly == other.poly and self.mod == other.mod
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.poly, self.coeffs, self.mod))

    def is_rational(self):
        return not any(self.coeffs[1:])

    def rational_part(self):
        if not self.is_rational():
            raise ValueError("element is not in the base ring")
        return self.coeffs[0]

    def reduce_mod(self, m):
        """Image with coefficients in Z/m (denominators must be units)."""
        if self.mod is not None:
            if self.mod % m:
                raise ValueError("incompatible modulus")
            return self._new_mod([c % m for c in self.coeffs], m)
        return self._new_mod([_mod_rational(c, m) for c in self.coeffs], m)

    def _new_mod(self, coeffs, m):
        obj = self._new(coeffs)
        obj.mod = m
        return obj

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(str(c) if i == 0 else "%s*x^%d" % (c, i))
        return "(" + (" + ".join(terms) if terms else "0") + ")"

    def to_list(self):
        return [str(c) for c in self.coeffs]


class CycElement(PolyQuotientElement):
    """Element of Q[zeta_N] (or (Z/m)[zeta_N]) stored modulo Phi_N."""

    __slots__ = ("N",)

    def __init__(self, N, coeffs=(), mod=None):
        self.N = N
        super().__init__(cyclotomic_poly(N), coeffs if coeffs else [0], mod)

    @classmethod
    def zeta(cls, N, e=1, mod=None):
        """zeta_N ** e."""
        e %= N
        cs = [0] * (e + 1)
        cs[e] = 1
        return cls(N, cs, mod)

    @classmethod
    def from_exponent_sum(cls, N, exps, mod=None):
        """sum_e c_e zeta_N^e from a dict exponent -> coefficient."""
        cs = [0] * N
        for e, c in exps.items():
            cs[e % N] += c
        return cls(N, cs, mod)

    def galois(self, a):
        """The automorphism zeta_N -> zeta_N^a (gcd(a, N) = 1)."""
        if gcd(a, self.N) != 1:
            raise ValueError("exponent not coprime to N")
        N = self.N
        cs = [0] * N
        for i, c in enumerate(self.coeffs):
            if c:
                cs[(i * a) % N] += c
        return CycElement(N, cs, self.mod)

    def conj(self):
        return self.galois(-1)

    def lift_to(self, M):
        """Image under Q(zeta_N) -> Q(zeta_M) for N | M."""
        if M % self.N:
            raise ValueError("N must divide M")
        r = M // self.N
        cs = [0] * M
        for i, c in enumerate(self.coeffs):
            cs[i * r] += c
        return CycElement(M, cs, self.mod)


def _reduce(cs, poly):
    cs = list(cs)
    d = len(poly) - 1
    for i in range(len(cs) - 1, d - 1, -1):
        c = cs[i]
        if c:
            cs[i] = 0
            base = i - d
            for j in range(d):
                if poly[j]:
                    cs[base + j] -= c * poly[j]
    return cs[:d]


def _mod_rational(c, m):
    if isinstance(c, Fraction):
        return c.numerator * pow(c.denominator, -1, m) % m
    return int(c) % m


def _solve_square(rows, rhs, mod):
    n = len(rows)
    a = [list(r) + [b] for r, b in zip(rows, rhs)]
    if mod is None:
        a = [[as_rational(x) for x in r] for r in a]
    for col in range(n):
        piv = None
        for r in range(col, n):
            x = a[r][col]
            if mod is None:
                if x != 0:
                    piv = r
                    break
            elif gcd(x % mod, mod) == 1:
                piv = r
                break
        if piv is None:
            raise ZeroDivisionError("element is not invertible")
        a[col], a[piv] = a[piv], a[col]
        if mod is None:
            inv = 1 / a[col][col]
            a[col] = [x * inv for x in a[col]]
        else:
            inv = pow(a[col][col], -1, mod)
            a[col] = [x * inv % mod for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                if mod is None:
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                else:
                    a[r] = [(x - f * y) % mod for x, y in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


def cyc_frobenius(z, p):
    """The ring map zeta_N -> zeta_N^p on coefficients."""
    if gcd(p, z.N) != 1:
        raise ValueError("p divides N")
    return z.galois(p)


# ------------------------------------------------------------ p-adics

class PadicNum:
    """Capped p-adic number value * p^valuation_floor.

    ``value`` lies in [0, p^M) and the number is known modulo
    p^(valuation_floor + M).  valuation_floor is <= 0; negative floors hold
    bounded denominators such as p^-j in Euler factors.
    """

    __slots__ = ("p", "M", "value", "valuation_floor")

    def __init__(self, p, M, value, valuation_floor=0):
        if M < 1:
            raise PrecisionError("no p-adic digits left")
        self.p = p
        self.M = M
        self.value = int(value) % p ** M
        self.valuation_floor = valuation_floor

    # internal form: exact integer u * p^e known modulo p^A
    @classmethod
    def _make(cls, p, u, e, A):
        if u == 0:
            e = A
        else:
            while u % p == 0:
                u //= p
                e += 1
        if e >= A:
            if A <= 0:
                raise PrecisionError("result known only modulo p^%d" % A)
            return cls(p, A, 0, 0)
        floor = min(e, 0)
        M = A - floor
        if M < 1:
            raise PrecisionError("result has no significant digits")
        return cls(p, M, u * p ** (e - floor), floor)

    @classmethod
    def from_rational(cls, r, p, M):
        """Embed a rational with M stored digits."""
        r = as_rational(r)
        if r == 0:
            return cls(p, M, 0, 0)
        v = valuation(r, p)
        u = r / Fraction(p) ** v
        unit = u.numerator * pow(u.denominator, -1, p ** M) % p ** M
        A = M + min(v, 0)
        return cls._make(p, unit, v, A)

    @property
    def absprec(self):
        return self.valuation_floor + self.M

    def valuation(self):
        if self.value == 0:
            return self.absprec
        u, v = self.value, self.valuation_floor
        while u % self.p == 0:
            u //= self.p
            v += 1
        return v

    def is_zero(self):
        return self.value == 0

    def is_unit(self):
        return self.valuation() == 0 and self.value != 0

    def _coerce(self, other):
        if isinstance(other, PadicNum):
            if other.p != self.p:
                raise TypeError("different primes")
            return other
        if isinstance(other, (int, Fraction)):
            other = as_rational(other)
            extra = 0 if other == 0 else abs(valuation(other, self.p))
            return PadicNum.from_rational(other, self.p,
                                          self.absprec + 2 * self.M + 2 * extra + 2)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.p
        f = min(self.valuation_floor, o.valuation_floor)
        A = min(self.absprec, o.absprec)
        u = (self.value * p ** (self.valuation_floor - f)
             + o.value * p ** (o.valuation_floor - f))
        return PadicNum._make(p, u % p ** (A - f) if A > f else 0, f, A)

    __radd__ = __add__

    def __neg__(self):
        return PadicNum(self.p, self.M, -self.value, self.valuation_floor)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        A = min(self.absprec + o.valuation(), o.absprec + self.valuation())
        return PadicNum._make(self.p, self.value * o.value,
                              self.valuation_floor + o.valuation_floor, A)

    __rmul__ = __mul__

    def inverse(self):
        p = self.p
        if self.value == 0:
            raise ZeroDivisionError("p-adic zero to available precision")
        v = self.valuation()
        u = self.value // p ** (v - self.valuation_floor)
        rel = self.absprec - v
        inv = pow(u, -1, p ** rel)
        if -v < -max(self.M, 1) * 4:
            raise PrecisionError("division exceeds the valuation floor bound")
        return PadicNum._make(p, inv, -v, rel - v)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result = PadicNum._make(self.p, 1, 0, self.absprec + 2 * self.M)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._coerce(other)
        if not isinstance(other, PadicNum):
            return NotImplemented
        if other.p != self.p:
            return False
        A = min(self.absprec, other.absprec)
        f = min(self.valuation_floor, other.valuation_floor)
        d = (self.value * self.p ** (self.valuation_floor - f)
             - other.value * self.p ** (other.valuation_floor - f))
        return d % self.p ** (A - f) == 0 if A > f else True

    def __hash__(self):
        return hash((self.p, self.valuation_floor))

    def lift(self):
        """The stored representative value * p^floor as a Fraction."""
        return Fraction(self.value) * Fraction(self.p) ** self.valuation_floor

    def residue(self):
        if self.valuation_floor < 0:
            raise ValueError("not integral")
        return self.value % self.p

    def with_precision(self, M):
        """Reduce to at most M stored digits."""
        if M >= self.M:
            return self
        return PadicNum(self.p, M, self.value, self.valuation_floor)

    def digits(self):
        ds = []
        u = self.value
        for _ in range(self.M):
            ds.append(u % self.p)
            u //= self.p
        return ds

    def to_dict(self):
        return {"p": self.p, "M": self.M, "valuation_floor": self.valuation_floor,
                "digits": self.digits()}

    @classmethod
    def from_dict(cls, d):
        v = sum(x * d["p"] ** i for i, x in enumerate(d["digits"]))
        return cls(d["p"], d["M"], v, d["valuation_floor"])

    def __repr__(self):
        return "PadicNum(p=%d, M=%d, value=%d, floor=%d)" % (
            self.p, self.M, self.value, self.valuation_floor)


def hensel_unit_root(a_p, c, M):
    """Unit root of X^2 - a_p X + c modulo p^M by Newton iteration."""
    if not isinstance(a_p, PadicNum):
        raise TypeError("a_p must be a PadicNum")
    p = a_p.p
    if not isinstance(c, PadicNum):
        c = PadicNum.from_rational(c, p, M)
    if a_p.valuation_floor < 0 or a_p.value % p == 0:
        raise NonOrdinaryError("a_p is not a p-adic unit")
    if not c.is_zero() and c.valuation() < 1:
        raise NonOrdinaryError("constant term must have positive valuation")
    mod = p ** M
    a = a_p.value % mod
    cc = c.lift()
    cc = cc.numerator * pow(cc.denominator, -1, mod) % mod
    alpha = a % p
    prec = 1
    while prec < M:
        prec = min(2 * prec, M)
        m = p ** prec
        f = (alpha * alpha - a * alpha + cc) % m
        df = (2 * alpha - a) % m
        alpha = (alpha - f * pow(df, -1, m)) % m
    return PadicNum(p, M, alpha)


def poly_roots_mod_p(poly, p):
    """Roots in F_p of an integer polynomial (lowest degree first)."""
    return [x for x in range(p) if _poly_eval_int(poly, x) % p == 0]


def _poly_eval_int(poly, x):
    r = 0
    for c in reversed(poly):
        r = r * x + c
    return r


def hensel_lift_root(poly, r, p, M):
    """Lift a simple root r mod p of an integer polynomial to Z/p^M."""
    dpoly = [i * c for i, c in enumerate(poly)][1:]
    if _poly_eval_int(dpoly, r) % p == 0:
        raise ValueError("root is not simple modulo p")
    x = r % p
    prec = 1
    while prec < M:
        prec = min(2 * prec, M)
        m = p ** prec
        x = (x - _poly_eval_int(poly, x) * pow(_poly_eval_int(dpoly, x), -1, m)) % m
    return x


def embed_element(z, p, M, root):
    """Image of a quotient-ring element under x -> root (an element of Z/p^M)."""
    mod = p ** M
    acc = 0
    for c in reversed(z.coeffs):
        acc = acc * root + _mod_rational(c, mod)
    return PadicNum(p, M, acc % mod)


def cyc_embedding_root(N, p, M, choice=0):
    """A root of Phi_N in Z/p^M (requires p = 1 mod N); ``choice`` indexes the
    roots mod p in increasing order."""
    poly = cyclotomic_poly(N)
    roots = poly_roots_mod_p(poly, p)
    if not roots:
        raise ValueError("Phi_%d has no root modulo %d" % (N, p))
    return hensel_lift_root(poly, roots[choice], p, M)


def rational_reconstruct(x, bound=None):
    """Smallest n/d with n = d*x modulo p^M, or None.

    |n|, d <= floor(sqrt(p^M / 2)) unless ``bound`` is given.
    """
    p = x.p
    m = p ** x.M
    if bound is None:
        bound = isqrt(m // 2)
    r0, r1 = m, x.value % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound or gcd(r1, abs(s1)) != 1:
        return None
    if s1 < 0:
        r1, s1 = -r1, -s1
    return Fraction(r1, s1) * Fraction(p) ** x.valuation_floor


# -------------------------------------------------- Dirichlet characters

@lru_cache(maxsize=None)
def unit_generators(n):
    """Independent generators of (Z/n)^x with their orders."""
    if n <= 2:
        return ()
    gens = []
    fac = factorint(n)
    for q, e in sorted(fac.items()):
        qe = q ** e
        rest = n // qe
        local = []
        if q == 2:
            if e >= 2:
                local.append((qe - 1, 2))
            if e >= 3:
                local.append((5, qe // 4))
        else:
            g = _primitive_root_prime_power(q, e)
            local.append((g, qe // q * (q - 1)))
        for g, o in local:
            # CRT: g mod q^e, 1 mod rest
            if rest == 1:
                x = g % n
            else:
                x = (g * rest * pow(rest, -1, qe) + qe * pow(qe, -1, rest)) % n
            gens.append((x, o))
    return tuple(gens)


def _primitive_root_prime_power(q, e):
    phi = q - 1
    fac = factorint(phi)
    for g in range(2, q + 1):
        if all(pow(g, phi // r, q) != 1 for r in fac):
            if e > 1 and pow(g, q - 1, q * q) == 1:
                g += q
            return g
    raise ArithmeticError("no primitive root")


def carmichael(n):
    gens = unit_generators(n)
    e = 1
    for _, o in gens:
        e = lcm(e, o)
    return e


@lru_cache(maxsize=None)
def _dlog_table(n):
    """Map unit -> exponent vector on the standard generators."""
    gens = unit_generators(n)
    table = {1 % n: ()}
    for g, o in gens:
        new = {}
        for x, vec in table.items():
            y = x
            for i in range(o):
                new[y] = vec + (i,)
                y = y * g % n
        table = new
    return table


class DirichletCharacter:
    """Character mod n given by exponents of generator images.

    The value at the i-th standard generator is zeta_E^(exps[i]) where E is
    the exponent (Carmichael function) of (Z/n)^x.
    """

    def __init__(self, modulus, exps=None):
        self.modulus = modulus
        gens = unit_generators(modulus)
        self.E = carmichael(modulus)
        if exps is None:
            exps = [0] * len(gens)
        if len(exps) != len(gens):
            raise ValueError("need one image per generator")
        for (g, o), x in zip(gens, exps):
            if (x * o) % self.E:
                raise ValueError("image order does not divide generator order")
        self.exps = tuple(int(x) % self.E for x in exps)

    @classmethod
    def trivial(cls, modulus=1):
        return cls(modulus)

    @classmethod
    def from_gen_images(cls, modulus, images):
        """Build from [[unit, zeta_exponent], ...] with exponents of zeta_E."""
        gens = unit_generators(modulus)
        table = _dlog_table(modulus)
        E = carmichael(modulus)
        # solve for images of standard generators from arbitrary units
        img = dict((int(u) % modulus, int(e)) for u, e in images)
        exps = [None] * len(gens)
        for u, e in img.items():
            vec = table[u]
            nz = [i for i, v in enumerate(vec) if v]
            if len(nz) == 1 and vec[nz[0]] == 1:
                exps[nz[0]] = e
        for i, (g, o) in enumerate(gens):
            if exps[i] is None:
                if g in img:
                    exps[i] = img[g]
                else:
                    raise ValueError("generator %d has no image" % g)
        chi = cls(modulus, exps)
        for u, e in img.items():
            if chi.exponent(u) != e % E:
                raise ValueError("inconsistent generator images")
        return chi

    def gen_images(self):
        return [[g, x] for (g, _), x in zip(unit_generators(self.modulus), self.exps)]

    def exponent(self, x):
        """Exponent e with chi(x) = zeta_E^e, or None if x is not a unit."""
        x %= self.modulus
        if gcd(x, self.modulus) != 1:
            return None
        vec = _dlog_table(self.modulus)[x % self.modulus if self.modulus > 1 else 0]
        return sum(a * b for a, b in zip(vec, self.exps)) % self.E

    def __call__(self, x):
        e = self.exponent(x)
        if e is None:
            return CycElement(self.E, [0])
        return CycElement.zeta(self.E, e)

    def value_int(self, x):
        """chi(x) as an integer when the character is at most quadratic."""
        e = self.exponent(x)
        if e is None:
            return 0
        if e == 0:
            return 1
        if 2 * e == self.E:
            return -1
        raise ValueError("character value is not rational")

    def value_complex(self, x):
        import cmath
        e = self.exponent(x)
        if e is None:
            return 0j
        return cmath.exp(2j * cmath.pi * e / self.E)

    def order(self):
        o = 1
        for x in self.exps:
            o = lcm(o, self.E // gcd(self.E, x))
        return o

    def is_trivial(self):
        return not any(self.exps)

    @property
    def parity(self):
        e = self.exponent(-1)
        return 1 if e == 0 else -1

    def __mul__(self, other):
        if other.modulus != self.modulus:
            m = lcm(self.modulus, other.modulus)
            return self.extend(m) * other.extend(m)
        return DirichletCharacter(self.modulus,
                                  [a + b for a, b in zip(self.exps, other.exps)])

    def __invert__(self):
        return DirichletCharacter(self.modulus, [-a for a in self.exps])

    inverse = __invert__

    def __eq__(self, other):
        return (isinstance(other, DirichletCharacter)
                and self.modulus == other.modulus and self.exps == other.exps)

    def __hash__(self):
        return hash((self.modulus, self.exps))

    def extend(self, m):
        """The induced character modulo a multiple m of the modulus."""
        if m % self.modulus:
            raise ValueError("not a multiple")
        gens = unit_generators(m)
        E = carmichael(m)
        exps = []
        for g, o in gens:
            e = self.exponent(g)
            exps.append(e * (E // self.E))
        return DirichletCharacter(m, exps)

    def restrict(self, d):
        """The character mod d inducing this one (d must be a valid modulus)."""
        gens = unit_generators(d)
        E = carmichael(d)
        exps = []
        for g, o in gens:
            x = _lift_unit(g, d, self.modulus)
            e = self.exponent(x)
            if (e * E) % self.E:
                raise ValueError("not induced from modulus %d" % d)
            exps.append(e * E // self.E)
        chi = DirichletCharacter(d, exps)
        if chi.extend(self.modulus) != self:
            raise ValueError("not induced from modulus %d" % d)
        return chi

    @property
    def conductor(self):
        for d in divisors(self.modulus):
            ok = True
            for x in range(1, self.modulus, d):
                if gcd(x, self.modulus) == 1 and self.exponent(x) != 0:
                    ok = False
                    break
            if ok:
                return d
        return self.modulus

    def primitive(self):
        return self.restrict(self.conductor)

    def to_dict(self):
        return {"modulus": self.modulus, "gen_images": self.gen_images()}

    def __repr__(self):
        return "DirichletCharacter(%d, %s)" % (self.modulus, list(self.exps))


def _lift_unit(g, d, n):
    """A unit modulo n congruent to g modulo d."""
    x = g % d if d > 1 else 1
    while gcd(x, n) != 1:
        x += d
    return x


def all_characters(n):
    gens = unit_generators(n)
    E = carmichael(n)
    out = [[]]
    for g, o in gens:
        step = E // o
        out = [v + [step * i] for v in out for i in range(o)]
    return [DirichletCharacter(n, v) for v in out]


def gauss_sum(eps):
    """G(eps) of the primitive character attached to eps, in Q(zeta_L) with
    L = lcm(order, conductor)."""
    chi = eps.primitive()
    c = chi.modulus
    o = chi.order()
    L = lcm(o, c)
    exps = {}
    for x in range(c):
        e = chi.exponent(x)
        if e is None:
            continue
        # chi(x) = zeta_E^e = zeta_o^(e*o/E)
        k = (e * o // chi.E) * (L // o) + x * (L // c)
        exps[k % L] = exps.get(k % L, 0) + 1
    if c == 1:
        return CycElement(L, [1])
    return CycElement.from_exponent_sum(L, exps)
