"""Symmetric tensors of a rank-2 module with basis u, v.

TSym^k has basis w^[r,s] (r+s = k), the sum of all distinct words with r
letters u and s letters v.  Sym^k of the dual has the dual basis w^(r,s).
"""

from fractions import Fraction
from itertools import combinations, permutations
from math import comb, factorial


class TSymVector:
    """coeffs[r] is the coefficient of w^[r, k-r]."""

    def __init__(self, k, coeffs=None):
        if coeffs is None:
            coeffs = [0] * (k + 1)
        coeffs = list(coeffs)
        if len(coeffs) != k + 1:
            raise ValueError("need k+1 coefficients")
        self.k = k
        self.coeffs = coeffs

    @classmethod
    def basis(cls, r, s):
        v = cls(r + s)
        v.coeffs[r] = 1
        return v

    def __getitem__(self, r):
        return self.coeffs[r]

    def __add__(self, other):
        return TSymVector(self.k, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        return TSymVector(self.k, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rmul__(self, c):
        return TSymVector(self.k, [c * a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, TSymVector):
            return tsym_mul(self, other)
        return TSymVector(self.k, [a * other for a in self.coeffs])

    def __eq__(self, other):
        return isinstance(other, TSymVector) and self.k == other.k and self.coeffs == other.coeffs

    def __repr__(self):
        terms = ["%s*w[%d,%d]" % (c, r, self.k - r) for r, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) or "0"


class SymVector(TSymVector):
    """coeffs[r] is the coefficient of w^(r, k-r)."""

    def pair(self, t):
        if t.k != self.k:
            raise ValueError("degree mismatch")
        return sum(a * b for a, b in zip(self.coeffs, t.coeffs))

    def __repr__(self):
        terms = ["%s*w(%d,%d)" % (c, r, self.k - r) for r, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) or "0"


class DetTwisted:
    """A scalar tensored with det^e; only e = 0 converts back to a scalar."""

    def __init__(self, value, exponent):
        self.value = value
        self.exponent = exponent

    def pair_det(self, e):
        """Pair against det^e (supplying e cancels exponent -e)."""
        return DetTwisted(self.value, self.exponent + e)

    def scalar(self):
        if self.exponent:
            raise ValueError("uncancelled determinant twist det^%d" % self.exponent)
        return self.value

    def __eq__(self, other):
        return (isinstance(other, DetTwisted) and self.value == other.value
                and self.exponent == other.exponent)

    def __repr__(self):
        return "%s e_%d" % (self.value, self.exponent)


class CGTensor:
    """Element of TSym^k (x) TSym^k' (x) det^-j.

    coeffs[(a, c)] is the coefficient of w^[a,k-a] (x) w^[c,k'-c].
    """

    def __init__(self, k, kp, j, coeffs=None):
        self.k, self.kp, self.j = k, kp, j
        self.twist = -j
        self.coeffs = {}
        for key, v in (coeffs or {}).items():
            if v:
                self.coeffs[key] = v

    def __getitem__(self, key):
        return self.coeffs.get(key, 0)

    def __add__(self, other):
        out = dict(self.coeffs)
        for key, v in other.coeffs.items():
            out[key] = out.get(key, 0) + v
        return CGTensor(self.k, self.kp, self.j, out)

    def __rmul__(self, c):
        return CGTensor(self.k, self.kp, self.j, {x: c * v for x, v in self.coeffs.items()})

    def __eq__(self, other):
        return (isinstance(other, CGTensor)
                and (self.k, self.kp, self.j) == (other.k, other.kp, other.j)
                and self.coeffs == other.coeffs)

    def contract(self, a, b):
        """Pair against a (x) b in Sym^k (x) Sym^k'."""
        if a.k != self.k or b.k != self.kp:
            raise ValueError("degree mismatch")
        val = sum(v * a.coeffs[x] * b.coeffs[y] for (x, y), v in self.coeffs.items())
        return DetTwisted(val, self.twist)

    def table(self):
        """Rows (a, c, coefficient) sorted by basis index."""
        return [(a, c, self.coeffs[(a, c)]) for (a, c) in sorted(self.coeffs)]

    def __repr__(self):
        return "CGTensor(%d,%d,%d; %s)" % (self.k, self.kp, self.j, self.table())


def tsym_mul(x, y):
    """w^[a,b] w^[c,d] = C(a+c,a) C(b+d,b) w^[a+c,b+d]."""
    k = x.k + y.k
    out = [0] * (k + 1)
    for a, cx in enumerate(x.coeffs):
        if not cx:
            continue
        b = x.k - a
        for c, cy in enumerate(y.coeffs):
            if cy:
                d = y.k - c
                out[a + c] += comb(a + c, a) * comb(b + d, b) * cx * cy
    return TSymVector(k, out)


def _check_cg(k, kp, j):
    if k < 0 or kp < 0 or j < 0 or j > min(k, kp):
        raise ValueError("need k, k' >= 0 and 0 <= j <= min(k, k')")


def cg_coefficient(k, kp, j, r, rp, i):
    """Coefficient of w^[r+i,k-r-i] (x) w^[r'+j-i,k'-j+i-r'] in the image of
    the r + r' = s summand; zero when a factorial argument is negative."""
    args_num = (r + i, k - r - i, rp + j - i, kp - rp - j + i)
    args_den = (r, rp, k - r - j, kp - rp - j, i, j - i)
    if min(args_num + args_den) < 0:
        return 0
    num = 1
    for x in args_num:
        num *= factorial(x)
    den = 1
    for x in args_den:
        den *= factorial(x)
    return Fraction((-1) ** i * num, den)


def cg_map(k, kp, j, t):
    """Clebsch-Gordan map TSym^{k+k'-2j} -> TSym^k (x) TSym^k' (x) det^-j."""
    _check_cg(k, kp, j)
    T = k + kp - 2 * j
    if t.k != T:
        raise ValueError("input must have degree k+k'-2j")
    out = {}
    for s, x in enumerate(t.coeffs):
        if not x:
            continue
        for r in range(0, s + 1):
            rp = s - r
            if r > k - j or rp > kp - j:
                continue
            for i in range(j + 1):
                c = cg_coefficient(k, kp, j, r, rp, i)
                if c:
                    key = (r + i, rp + j - i)
                    out[key] = out.get(key, 0) + c * x
    out = {key: (v.numerator if isinstance(v, Fraction) and v.denominator == 1 else v)
           for key, v in out.items()}
    return CGTensor(k, kp, j, out)


def cg_trilinear(k, kp, j, a, b, t):
    """Full contraction of cg_map(t) against a (x) b; carries det^-j."""
    if a.k != k or b.k != kp or t.k != k + kp - 2 * j:
        raise ValueError("degree mismatch")
    return cg_map(k, kp, j, t).contract(a, b)


def trilinear_value(k, kp, j):
    """The closed form k! k'! / (j! (k-j)! (k'-j)!)."""
    return factorial(k) * factorial(kp) // (factorial(j) * factorial(k - j) * factorial(kp - j))


# ------------------------------------------------------------ tensor oracle

def _words(r, s):
    """All distinct words with r letters 'u' and s letters 'v'."""
    n = r + s
    for pos in combinations(range(n), r):
        w = ["v"] * n
        for q in pos:
            w[q] = "u"
        yield tuple(w)


def _shuffle(a, b):
    n = len(a) + len(b)
    for pos in combinations(range(n), len(a)):
        out = [None] * n
        ia = iter(a)
        ib = iter(b)
        ps = set(pos)
        for q in range(n):
            out[q] = next(ia) if q in ps else next(ib)
        yield tuple(out)


def _shuffle_mul(x, y):
    out = {}
    for wa, ca in x.items():
        for wb, cb in y.items():
            for w in _shuffle(wa, wb):
                out[w] = out.get(w, 0) + ca * cb
    return out


ORACLE_MAX_DEGREE = 8


def cg_oracle(k, kp, j, t):
    """The CG map built in the full tensor algebra.

    t is written as a sum of words in H^{(x)T}, cut into blocks of k-j and
    k'-j letters, and multiplied (shuffle product, blockwise) by the norm
    of (v(x)u - u(x)v)^{(x)j} over permutations of the first block.
    """
    _check_cg(k, kp, j)
    T = k + kp - 2 * j
    if T > ORACLE_MAX_DEGREE or max(k, kp) > ORACLE_MAX_DEGREE:
        raise ValueError("cost guard: degree too large for the tensor oracle")
    if t.k != T:
        raise ValueError("input must have degree k+k'-2j")
    # t in blocks
    x = {}
    for s, c in enumerate(t.coeffs):
        if c:
            for w in _words(s, T - s):
                key = (w[:k - j], w[k - j:])
                x[key] = x.get(key, 0) + c
    # (v (x) u - u (x) v)^{(x) j}, then the norm on the first block
    y = {((), ()): 1}
    for _ in range(j):
        ny = {}
        for (a, b), c in y.items():
            for (l1, l2, sg) in (("v", "u", 1), ("u", "v", -1)):
                key = (a + (l1,), b + (l2,))
                ny[key] = ny.get(key, 0) + sg * c
        y = ny
    normed = {}
    for (a, b), c in y.items():
        for perm in set(permutations(range(j))):
            key = (tuple(a[q] for q in perm), b)
            normed[key] = normed.get(key, 0) + c
    # blockwise shuffle product
    prod = {}
    for (xa, xb), cx in x.items():
        for (ya, yb), cy in normed.items():
            c = cx * cy
            if not c:
                continue
            for wa in _shuffle(xa, ya):
                for wb in _shuffle(xb, yb):
                    prod[(wa, wb)] = prod.get((wa, wb), 0) + c
    out = {}
    for (wa, wb), c in prod.items():
        if not c:
            continue
        a = wa.count("u")
        cc = wb.count("u")
        sa = tuple(["u"] * a + ["v"] * (k - a))
        sb = tuple(["u"] * cc + ["v"] * (kp - cc))
        if wa == sa and wb == sb:
            out[(a, cc)] = c
    # symmetry audit: every word of a given content must carry the same weight
    for (wa, wb), c in prod.items():
        key = (wa.count("u"), wb.count("u"))
        if c != out.get(key, 0):
            raise AssertionError("oracle image is not symmetric")
    return CGTensor(k, kp, j, out)


def motive_fil_dim(k, kp, n):
    """Dimension of Fil^n of the de Rham realisation of M(f x g)."""
    lo, hi = min(k, kp), max(k, kp)
    if n <= 0:
        return 4
    if n <= lo + 1:
        return 3
    if n <= hi + 1:
        return 2
    if n <= k + kp + 2:
        return 1
    return 0
