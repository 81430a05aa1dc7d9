"""Spaces of modular forms on Gamma_0(N) built from Eisenstein products and
eta quotients, Hecke matrices, eigenforms and the Newform data model."""

import json
import warnings
from fractions import Fraction
from itertools import combinations_with_replacement, product
from math import ceil, gcd, isqrt

from .exactnum import (DirichletCharacter, NonOrdinaryError, PadicNum,
                       PolyQuotientElement, as_rational, bernoulli, divisors,
                       embed_element, euler_phi, factorint, hensel_lift_root,
                       hensel_unit_root, is_prime, poly_roots_mod_p,
                       primes_up_to)
from .linalg import charpoly, nullspace, transpose
from .qseries import (QQ, QExpansion, QuotientRing, ZmodRing, eta_quotient,
                      hecke_t, u_op, v_op)


class InconsistentSpanError(ArithmeticError):
    """A Hecke image does not lie in the computed span."""


class SeparationError(ArithmeticError):
    """Probe operators do not split the space into eigenlines."""


# ------------------------------------------------------ Gamma_0(N) counts

def gamma0_index(N):
    idx = N
    for p in factorint(N):
        idx = idx * (p + 1) // p
    return idx


def _nu2(N):
    if N % 4 == 0:
        return 0
    out = 1
    for p in factorint(N):
        if p == 2:
            continue
        out *= 2 if p % 4 == 1 else 0
    return out


def _nu3(N):
    if N % 9 == 0:
        return 0
    out = 1
    for p in factorint(N):
        if p == 3:
            continue
        out *= 2 if p % 3 == 1 else 0
    return out


def gamma0_cusps(N):
    return sum(euler_phi(gcd(d, N // d)) for d in divisors(N))


def gamma0_genus(N):
    g = Fraction(gamma0_index(N), 12) - Fraction(_nu2(N), 4) - Fraction(_nu3(N), 3) \
        - Fraction(gamma0_cusps(N), 2) + 1
    return int(g)


def dim_cusp_forms(N, w):
    """dim S_w(Gamma_0(N)) for even w."""
    if w % 2 or w <= 0:
        return 0
    g = gamma0_genus(N)
    if w == 2:
        return g
    c = gamma0_cusps(N)
    return (w - 1) * (g - 1) + (w // 2 - 1) * c + _nu2(N) * (w // 4) + _nu3(N) * (w // 3)


def dim_modular_forms(N, w):
    """dim M_w(Gamma_0(N)) for even w."""
    if w == 0:
        return 1
    if w % 2 or w < 0:
        return 0
    if w == 2:
        return gamma0_genus(N) + gamma0_cusps(N) - 1
    return dim_cusp_forms(N, w) + gamma0_cusps(N)


STURM_MARGIN = 10


def sturm_bound(N, w, margin=STURM_MARGIN):
    return ceil(w * gamma0_index(N) / 12) + margin


# ------------------------------------------------------------- recipes

def _eis_rational_int(a, Q):
    """Primitive integral multiple of E_a (a >= 4 even)."""
    B = bernoulli(a)
    num = -2 * a * B.denominator
    den = B.numerator
    # E_a = 1 + (num/den) sum sigma; scale by den/g
    cs = [0] * Q
    for d in range(1, Q):
        dw = d ** (a - 1)
        for m in range(d, Q, d):
            cs[m] += dw
    out = [den] + [num * c for c in cs[1:]]
    g = 0
    for x in out:
        g = gcd(g, x)
    sign = -1 if out[0] < 0 else 1
    return [sign * x // g for x in out]


def _e2_level(d, Q):
    """E_2(q) - d E_2(q^d), divided by the content."""
    cs = [0] * Q
    for m in range(1, Q):
        pass
    sig = [0] * Q
    for k in range(1, Q):
        for m in range(k, Q, k):
            sig[m] += k
    out = [1 - d] + [0] * (Q - 1)
    for n in range(1, Q):
        out[n] = -24 * sig[n]
        if n % d == 0:
            out[n] += 24 * d * sig[n // d]
    g = 0
    for x in out:
        g = gcd(g, x)
    return [x // g for x in out]


def recipe_weight(r):
    kind = r[0]
    if kind == "E":
        return r[1]
    if kind == "E2":
        return 2
    if kind == "eta":
        return sum(e for _, e in r[1]) // 2
    if kind == "prod":
        return sum(recipe_weight(x) for x in r[1:])
    if kind == "V":
        return recipe_weight(r[2])
    raise ValueError("unknown recipe %r" % (r,))


def recipe_level(r):
    kind = r[0]
    if kind == "E":
        return r[2]
    if kind == "E2":
        return r[1] * r[2]
    if kind == "eta":
        lv = 1
        for d, _ in r[1]:
            lv = lv * d // gcd(lv, d)
        return lv
    if kind == "prod":
        lv = 1
        for x in r[1:]:
            m = recipe_level(x)
            lv = lv * m // gcd(lv, m)
        return lv
    if kind == "V":
        return r[1] * recipe_level(r[2])
    raise ValueError("unknown recipe %r" % (r,))


def evaluate_recipe(r, Q, cache=None):
    """q-expansion of a recipe over QQ (integer coefficients)."""
    if cache is not None and (r, Q) in cache:
        return cache[(r, Q)]
    kind = r[0]
    if kind == "E":
        a, d = r[1], r[2]
        base = QExpansion._raw(_eis_rational_int(a, (Q - 1) // d + 1), QQ)
        out = v_op(base, d).truncate(Q) if d > 1 else base
    elif kind == "E2":
        d, e = r[1], r[2]
        base = QExpansion._raw(_e2_level(d, (Q - 1) // e + 1), QQ)
        out = v_op(base, e).truncate(Q) if e > 1 else base
    elif kind == "eta":
        out = eta_quotient(dict(r[1]), Q)
    elif kind == "prod":
        out = evaluate_recipe(r[1], Q, cache)
        for x in r[2:]:
            out = out * evaluate_recipe(x, Q, cache)
    elif kind == "V":
        d = r[1]
        base = evaluate_recipe(r[2], (Q - 1) // d + 1, cache)
        out = v_op(base, d).truncate(Q)
    else:
        raise ValueError("unknown recipe %r" % (r,))
    if cache is not None:
        cache[(r, Q)] = out
    return out


def eta_quotients(N, w, bound=None):
    """Eta quotients prod eta(dz)^r_d in M_w(Gamma_0(N)) with trivial character.

    Conditions: sum r_d = 2w, sum d r_d = 0 and sum (N/d) r_d = 0 mod 24,
    prod d^r_d a square, and non-negative order at every cusp.
    """
    D = divisors(N)
    if bound is None:
        bound = 24 if len(D) <= 3 else (12 if len(D) <= 4 else (6 if len(D) <= 6 else 3))
    out = []
    rng = range(-bound, bound + 1)
    for head in product(rng, repeat=len(D) - 1):
        last = 2 * w - sum(head)
        if abs(last) > max(bound, 24):
            continue
        rs = head + (last,)
        if sum(d * r for d, r in zip(D, rs)) % 24:
            continue
        if sum((N // d) * r for d, r in zip(D, rs)) % 24:
            continue
        sq = 1
        den = 1
        for d, r in zip(D, rs):
            if r > 0:
                sq *= d ** r
            else:
                den *= d ** (-r)
        s = sq * den
        if isqrt(s) ** 2 != s:
            continue
        ok = True
        for c in D:
            if sum(gcd(d, c) ** 2 * r * (N // d) for d, r in zip(D, rs)) < 0:
                ok = False
                break
        if ok:
            out.append(("eta", tuple((d, r) for d, r in zip(D, rs) if r)))
    return out


def _blocks(N, w_max):
    """Building blocks of level dividing N and weight <= w_max, by weight."""
    blocks = {}
    D = divisors(N)
    for d in D:
        for e in D:
            if d > 1 and N % (d * e) == 0:
                blocks.setdefault(2, []).append(("E2", d, e))
    for a in range(4, w_max + 1, 2):
        for d in D:
            blocks.setdefault(a, []).append(("E", a, d))
    for a in range(2, w_max + 1, 2):
        for r in eta_quotients(N, a):
            blocks.setdefault(a, []).append(r)
    return blocks


def candidate_recipes(N, w, max_factors=3):
    """Deterministic candidate stream: single blocks, pairs, then triples."""
    blocks = _blocks(N, w)
    weights = sorted(blocks)
    seen = set()
    for nf in range(1, max_factors + 1):
        for ws in combinations_with_replacement(weights, nf):
            if sum(ws) != w:
                continue
            pools = [blocks[a] for a in ws]
            for combo in product(*pools):
                key = tuple(sorted(combo))
                if key in seen:
                    continue
                seen.add(key)
                if nf == 1:
                    yield combo[0]
                else:
                    yield ("prod",) + key


# ------------------------------------------------------- echelon helpers

RANK_PRIME = (1 << 61) - 1


class _ModEchelon:
    """Incremental echelon form modulo a large prime, for greedy rank tests."""

    def __init__(self, mod=RANK_PRIME):
        self.mod = mod
        self.rows = []

    def _red(self, v):
        m = self.mod
        v = list(v)
        for c, row in self.rows:
            x = v[c]
            if x:
                v = [(a - x * b) % m for a, b in zip(v, row)]
        return v

    def add(self, v):
        m = self.mod
        v = self._red([_to_mod(x, m) for x in v])
        c = next((i for i, x in enumerate(v) if x), None)
        if c is None:
            return False
        inv = pow(v[c], -1, m)
        self.rows.append((c, [x * inv % m for x in v]))
        return True

    def rank(self):
        return len(self.rows)


def _to_mod(x, m):
    if isinstance(x, Fraction):
        return x.numerator * pow(x.denominator, -1, m) % m
    return x % m


def _pval(x, p):
    x = Fraction(x)
    if not x:
        return None
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def echelon_basis(rows, pivot_limit, p=None):
    """Reduced echelon basis of the span of integer/rational rows.

    Pivot columns are taken below ``pivot_limit``.  With a prime p, pivots
    are p-adic units and rows are rescaled by powers of p, so the result is
    a basis of the saturated Z_(p)-lattice (q-expansions in Z_(p)).
    Returns (basis, pivots, dependent_indices).
    """
    basis = []
    pivots = []
    dropped = []
    for idx, r in enumerate(rows):
        v = [Fraction(x) for x in r]
        for c, b in zip(pivots, basis):
            x = v[c]
            if x:
                v = [a - x * y for a, y in zip(v, b)]
        head = v[:pivot_limit]
        if not any(head):
            if any(v):
                raise InconsistentSpanError("candidate vanishes below the Sturm bound but not beyond")
            dropped.append(idx)
            continue
        if p is None:
            c = next(i for i, x in enumerate(head) if x)
        else:
            vmin = min(_pval(x, p) for x in head if x)
            scale = Fraction(p) ** (-vmin)
            v = [x * scale for x in v]
            c = next(i for i, x in enumerate(v[:pivot_limit]) if x and _pval(x, p) == 0)
        inv = 1 / v[c]
        v = [x * inv for x in v]
        for i, b in enumerate(basis):
            x = b[c]
            if x:
                basis[i] = [a - x * y for a, y in zip(b, v)]
        basis.append(v)
        pivots.append(c)
    order = sorted(range(len(pivots)), key=lambda i: pivots[i])
    return [basis[i] for i in order], [pivots[i] for i in order], dropped


# ----------------------------------------------------------------- space

class ModFormSpace:
    """A span of q-expansions of weight w on Gamma_0(N), in reduced echelon form.

    Row i of the basis has a 1 at pivot column i and 0 at the other pivots,
    so the coordinates of a form are its coefficients at the pivots.
    """

    def __init__(self, level, weight, recipes, basis, pivots, sturm, prec,
                 character=None, expected_dim=None, lattice_prime=None, seed=0):
        self.level = level
        self.weight = weight
        self.character = character or DirichletCharacter.trivial(level)
        self.recipes = list(recipes)
        self.basis = [QExpansion._raw(list(b), QQ) for b in basis]
        self.pivots = list(pivots)
        self.sturm = sturm
        self.prec = prec
        self.expected_dim = expected_dim
        self.lattice_prime = lattice_prime
        self.seed = seed
        self._hecke = {}

    @property
    def dim(self):
        return len(self.basis)

    @property
    def certified(self):
        return self.expected_dim is not None and self.dim == self.expected_dim

    def coordinates(self, f, check=True):
        """Coordinates of f (a QExpansion over QQ) in the basis."""
        if f.prec <= max(self.pivots, default=-1):
            raise ValueError("form precision below the pivot columns")
        x = [Fraction(f.coeffs[c]) for c in self.pivots]
        if check:
            Q = min(f.prec, self.prec)
            for n in range(Q):
                s = sum(xi * b.coeffs[n] for xi, b in zip(x, self.basis) if xi)
                if s != f.coeffs[n]:
                    raise InconsistentSpanError("form is not in the span (coefficient %d)" % n)
        return x

    def contains(self, f):
        try:
            self.coordinates(f)
            return True
        except InconsistentSpanError:
            return False

    def combination(self, x, Q=None):
        """The q-expansion sum x_i b_i (rational coordinates)."""
        Q = Q or self.prec
        out = [Fraction(0)] * Q
        for xi, b in zip(x, self.basis):
            if xi:
                for n in range(Q):
                    c = b.coeffs[n]
                    if c:
                        out[n] += xi * c
        return QExpansion(out, QQ, Q)

    def cusp_subspace_dim(self):
        """Dimension of the subspace vanishing at infinity (a proxy for the cusp part)."""
        return sum(1 for c in self.pivots if c > 0)

    def extend(self, prec):
        """Raise the q-precision of the basis by re-evaluating the recipes.

        The change of basis from recipes to the echelon basis is fixed by the
        pivot columns, so the old coefficients are reproduced exactly.
        """
        from .linalg import mat_inverse, rational_mat_mul
        if prec <= self.prec:
            return self
        R = [evaluate_recipe(r, prec, {}).coeffs for r in self.recipes]
        A = [[Fraction(row[c]) for c in self.pivots] for row in R]
        T = mat_inverse(A)
        # T A = I means T R reproduces the basis at the pivots
        # (rows of the inverse follow the pivot order)
        new = rational_mat_mul(T, R)
        for b, nb in zip(self.basis, new):
            if any(Fraction(x) != y for x, y in zip(b.coeffs, nb)):
                raise InconsistentSpanError("extended basis disagrees with the stored one")
        self.basis = [QExpansion._raw(list(b), QQ) for b in new]
        self.prec = prec
        return self

    def hecke_matrix(self, ell, auto_extend=False):
        """Matrix M with T_ell(b_i) = sum_j M[i][j] b_j (U_ell when ell | N).

        With auto_extend the basis precision is raised to ell * sturm first."""
        if ell in self._hecke:
            return self._hecke[ell]
        if self.prec // ell < self.sturm:
            if auto_extend:
                self.extend(ell * self.sturm)
            else:
                raise ValueError("insufficient precision for T_%d: need %d, have %d"
                                 % (ell, ell * self.sturm, self.prec))
        rows = []
        for b in self.basis:
            if self.level % ell == 0:
                img = u_op(b, ell)
            else:
                img = hecke_t(b, ell, self.weight)
            img = img.truncate(self.prec // ell)
            rows.append(self.coordinates(img))
        self._hecke[ell] = rows
        return rows

    def to_dict(self):
        return {"level": self.level, "weight": self.weight,
                "character": self.character.to_dict(),
                "recipes": [recipe_to_json(r) for r in self.recipes],
                "sturm": self.sturm, "prec": self.prec, "dim": self.dim,
                "expected_dim": self.expected_dim, "certified": self.certified,
                "lattice_prime": self.lattice_prime, "seed": self.seed}

    def __repr__(self):
        return "ModFormSpace(N=%d, w=%d, dim=%d%s)" % (
            self.level, self.weight, self.dim, ", certified" if self.certified else "")


def recipe_to_json(r):
    if r[0] == "prod":
        return ["prod"] + [recipe_to_json(x) for x in r[1:]]
    if r[0] == "eta":
        return ["eta", [list(x) for x in r[1]]]
    if r[0] == "V":
        return ["V", r[1], recipe_to_json(r[2])]
    return list(r)


def recipe_from_json(r):
    if r[0] == "prod":
        return ("prod",) + tuple(recipe_from_json(x) for x in r[1:])
    if r[0] == "eta":
        return ("eta", tuple(tuple(x) for x in r[1]))
    if r[0] == "V":
        return ("V", r[1], recipe_from_json(r[2]))
    return tuple(r)


def build_space(level, weight, character=None, B=None, prec=None, expected_dim="auto",
                lattice_prime=None, extra=(), sturm_margin=STURM_MARGIN, seed=0):
    """Greedy span of M_weight(Gamma_0(level)).

    Candidates (Eisenstein products, eta quotients and V-shifts) are added
    while the rank modulo a large prime grows; the search stops once the
    expected dimension is reached.  ``extra`` recipes are tried first.
    Returns a ModFormSpace whose ``certified`` flag records whether the
    expected dimension was reached.
    """
    if weight < 2:
        raise ValueError("weight must be >= 2")
    if character is not None and not character.is_trivial():
        raise NotImplementedError("only the trivial character is supported")
    need = sturm_bound(level, weight, sturm_margin)
    if B is None:
        B = need
    elif B < need - sturm_margin:
        raise ValueError("B=%d is below the Sturm bound %d" % (B, need - sturm_margin))
    if prec is None:
        prec = 2 * B
    prec = max(prec, B)
    if expected_dim == "auto":
        expected_dim = dim_modular_forms(level, weight) if weight % 2 == 0 else 0
    cache = {}
    ech = _ModEchelon()
    chosen = []
    stream = list(extra) + [r for r in candidate_recipes(level, weight)]
    if seed:
        import random
        rnd = random.Random(seed)
        rnd.shuffle(stream)
    for r in stream:
        if expected_dim is not None and ech.rank() >= expected_dim:
            break
        if recipe_weight(r) != weight or level % recipe_level(r):
            continue
        f = evaluate_recipe(r, B, cache)
        if ech.add(f.coeffs):
            chosen.append(r)
    if expected_dim is not None and len(chosen) < expected_dim:
        warnings.warn("span stalled at rank %d below expected dimension %d"
                      % (len(chosen), expected_dim))
    full = [evaluate_recipe(r, prec, {}).coeffs for r in chosen]
    basis, pivots, dropped = echelon_basis(full, B, lattice_prime)
    if dropped:
        raise InconsistentSpanError("rank modulo the large prime disagrees with rank over Q")
    return ModFormSpace(level, weight, chosen, basis, pivots, B, prec, character,
                        expected_dim, lattice_prime, seed)


def hecke_matrix(sp, ell):
    return sp.hecke_matrix(ell)


def matrices_commute(A, B):
    from .linalg import mat_mul
    return mat_mul(A, B) == mat_mul(B, A)


# --------------------------------------------------------------- Newform

def _field_elt(poly, coords):
    return PolyQuotientElement(poly, [as_rational(c) for c in coords])


class Newform:
    """Hecke eigenform data: prime eigenvalues in Q[x]/(field_poly)."""

    def __init__(self, level, weight, ap, field_poly=(0, 1), character=None,
                 source="", embedding=None, constant=0):
        self.level = level
        self.weight = weight
        self.character = character or DirichletCharacter.trivial(level)
        self.field_poly = tuple(as_rational(c) for c in field_poly)
        self.ap = {}
        for ell, v in ap.items():
            if not isinstance(v, PolyQuotientElement):
                v = _field_elt(self.field_poly, [v])
            self.ap[int(ell)] = v
        self.source = source
        self.embedding = embedding
        self.constant = constant
        self._an = None

    @property
    def k(self):
        return self.weight - 2

    @property
    def degree(self):
        return len(self.field_poly) - 1

    @property
    def is_rational(self):
        return self.degree == 1

    def field(self, coords):
        return _field_elt(self.field_poly, coords)

    def eps(self, ell):
        """eps(ell) as an integer (the character must be at most quadratic)."""
        return self.character.value_int(ell)

    def hecke_constant(self, ell):
        """eps(ell) ell^(w-1), the constant term of the Hecke polynomial."""
        return self.eps(ell) * ell ** (self.weight - 1)

    def extend(self, n_max):
        return extend_coefficients(self, n_max)

    def qexp(self, Q):
        """q-expansion over QQ or over the coefficient field."""
        gen = getattr(self, "generator", None)
        if gen is not None and Q - 1 > max(self.ap):
            return gen(Q)
        an = extend_coefficients(self, Q - 1)
        if self.is_rational:
            cs = [self.constant] + [a.rational_part() for a in an]
            return QExpansion(cs, QQ, Q)
        ring = QuotientRing(self.field_poly)
        cs = [ring.coerce(self.constant)] + an
        return QExpansion(cs, ring, Q)

    def rational_ap(self, ell):
        return self.ap[ell].rational_part()

    def with_embedding(self, p, M, choice=0):
        """Record the p-adic embedding x -> (choice-th root of field_poly mod p) lifted."""
        if self.is_rational:
            emb = (p, M, 0)
        else:
            poly = [int(c) for c in self.field_poly]
            roots = poly_roots_mod_p(poly, p)
            if len(roots) <= choice:
                raise ValueError("coefficient field has too few roots modulo %d" % p)
            emb = (p, M, hensel_lift_root(poly, roots[choice], p, M))
        nf = Newform(self.level, self.weight, self.ap, self.field_poly, self.character,
                     self.source, emb, self.constant)
        return nf

    def padic_ap(self, ell, p=None, M=None):
        """a_ell as a PadicNum through the recorded embedding."""
        if self.embedding is None:
            if p is None:
                raise ValueError("no p-adic embedding recorded")
            nf = self.with_embedding(p, M)
        else:
            nf = self
        p, M, root = nf.embedding
        return embed_element(nf.ap[ell], p, M, root)

    def padic_qexp(self, Q, p=None, M=None):
        """q-expansion over Z/p^M through the embedding."""
        nf = self if self.embedding is not None else self.with_embedding(p, M)
        p, M, root = nf.embedding
        an = extend_coefficients(nf, Q - 1)
        mod = p ** M
        cs = [Fraction(self.constant)] + [embed_element(a, p, M, root).value for a in an]
        return QExpansion(cs, ZmodRing(mod), Q)

    def to_dict(self):
        return export_newform(self)

    def __repr__(self):
        return "Newform(N=%d, w=%d, field=%s, %s)" % (
            self.level, self.weight, [str(c) for c in self.field_poly], self.source)


def _spf_table(n):
    spf = list(range(n + 1))
    for i in range(2, isqrt(n) + 1):
        if spf[i] == i:
            for j in range(i * i, n + 1, i):
                if spf[j] == j:
                    spf[j] = i
    return spf


def extend_coefficients(nf, n_max):
    """a_1 .. a_{n_max} by multiplicativity and the prime-power recursion."""
    if n_max < 1:
        return []
    spf = _spf_table(n_max)
    one = nf.field([1])
    a = [None, one]
    ppow = {}
    for n in range(2, n_max + 1):
        ell = spf[n]
        m, r = n, 0
        while m % ell == 0:
            m //= ell
            r += 1
        if m > 1:
            a.append(a[m] * a[n // m])
            continue
        if ell not in nf.ap:
            raise KeyError("missing eigenvalue a_%d" % ell)
        if r == 1:
            a.append(nf.ap[ell])
        else:
            c = nf.hecke_constant(ell) if nf.level % ell else 0
            a.append(nf.ap[ell] * a[n // ell] - a[n // ell ** 2] * c)
    return a[1:]


def newform_from_qexp(level, weight, f, source="", n_primes=None):
    """Newform data read off a rational normalized eigenform expansion."""
    if f.coeffs[1] != 1:
        raise ValueError("expansion is not normalized (a_1 != 1)")
    top = f.prec - 1 if n_primes is None else n_primes
    ap = {ell: f.coeffs[ell] for ell in primes_up_to(top)}
    return Newform(level, weight, ap, source=source, constant=f.coeffs[0])


def check_against_qexp(nf, f):
    """True when the recursion reproduces all supplied coefficients."""
    an = extend_coefficients(nf, f.prec - 1)
    return all(x == y for x, y in zip([a for a in an],
                                      [nf.field([c]) for c in f.coeffs[1:]]))


# --------------------------------------------------------- eigenforms

def _sympy_factor(poly):
    """Irreducible monic factors over Q with multiplicities."""
    import sympy
    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x ** i
               for i, c in enumerate(Fraction(c) for c in poly))
    _, facs = sympy.factor_list(expr, x)
    out = []
    for fac, mult in facs:
        cs = sympy.Poly(fac, x).all_coeffs()[::-1]
        lead = cs[-1]
        cs = [Fraction(int(sympy.numer(c / lead)), int(sympy.denom(c / lead))) for c in cs]
        out.append((tuple(cs), mult))
    out.sort(key=lambda t: (len(t[0]), [str(c) for c in t[0]]))
    return out


def _combined_matrix(mats, weights):
    n = len(mats[0])
    T = [[Fraction(0)] * n for _ in range(n)]
    for M, c in zip(mats, weights):
        for i in range(n):
            for j in range(n):
                if M[i][j]:
                    T[i][j] += c * M[i][j]
    return T


def eigenforms(sp, probes, Q=None, combos=((1, 2, 3, 5, 7, 11, 13),), simple_only=False):
    """Simultaneous eigenvectors of the probe Hecke matrices, normalized to a_1 = 1.

    Each eigenline over its coefficient field K = Q[x]/(h) becomes a Newform
    whose field polynomial is h.  Raises SeparationError when a repeated
    factor survives the probe combination, unless simple_only is set, in
    which case repeated factors (old systems) are skipped.
    """
    mats = [sp.hecke_matrix(ell) for ell in probes]
    for i in range(len(mats)):
        for j in range(i):
            if not matrices_commute(mats[i], mats[j]):
                raise InconsistentSpanError("probe matrices do not commute")
    if sp.dim == 0:
        return []
    Q = Q or sp.prec
    last_err = None
    for weights in combos:
        T = _combined_matrix(mats, weights[:len(mats)])
        factors = _sympy_factor(charpoly(T))
        if simple_only:
            factors = [(h, m) for h, m in factors if m == 1]
        if any(m > 1 for _, m in factors):
            last_err = SeparationError("repeated factor in the probe char poly")
            continue
        out = []
        for h, _ in factors:
            out.append(_eigenline(sp, T, h, Q))
        return out
    raise last_err


def _eigenline(sp, T, h, Q):
    """Eigenform attached to an irreducible factor h of char(T)."""
    n = sp.dim
    x = PolyQuotientElement(h, [0, 1]) if len(h) > 2 else None
    if x is None:
        theta = -h[0]
        A = [[Fraction(T[j][i]) - (theta if i == j else 0) for j in range(n)] for i in range(n)]
        ker = nullspace(A)
        v = ker[0]
    else:
        A = [[PolyQuotientElement(h, [T[j][i]]) - (x if i == j else 0) for j in range(n)]
             for i in range(n)]
        ker = nullspace(A)
        v = ker[0]
    # f = sum v_i b_i
    if x is None:
        f = sp.combination(v, Q)
        a1 = f.coeffs[1]
        if a1 == 0:
            raise SeparationError("eigenvector has a_1 = 0")
        f = f.scale(Fraction(1) / Fraction(a1))
        lim = Q - 1
        ap = {ell: f.coeffs[ell] for ell in primes_up_to(lim)}
        nf = Newform(sp.level, sp.weight, ap, source="eigenforms(N=%d,w=%d)" % (sp.level, sp.weight),
                     constant=f.coeffs[0])
        nf.qexpansion = f
        return nf
    zero = PolyQuotientElement(h, [0])
    coeffs = [zero] * Q
    for vi, b in zip(v, sp.basis):
        if vi:
            for m in range(Q):
                c = b.coeffs[m]
                if c:
                    coeffs[m] = coeffs[m] + vi * c
    a1 = coeffs[1]
    if not a1:
        raise SeparationError("eigenvector has a_1 = 0")
    inv = a1.inverse()
    coeffs = [c * inv for c in coeffs]
    ap = {ell: coeffs[ell] for ell in primes_up_to(Q - 1)}
    nf = Newform(sp.level, sp.weight, ap, field_poly=h,
                 source="eigenforms(N=%d,w=%d)" % (sp.level, sp.weight))
    nf.constant = coeffs[0].rational_part() if coeffs[0].is_rational() else 0
    nf.qexpansion = QExpansion(coeffs, QuotientRing(h), Q)
    return nf


# ------------------------------------------------------- p-stabilization

def hecke_roots(nf, p, M):
    """(alpha, beta) at p: alpha the unit root, beta = eps(p) p^(w-1) / alpha."""
    ap = nf.padic_ap(p, p, M)
    c = nf.hecke_constant(p)
    alpha = hensel_unit_root(ap, PadicNum.from_rational(c, p, M), M)
    beta = PadicNum.from_rational(c, p, M) / alpha
    return alpha, beta


def p_stabilize(nf, p, alpha, Q):
    """f_alpha = f(q) - beta f(q^p), with beta = eps(p) p^(w-1) / alpha."""
    if nf.level % p == 0:
        raise ValueError("p divides the level")
    M = alpha.M
    c = PadicNum.from_rational(nf.hecke_constant(p), p, M)
    ap = nf.padic_ap(p, p, M)
    if not (alpha * alpha - ap * alpha + c).is_zero():
        raise ValueError("alpha is not a root of the Hecke polynomial")
    beta = c / alpha
    if beta.valuation_floor < 0:
        raise NonOrdinaryError("beta is not integral")
    f = nf.padic_qexp(Q, p, M)
    mod = p ** M
    b = beta.lift()
    b = b.numerator * pow(b.denominator, -1, mod) % mod
    g = v_op(f, p).truncate(Q)
    return QExpansion._raw([(x - b * y) % mod for x, y in zip(f.coeffs, g.coeffs)], f.ring)


def euler_factors(f, g, p, s, M):
    """(E(f), E*(f), E(f,g,s)) as PadicNums.

    E(f,g,s) is evaluated in the form symmetric in the roots of g, so only
    a_p(g) and eps_g(p) p^(w_g - 1) are needed.
    """
    alpha, beta = hecke_roots(f, p, M)
    one = PadicNum.from_rational(1, p, M)
    ag = g.padic_ap(p, p, M)
    # powers of p are combined exactly before embedding
    cf = f.hecke_constant(p)
    E = one - PadicNum.from_rational(Fraction(cf, p), p, M) / (alpha * alpha)
    Estar = one - PadicNum.from_rational(cf, p, M) / (alpha * alpha)
    cgr = g.hecke_constant(p)
    r1 = PadicNum.from_rational(Fraction(p) ** (s - 1) / cgr, p, M)
    r2 = PadicNum.from_rational(Fraction(p) ** (2 * s - 2) / cgr, p, M)
    r3 = PadicNum.from_rational(Fraction(cf) / Fraction(p) ** s, p, M)
    r4 = PadicNum.from_rational(Fraction(cf) ** 2 * cgr / Fraction(p) ** (2 * s), p, M)
    first = one - r1 * ag / alpha + r2 / (alpha * alpha)
    second = one - r3 * ag / alpha + r4 / (alpha * alpha)
    return E, Estar, first * second


# ---------------------------------------------------------- ingestion

def export_newform(nf, n_check=0):
    doc = {"level": nf.level, "weight": nf.weight,
           "character": nf.character.to_dict(),
           "field_poly": [str(c) for c in nf.field_poly],
           "ap": [[ell, nf.ap[ell].to_list()] for ell in sorted(nf.ap)],
           "source": nf.source}
    if n_check:
        doc["an"] = [[n, a.to_list()] for n, a in enumerate(extend_coefficients(nf, n_check), 1)]
    return doc


_SCHEMA_KEYS = {"level": int, "weight": int, "character": dict, "field_poly": list,
                "ap": list, "source": str}


def ingest_newform(doc):
    """Validate a Newform document and spot-check any supplied a_n."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    for key, typ in _SCHEMA_KEYS.items():
        if key not in doc:
            raise ValueError("schema violation: missing %r" % key)
        if not isinstance(doc[key], typ):
            raise ValueError("schema violation: %r has wrong type" % key)
    ch = doc["character"]
    if "modulus" not in ch or "gen_images" not in ch:
        raise ValueError("schema violation: character needs modulus and gen_images")
    if doc["level"] % ch["modulus"]:
        raise ValueError("character modulus must divide the level")
    chi = DirichletCharacter.from_gen_images(ch["modulus"], ch["gen_images"])
    if ch["modulus"] != doc["level"]:
        chi = chi.extend(doc["level"])
    poly = [as_rational(c) for c in doc["field_poly"]]
    if poly[-1] != 1:
        raise ValueError("schema violation: field polynomial must be monic")
    ap = {}
    for item in doc["ap"]:
        ell, coords = item
        if not is_prime(int(ell)):
            raise ValueError("schema violation: %r is not prime" % ell)
        ap[int(ell)] = _field_elt(poly, coords)
    nf = Newform(doc["level"], doc["weight"], ap, poly, chi, doc["source"])
    if "an" in doc:
        n_max = max(int(n) for n, _ in doc["an"])
        an = extend_coefficients(nf, n_max)
        for n, coords in doc["an"]:
            if an[int(n) - 1] != _field_elt(poly, coords):
                raise ValueError("a_%s disagrees with the Hecke recursion" % n)
    return nf


# ------------------------------------------------------------ fixtures

FIXTURE_ETA = {
    "delta": (1, 12, {1: 24}),
    "11a": (11, 2, {1: 2, 11: 2}),
    "5k4": (5, 4, {1: 4, 5: 4}),
    "14a": (14, 2, {1: 1, 2: 1, 7: 1, 14: 1}),
}

# rational newforms without an eta-product model: (level, weight, probes, a_ell)
FIXTURE_EIGEN = {
    "14k8": (14, 8, (3, 5), {3: -82, 5: 448}),
}

_eigen_cache = {}


def _eigen_fixture(name, Q):
    level, weight, probes, key = FIXTURE_EIGEN[name]
    hit = _eigen_cache.get(name)
    if hit is not None and hit.prec >= Q:
        return hit.truncate(Q)
    B = sturm_bound(level, weight)
    sp = build_space(level, weight, prec=max(Q, max(probes) * B))
    for e in eigenforms(sp, probes, sp.prec, simple_only=True):
        if len(e.field_poly) == 2 and all(e.qexpansion.coeffs[l] == v for l, v in key.items()):
            _eigen_cache[name] = e.qexpansion
            return e.qexpansion.truncate(Q)
    raise KeyError("no eigenform matches fixture %r" % name)


def fixture_qexp(name, Q):
    """Independent generator for each fixture (eta products, Eisenstein products)."""
    if name in FIXTURE_ETA:
        return eta_quotient(FIXTURE_ETA[name][2], Q)
    if name in FIXTURE_EIGEN:
        return _eigen_fixture(name, Q)
    if name == "delta_e4":
        return evaluate_recipe(("eta", ((1, 24),)), Q) * _normalized_e(4, Q)
    if name == "delta_e10":
        return evaluate_recipe(("eta", ((1, 24),)), Q) * _normalized_e(10, Q)
    raise KeyError("unknown fixture %r" % name)


FIXTURE_META = {
    "delta": (1, 12),
    "11a": (11, 2),
    "5k4": (5, 4),
    "delta_e4": (1, 16),
    "delta_e10": (1, 22),
    "14a": (14, 2),
    "14k8": (14, 8),
}


def _normalized_e(a, Q):
    from .eisenstein import eis_level_one
    return eis_level_one(a, Q)


def fixture(name, n_primes=200):
    """Newform fixture with prime eigenvalues up to n_primes."""
    if name not in FIXTURE_META:
        raise KeyError("unknown fixture %r" % name)
    level, weight = FIXTURE_META[name]
    f = fixture_qexp(name, n_primes + 1)
    nf = newform_from_qexp(level, weight, f, source="fixture:%s" % name)
    nf.generator = lambda Q: fixture_qexp(name, Q)
    return nf


def load_newform(ref, n_primes=200):
    """A fixture name or a path to a Newform JSON document."""
    if ref in FIXTURE_META:
        return fixture(ref, n_primes)
    with open(ref) as fh:
        return ingest_newform(json.load(fh))
