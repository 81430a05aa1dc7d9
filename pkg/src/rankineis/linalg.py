"""Dense matrices as lists of rows, over an exact field or modulo m.

Field entries only need + - * / and truth testing, so Fractions and
PolyQuotientElement values both work.
"""

from fractions import Fraction


def identity(n, one=1, zero=0):
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def transpose(A):
    return [list(r) for r in zip(*A)] if A else []


def mat_mul(A, B, mod=None):
    Bt = transpose(B)
    out = []
    for row in A:
        nz = [(k, a) for k, a in enumerate(row) if a]
        r = []
        for col in Bt:
            s = 0
            for k, a in nz:
                b = col[k]
                if b:
                    s += a * b
            r.append(s % mod if mod else s)
        out.append(r)
    return out


def mat_add(A, B, mod=None):
    if mod:
        return [[(a + b) % mod for a, b in zip(r, s)] for r, s in zip(A, B)]
    return [[a + b for a, b in zip(r, s)] for r, s in zip(A, B)]


def mat_scale(A, c, mod=None):
    if mod:
        return [[a * c % mod for a in r] for r in A]
    return [[a * c for a in r] for r in A]


def mat_vec(A, v, mod=None):
    out = []
    for row in A:
        s = sum(a * x for a, x in zip(row, v) if a and x)
        out.append(s % mod if mod else s)
    return out


def vec_mat(v, A, mod=None):
    return mat_vec(transpose(A), v, mod)


def mat_reduce(A, mod):
    """Entrywise image in Z/mod of a matrix of p-integral rationals."""
    out = []
    for r in A:
        row = []
        for a in r:
            a = Fraction(a)
            row.append(a.numerator * pow(a.denominator, -1, mod) % mod)
        out.append(row)
    return out


def mat_pow(A, e, mod=None):
    n = len(A)
    R = identity(n)
    while e:
        if e & 1:
            R = mat_mul(R, A, mod)
        A = mat_mul(A, A, mod)
        e >>= 1
    return R


def poly_of_matrix(coeffs, A, mod=None):
    """sum c_i A^i by Horner (coefficients lowest degree first)."""
    n = len(A)
    R = [[0] * n for _ in range(n)]
    for c in reversed(coeffs):
        R = mat_mul(R, A, mod)
        for i in range(n):
            R[i][i] = (R[i][i] + c) % mod if mod else R[i][i] + c
    return R


def charpoly(A):
    """Characteristic polynomial det(X - A) over a field, lowest degree first.

    Reduction to Hessenberg form followed by the usual recurrence.
    """
    n = len(A)
    if n == 0:
        return [1]
    H = [list(r) for r in A]
    for m in range(1, n - 1):
        i = next((i for i in range(m, n) if H[i][m - 1]), None)
        if i is None:
            continue
        if i != m:
            H[i], H[m] = H[m], H[i]
            for r in H:
                r[i], r[m] = r[m], r[i]
        piv = H[m][m - 1]
        for i in range(m + 1, n):
            u = H[i][m - 1] / piv
            if not u:
                continue
            for j in range(n):
                H[i][j] = H[i][j] - u * H[m][j]
            for r in H:
                r[m] = r[m] + u * r[i]
    # p_0 = 1; p_{m} = (X - h_mm) p_{m-1} - sum ...
    polys = [[1]]
    for m in range(n):
        pm = [0] + list(polys[m])
        for k in range(len(polys[m])):
            pm[k] = pm[k] - H[m][m] * polys[m][k]
        t = 1
        for i in range(m - 1, -1, -1):
            t = t * H[i + 1][i]
            c = t * H[i][m]
            if c:
                for k in range(len(polys[i])):
                    pm[k] = pm[k] - c * polys[i][k]
        polys.append(pm)
    return polys[n]


def nullspace(A):
    """Basis of {x : A x = 0} over a field."""
    rows = [list(r) for r in A]
    if not rows:
        return []
    n = len(rows[0])
    pivots = []
    r = 0
    for c in range(n):
        i = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if i is None:
            continue
        rows[r], rows[i] = rows[i], rows[r]
        inv = 1 / rows[r][c] if not hasattr(rows[r][c], "inverse") else rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                u = rows[i][c]
                rows[i] = [x - u * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        zero = rows[0][0] * 0
        v = [zero] * n
        v[f] = zero + 1
        for i, c in enumerate(pivots):
            v[c] = -rows[i][f]
        basis.append(v)
    return basis


def rank_mod(rows, mod):
    """Rank modulo a prime."""
    rows = [[x % mod for x in r] for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        i = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if i is None:
            continue
        rows[rank], rows[i] = rows[i], rows[rank]
        inv = pow(rows[rank][c], -1, mod)
        piv = [x * inv % mod for x in rows[rank]]
        rows[rank] = piv
        for i in range(rank + 1, len(rows)):
            u = rows[i][c]
            if u:
                rows[i] = [(x - u * y) % mod for x, y in zip(rows[i], piv)]
        rank += 1
    return rank


def mat_inverse(A):
    """Inverse over a field by Gauss-Jordan elimination."""
    n = len(A)
    M = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(A)]
    for c in range(n):
        i = next((i for i in range(c, n) if M[i][c]), None)
        if i is None:
            raise ZeroDivisionError("matrix is singular")
        M[c], M[i] = M[i], M[c]
        inv = 1 / Fraction(M[c][c])
        M[c] = [x * inv for x in M[c]]
        for i in range(n):
            if i != c and M[i][c]:
                u = M[i][c]
                M[i] = [x - u * y for x, y in zip(M[i], M[c])]
    return [r[n:] for r in M]


def rational_mat_mul(A, B):
    """Product of rational matrices via integer arithmetic on scaled rows."""
    from math import lcm
    Bi, bden = [], []
    for r in B:
        d = 1
        for x in r:
            d = lcm(d, Fraction(x).denominator)
        bden.append(d)
        Bi.append([int(Fraction(x) * d) for x in r])
    out = []
    for row in A:
        den = 1
        terms = []
        for k, a in enumerate(row):
            a = Fraction(a)
            if a:
                terms.append((k, a))
                den = lcm(den, a.denominator * bden[k])
        acc = [0] * (len(B[0]) if B else 0)
        for k, a in terms:
            m = a.numerator * (den // (a.denominator * bden[k]))
            acc = [s + m * x for s, x in zip(acc, Bi[k])]
        out.append([Fraction(s, den) for s in acc])
    return out
