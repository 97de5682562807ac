# coding: utf-8
"""
Verma modules of SVir_{q,k}: basis enumeration, character multiplicities,
Gram matrices, Kac determinants, the conjectured product formulas, singular
vectors, and the screening-degree (d_0) vanishing-line predictor.

Determinant factor conventions:

  f(r,s; u,v) = u^4 (q-q^{-1})^4
                (q^{1-r+(k+2)s} v - q^{-1+r-(k+2)s} v^{-1})
                (q^{-1-r+(k+2)s} v^{-1} - q^{1+r-(k+2)s} v)

  g(l; u,v)   = (-u/(q-q^{-1})^2)
                (q^{(l+1)/2} (uv)^{1/2} - q^{-(l+1)/2} (uv)^{-1/2})
                (q^{(l-1)/2} (u/v)^{1/2} - q^{-(l-1)/2} (u/v)^{-1/2})

with l an odd integer.  The conjectures:

  det^NS_{n,j} = cst * prod_{1<=rs<=n} f(r,s)^{P^NS(n-rs, j)}
                     * prod_{l in Z+1/2} g(2l)^{Ptilde^NS(n-|l|, j-sgn l; l)}
  det^R_{n,j}  = cst * prod f(r,s)^{P^R(n-rs, j)}
                     * prod_{l in Z} g(2l-1)^{Ptilde^R(n-|l|, j-sgn l; l)}

where in the R sector sgn(0) = -1.
"""

import math
from fractions import Fraction

from .ratfun import RatFun, ZERO, ONE, U, V, qpow, _FIELD
from .algebra import Context, h_param, HALF, QMQI

__all__ = [
    "NotSingular", "f_factor", "g_factor", "enumerate_basis", "multiplicity",
    "make_context", "gram_matrix", "bareiss_det", "gauss_det",
    "kac_determinant",
    "conjecture_product", "verify_conjecture", "singular_vector",
    "singular_binding", "is_laurent", "d0", "d0_identities_hold",
    "vanishing_lines_predicted",
]


class NotSingular(ValueError):
    pass


# ---------------------------------------------------------------- factors

def f_factor(r, s, u=U, v=V):
    t1 = qpow(1 - r + 2 * s, s) * v - qpow(-1 + r - 2 * s, -s) / v
    t2 = qpow(-1 - r + 2 * s, s) / v - qpow(1 + r - 2 * s, -s) * v
    return u ** 4 * QMQI ** 4 * t1 * t2


def g_factor(l, u=U, v=V):
    l = Fraction(l)
    if l.denominator != 1 or int(l) % 2 == 0:
        raise ValueError("g takes an odd integer argument")
    a = (l + 1) / 2
    b = (l - 1) / 2
    t1 = RatFun.monomial(1, a, 0, HALF, HALF) \
        - RatFun.monomial(1, -a, 0, -HALF, -HALF)
    t2 = RatFun.monomial(1, b, 0, HALF, -HALF) \
        - RatFun.monomial(1, -b, 0, -HALF, HALF)
    return (-u / QMQI ** 2) * t1 * t2


# ---------------------------------------------------------------- bases

def _partitions(n, maxpart=None):
    """Weakly decreasing positive integer partitions of n."""
    if n == 0:
        yield ()
        return
    if maxpart is None or maxpart > n:
        maxpart = n
    for head in range(maxpart, 0, -1):
        for tail in _partitions(n - head, head):
            yield (head,) + tail


def _strict_partitions(total2, max2):
    """Strictly decreasing partitions with parts from the doubled set
    {max2, max2-2, ...} of positive (or zero, if max2 allows) half-integers;
    totals and parts carried doubled."""
    # parts are doubled values max2, max2-2, ..., down to the lattice minimum
    def rec(t2, m2):
        if t2 == 0:
            yield ()
            return
        p2 = min(m2, t2)
        # align p2 with the lattice of m2 (same parity)
        if (p2 - m2) % 2 != 0:
            p2 -= 1
        while p2 >= 1:
            for tail in rec(t2 - p2, p2 - 2):
                yield (p2,) + tail
            p2 -= 2
        return
    return rec(total2, max2)


def _fermi_parts(sector, n, kind):
    """Strictly decreasing partitions (as tuples of Fractions) with parts in
    the sector's creation lattice for G^+ (kind='al') or G^- (kind='be'),
    with total n.  NS: parts in {1/2, 3/2, ...}.  R: G^+ parts in {1, 2, ...},
    G^- parts in {0, 1, 2, ...} (at most one zero by strictness)."""
    n2 = int(Fraction(n) * 2)
    out = []
    if sector == "NS":
        m2 = n2 if n2 % 2 == 1 else n2 - 1
        for p in _strict_partitions(n2, max(m2, 1 if n2 else 0)):
            out.append(tuple(Fraction(x, 2) for x in p))
        if n2 == 0:
            out = [()]
    else:
        for p in _strict_partitions(n2, n2 - n2 % 2):
            if all(x % 2 == 0 for x in p):
                out.append(tuple(Fraction(x, 2) for x in p))
        if n2 == 0:
            out = [()]
        if kind == "be" and n2 % 2 == 0:
            # a trailing zero part costs nothing but shifts the charge
            extra = []
            for p in out:
                if not p or p[-1] > 0:
                    extra.append(p + (Fraction(0),))
            out = out + extra
    # dedupe (the zero-total corner cases above can overlap)
    seen, uniq = set(), []
    for p in out:
        if p not in seen:
            seen.add(p)
            uniq.append(p)
    return uniq


def enumerate_basis(sector, n, j, dual=False):
    """All PBW indices of bidegree (n, j), in descending lexicographic order
    on (lambda, mu, alpha, beta).  The dual basis is indexed identically."""
    n = Fraction(n)
    if n < 0:
        return []
    out = []
    n2 = int(2 * n)
    for a2 in range(0, n2 + 1, 2):            # |lambda| doubled
        for b2 in range(0, n2 - a2 + 1, 2):   # |mu| doubled
            for lam in _partitions(a2 // 2):
                for mu in _partitions(b2 // 2):
                    rem2 = n2 - a2 - b2
                    for c2 in range(0, rem2 + 1):
                        d2 = rem2 - c2
                        for al in _fermi_parts(sector, Fraction(c2, 2), "al"):
                            for be in _fermi_parts(sector, Fraction(d2, 2), "be"):
                                if len(al) - len(be) == j:
                                    out.append((lam, mu, al, be))
    out.sort(reverse=True)
    return out


# ---------------------------------------------------------------- characters

class _Series2:
    """Truncated series in p (doubled half-integer exponents) and x."""

    def __init__(self, n2max, terms=None):
        self.n2max = n2max
        self.t = terms if terms is not None else {(0, 0): 1}

    def mul_factor(self, terms):
        """Multiply by a finite factor given as {(n2, j): int}."""
        out = {}
        for (a2, aj), ac in self.t.items():
            for (b2, bj), bc in terms.items():
                n2 = a2 + b2
                if n2 > self.n2max:
                    continue
                key = (n2, aj + bj)
                out[key] = out.get(key, 0) + ac * bc
        self.t = {k: v for k, v in out.items() if v}
        return self

    def coeff(self, n, j):
        return self.t.get((int(2 * Fraction(n)), j), 0)


def _char_series(sector, n2max, skip=None):
    """The character generating product, optionally omitting the single
    fermionic factor (1 + p^{|l|} x^{sgn l}) named by skip=(|l| doubled, sgn)."""
    s = _Series2(n2max)
    imax = n2max // 2 + 1
    for i in range(0, imax + 1):
        if sector == "NS":
            fplus = (2 * i + 1, 1)     # p^{i+1/2} x
            fminus = (2 * i + 1, -1)   # p^{i+1/2} x^{-1}
        else:
            fplus = (2 * (i + 1), 1)   # p^{i+1} x
            fminus = (2 * i, -1)       # p^{i} x^{-1}
        for (w2, sgn) in (fplus, fminus):
            if skip is not None and (w2, sgn) == skip:
                continue
            if w2 <= n2max or w2 == 0:
                s.mul_factor({(0, 0): 1, (w2, sgn): 1})
        # 1/(1-p^{i+1})^2
        geo = {(t * 2 * (i + 1), 0): 1 for t in range(0, n2max // (2 * (i + 1)) + 1)}
        s.mul_factor(geo)
        s.mul_factor(geo)
    return s


_char_cache = {}


def multiplicity(kind, n, j, l=None, n2max=24):
    """P^NS / Ptilde^NS / P^R / Ptilde^R multiplicities.
    For Ptilde, l is the half-integer (NS) or integer (R) label; sgn(0) = -1
    in the R sector."""
    n = Fraction(n)
    if n < 0:
        return 0
    sector = "NS" if kind.endswith("NS") else "R"
    if kind in ("P^NS", "P^R"):
        key = (sector, None, n2max)
    else:
        l = Fraction(l)
        if sector == "NS":
            sgn = 1 if l > 0 else -1
        else:
            sgn = 1 if l > 0 else -1   # sgn(0) = -1
        key = (sector, (int(2 * abs(l)), sgn), n2max)
    if key not in _char_cache:
        _char_cache[key] = _char_series(sector, n2max, skip=key[1])
    return _char_cache[key].coeff(n, j)


# ---------------------------------------------------------------- Gram

def make_context(sector, spec=None):
    """Context with h = h(u,v) and an optional specialization.  spec may bind
    q, Q, u, v to RatFuns/integers; bindings are pushed into the highest
    weight and into every structure constant."""
    spec = dict(spec or {})
    cspec = {k: spec[k] for k in ("q", "Q") if k in spec}
    uv = {k: spec[k] for k in ("u", "v") if k in spec}
    u_p = U.substitute(uv) if "u" in uv else U
    v_p = V.substitute(uv) if "v" in uv else V
    h_p = h_param(u_p, v_p)
    if cspec:
        u_p = u_p.substitute(cspec)
        h_p = h_p.substitute(cspec)
    return Context(sector, u=u_p, h=h_p, spec=cspec or None)


def gram_matrix(sector, n, j, spec=None, ctx=None):
    """Entry (i,j) = <basis_i | basis_j> with h pre-substituted as h(u,v)."""
    if ctx is None:
        ctx = make_context(sector, spec)
    basis = enumerate_basis(sector, n, j)
    return [[ctx.pairing(b, ctx.basis_vector(k)) for k in basis]
            for b in basis]


# ---------------------------------------------------------------- determinant

def is_laurent(r):
    """True iff r is a Laurent polynomial (denominator a pure monomial)."""
    return len(r._e.denom.terms()) == 1


def _clear_denominators(M):
    """Multiply each row by the lcm of its entry denominators; returns the
    cleared (polynomial) matrix and the product of the multipliers."""
    cleared, mult = [], ONE
    for row in M:
        lcm = None
        for r in row:
            d = r._e.denom
            lcm = d if lcm is None else lcm.lcm(d)
        m = RatFun(_FIELD.new(lcm, _FIELD.ring.one))
        cleared.append([r * m for r in row])
        mult = mult * m
    return cleared, mult


def bareiss_det(M):
    """Exact determinant by fraction-free (Bareiss) elimination after row
    denominator clearing.  Gaussian elimination over the fraction field
    (gauss_det) keeps intermediate entries gcd-reduced and is usually much
    faster here; this one is kept as an independent cross-check."""
    n = len(M)
    if n == 0:
        return ONE
    A, mult = _clear_denominators(M)
    sign = 1
    prev = ONE
    for i in range(n - 1):
        if A[i][i].is_zero():
            piv = next((r for r in range(i + 1, n) if not A[r][i].is_zero()),
                       None)
            if piv is None:
                return ZERO
            A[i], A[piv] = A[piv], A[i]
            sign = -sign
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                A[r][c] = (A[r][c] * A[i][i] - A[r][i] * A[i][c]) / prev
            A[r][i] = ZERO
        prev = A[i][i]
    det = A[n - 1][n - 1]
    if sign < 0:
        det = -det
    return det / mult


def gauss_det(M):
    """Exact determinant by Gaussian elimination over the fraction field."""
    n = len(M)
    if n == 0:
        return ONE
    A = [row[:] for row in M]
    det = ONE
    sign = 1
    for i in range(n):
        if A[i][i].is_zero():
            piv = next((r for r in range(i + 1, n) if not A[r][i].is_zero()),
                       None)
            if piv is None:
                return ZERO
            A[i], A[piv] = A[piv], A[i]
            sign = -sign
        pivot = A[i][i]
        det = det * pivot
        inv = ONE / pivot
        for r in range(i + 1, n):
            if A[r][i].is_zero():
                continue
            f = A[r][i] * inv
            A[r] = [x - f * y for x, y in zip(A[r], A[i])]
    return det if sign > 0 else -det


def kac_determinant(sector, n, j, spec=None, ctx=None):
    return gauss_det(gram_matrix(sector, n, j, spec=spec, ctx=ctx))


# ---------------------------------------------------------------- conjecture

def conjecture_product(sector, n, j):
    n = Fraction(n)
    out = ONE
    pk = "P^NS" if sector == "NS" else "P^R"
    ptk = "Ptilde^NS" if sector == "NS" else "Ptilde^R"
    for r in range(1, math.floor(n) + 1):
        for s in range(1, math.floor(n / r) + 1):
            e = multiplicity(pk, n - r * s, j)
            if e:
                out = out * f_factor(r, s) ** e
    if sector == "NS":
        labels = [Fraction(t, 2) for t in range(-2 * math.floor(n + HALF) - 1,
                                                2 * math.floor(n + HALF) + 2)
                  if t % 2]
    else:
        labels = [Fraction(t) for t in range(-math.floor(n) - 1,
                                             math.floor(n) + 2)]
    for l in labels:
        if abs(l) > n:
            continue
        if sector == "NS":
            sgn = 1 if l > 0 else -1
            arg = int(2 * l)
        else:
            sgn = 1 if l > 0 else -1        # sgn(0) = -1
            arg = int(2 * l - 1)
        e = multiplicity(ptk, n - abs(l), j - sgn, l)
        if e:
            out = out * g_factor(arg) ** e
    return out


def verify_conjecture(sector, n, j, spec=None):
    """-> report dict: determinant, product, quotient, constancy verdict."""
    det = kac_determinant(sector, n, j, spec=spec)
    prod = conjecture_product(sector, n, j)
    if spec:
        prod = prod.substitute(spec)
    report = {
        "sector": sector, "n": Fraction(n), "j": j,
        "determinant": det, "product": prod, "specialization": dict(spec or {}),
    }
    if prod.is_zero():
        report["quotient"] = None
        report["ok"] = det.is_zero()
        return report
    quo = det / prod
    report["quotient"] = quo
    unbound = [x for x in ("u", "v") if not (spec and x in spec)]
    if unbound:
        report["quotientConstantInUV"] = quo.is_independent_of(unbound)
        report["ok"] = report["quotientConstantInUV"] and not quo.is_zero()
    else:
        report["quotientConstantInUV"] = True    # vacuously
        report["ok"] = not quo.is_zero()
    return report


# ---------------------------------------------------------------- singular vectors

def singular_binding(kind, *params):
    """The v-binding killing the first factor of a determinant factor:
    f(r,s): v = q^{r-1-(k+2)s};  g(l): v = q^{-(l+1)} u^{-1}."""
    if kind == "f":
        r, s = params
        return {"v": qpow(r - 1 - 2 * s, -s)}
    if kind == "g":
        (l,) = params
        return {"v": qpow(-(l + 1)) / U}
    raise ValueError(kind)


def _nullspace_vector(M):
    """One right-nullspace vector of a square RatFun matrix by Gaussian
    elimination, or None if the matrix is nonsingular."""
    n = len(M)
    A = [row[:] for row in M]
    piv_col_of_row = []
    col_used = [False] * n
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if not A[i][c].is_zero()), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        pv = A[r][c]
        A[r] = [x / pv for x in A[r]]
        for i in range(n):
            if i != r and not A[i][c].is_zero():
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        piv_col_of_row.append(c)
        col_used[c] = True
        r += 1
        if r == n:
            return None
    free = next(c for c in range(n) if not col_used[c])
    vec = [ZERO] * n
    vec[free] = ONE
    for row, c in enumerate(piv_col_of_row):
        vec[c] = -A[row][free]
    return vec


def positive_modes(sector, n):
    """All raising modes up to level n (used for annihilation checks)."""
    n = Fraction(n)
    modes = []
    m = 1
    while m <= n:
        modes.append(("K+", m))
        modes.append(("T", m))
        m += 1
    g = HALF if sector == "NS" else 1
    while g <= n:
        modes.append(("G+", g))
        modes.append(("G-", g))
        g += 1
    if sector == "R":
        modes.append(("G+", 0))
    return modes


def singular_vector(sector, n, j, binding, check=True):
    """Nullspace vector of the Gram matrix at (n, j) under the given
    v-binding, normalized to coefficient 1 on the lexicographically least
    basis index; verified annihilated by every positive mode up to n."""
    basis = enumerate_basis(sector, n, j)
    ctx = make_context(sector, binding)
    M = gram_matrix(sector, n, j, ctx=ctx)
    coeffs = _nullspace_vector(M)
    if coeffs is None:
        raise NotSingular("Gram matrix nonsingular under %r" % (binding,))
    # normalize on the lexicographically least index with nonzero coefficient
    order = sorted(range(len(basis)), key=lambda i: basis[i])
    lead = next(i for i in order if not coeffs[i].is_zero())
    coeffs = [c / coeffs[lead] for c in coeffs]
    vec = {}
    for idx, c in zip(basis, coeffs):
        if not c.is_zero():
            vec[idx] = c
    if check:
        for kind, m in positive_modes(sector, n):
            if ctx.apply_mode(kind, m, vec):
                raise NotSingular("candidate not annihilated by %s_%s"
                                  % (kind, m))
    return vec, basis, ctx


# ---------------------------------------------------------------- Appendix-style
# degree arithmetic (screening intertwiner bookkeeping) and the vanishing-line
# predictor.

def d0(xi, rho, sigma, k):
    """Degree-operator eigenvalue d_0(xi, rho, sigma) as a sympy expression."""
    return xi ** 2 / (2 * k * (k + 2)) - rho ** 2 / (4 * k) \
        + sigma * (sigma + 2) / (4 * (k + 2))


def d0_identities_hold():
    """The four d_0 shift identities, symbolically in (k, xi, rho, sigma, r, n)."""
    import sympy
    k, xi, rho, sigma, r, n = sympy.symbols("k xi rho sigma r n")
    checks = [
        # lattice spectrum
        sympy.simplify(d0(rho + (k + 2) * n, rho + 2 * n, sigma, k)
                       - d0(rho, rho, sigma, k) - n ** 2 / 2) == 0,
        sympy.simplify(d0(k / 2 + rho + (k + 2) * n, rho + 2 * n, sigma, k)
                       - d0(k / 2 + rho, rho, sigma, k) - n * (n + 1) / 2) == 0,
        # fermionic screening shifts
        sympy.simplify(d0(xi, rho, sigma, k)
                       - (-1 - (-rho + sigma) / 2
                          + d0(xi, rho + k, sigma + k + 2, k))) == 0,
        sympy.simplify(d0(xi, rho, sigma, k)
                       - (-1 - (rho + sigma) / 2
                          + d0(xi, rho - k, sigma + k + 2, k))) == 0,
        sympy.simplify(d0(xi, rho, sigma, k)
                       - ((-rho + sigma) / 2
                          + d0(xi, rho - k, sigma - k - 2, k))) == 0,
        sympy.simplify(d0(xi, rho, sigma, k)
                       - ((rho + sigma) / 2
                          + d0(xi, rho + k, sigma - k - 2, k))) == 0,
        # bosonic screening shifts
        sympy.simplify(d0(xi, rho, sigma, k)
                       - (r * (sigma - r + 1) / (k + 2)
                          + d0(xi, rho, sigma - 2 * r, k))) == 0,
        sympy.simplify(d0(xi, rho, sigma, k)
                       - (-r * (sigma + r + 1) / (k + 2)
                          + d0(xi, rho, sigma + 2 * r, k))) == 0,
    ]
    return all(checks)


def vanishing_lines_predicted(sector, max_level):
    """Predicted first occurrences of determinant factors, derived from the
    d_0 shift arithmetic: a fermionic screening between Fock modules exists
    when the degree shift -1 - (∓rho+sigma)/2 (primal) or (∓rho+sigma)/2
    (dual) is a non-negative integer m, producing the factor g(±(2m+1)); a
    bosonic screening needs v = q^{±(r-1-(k+2)s)}, producing f(r,s) at
    p-degree rs.  Returns a list of (factor, first_level, charge)."""
    max_level = Fraction(max_level)
    out = []
    m = 0
    while True:
        if sector == "NS":
            lvl = Fraction(m) + HALF      # d_0 jump m + 1/2 on the NS lattice
            firsts = [(("g", 2 * m + 1), lvl, +1), (("g", -(2 * m + 1)), lvl, -1)]
        else:
            # R sector: the two charges first appear at p-degrees m and m+1
            firsts = [(("g", 2 * m + 1), Fraction(m + 1), +1),
                      (("g", -(2 * m + 1)), Fraction(m), -1)]
        firsts = [f for f in firsts if f[1] <= max_level]
        if not firsts and m > 2 * max_level + 2:
            break
        out.extend(firsts)
        m += 1
        if m > 2 * max_level + 2:
            break
    r = 1
    while r <= max_level:
        s = 1
        while r * s <= max_level:
            out.append((("f", r, s), Fraction(r * s), 0))
            s += 1
        r += 1
    out.sort(key=lambda t: (t[1], str(t[0])))
    return out
