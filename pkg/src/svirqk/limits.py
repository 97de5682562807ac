# coding: utf-8
"""
The q -> 1 degeneration: exact truncated series in hbar under the
substitution q = e^hbar, Q = e^{k hbar}, u = e^{rho hbar}, v = e^{sigma hbar}
(coefficients are rational functions of the commuting symbols k, rho, sigma),
together with a standalone classical N=2 superconformal algebra engine used
as the limit target and as an independent low-level Kac-determinant oracle.

The deformed currents expand in non-negative powers of hbar,

    K^pm(z) = 1 + hbar K^{pm(1)}(z) + hbar^2 K^{pm(2)}(z) + O(hbar^3),
    G^pm(z) = G^{pm(0)}(z) + O(hbar),
    T(z)    = k/(k+1) + hbar (-K^{(1)}(z)/(k+1)) + hbar^2 T^{(2)}(z) + ...

with K(z) = K^-(z) K^+(z), and the classical currents sit inside the leading
coefficients:

    cG^pm(z) = sqrt(2/(k+2)) G^{pm(0)}(z),
    cI(z)    = K^{(1)}(z) / (2(k+2)),
    cL(z)    = T^{(2)}(z)/(4(k+2)) + K^{(2)}(z)/(4(k+1)(k+2))
               + k(2k+1)/(24(k+1)(k+2)),

closing the classical N=2 superconformal algebra at central charge
c = 3k/(k+2).  The limit_check catalog verifies this dictionary on concrete
matrix elements, always by exact arithmetic in Q(k, rho, sigma).
"""

from fractions import Fraction

from sympy.polys.domains import QQ
from sympy.polys.fields import field

from .ratfun import RatFun, ZERO, ONE, U, qnum
from .algebra import Context, EMPTY, HALF, h_param

__all__ = [
    "PoleAtQ1", "MismatchReport", "HbarSeries", "hbar_expand",
    "classical_apply", "classical_bracket", "classical_pairing",
    "classical_gram", "classical_kac_det", "classical_params",
    "limit_check", "LIMIT_CASE_IDS", "KF", "K_", "RHO", "SIGMA",
    "CF", "CK", "CH", "CU", "C_CENTRAL",
]


class PoleAtQ1(ArithmeticError):
    """The hbar-valuation of the denominator exceeds the numerator's."""


class MismatchReport(AssertionError):
    """A limit-catalog case failed; carries both sides serialized."""

    def __init__(self, report):
        self.report = report
        AssertionError.__init__(self, "%s: quantum %s != classical %s" % (
            report.get("case"), report.get("quantum"), report.get("classical")))


# coefficient field of the hbar-series: Q(k, rho, sigma)
KF, K_, RHO, SIGMA = field("k,rho,sigma", QQ)


def _kf_rat(x):
    """int/Fraction -> element of Q(k, rho, sigma)."""
    x = Fraction(x)
    return KF(QQ(x.numerator, x.denominator))


class HbarSeries:
    """Truncated series sum_i c_i hbar^i, exact coefficients in Q(k,rho,sigma)."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order=None):
        coeffs = tuple(coeffs)
        if order is None:
            order = len(coeffs) - 1
        if len(coeffs) != order + 1:
            raise ValueError("need order+1 coefficients")
        self.coeffs = coeffs
        self.order = order

    def __getitem__(self, i):
        return self.coeffs[i]

    def __eq__(self, other):
        if not isinstance(other, HbarSeries):
            return NotImplemented
        n = min(self.order, other.order)
        return self.coeffs[:n + 1] == other.coeffs[:n + 1]

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        n = min(self.order, other.order)
        return HbarSeries([self.coeffs[i] + other.coeffs[i]
                           for i in range(n + 1)])

    def __sub__(self, other):
        n = min(self.order, other.order)
        return HbarSeries([self.coeffs[i] - other.coeffs[i]
                           for i in range(n + 1)])

    def __mul__(self, other):
        if not isinstance(other, HbarSeries):
            return HbarSeries([c * other for c in self.coeffs])
        n = min(self.order, other.order)
        out = [KF.zero] * (n + 1)
        for i, a in enumerate(self.coeffs[:n + 1]):
            if not a:
                continue
            for j in range(n + 1 - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] = out[i + j] + a * b
        return HbarSeries(out)

    __rmul__ = __mul__

    def valuation(self):
        """Index of the first nonzero coefficient, or None if all vanish."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def is_zero(self):
        return self.valuation() is None

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                parts.append("(%s)" % (c,))
            else:
                parts.append("(%s)*hbar^%d" % (c, i))
        body = " + ".join(parts) if parts else "0"
        return "%s + O(hbar^%d)" % (body, self.order + 1)

    __repr__ = __str__


def _poly_series(poly, order):
    """hbar-series of P(e^{hbar/2 per doubled exponent}) for a sympy
    PolyElement in the doubled (sqrt q, sqrt Q, sqrt u, sqrt v) generators."""
    out = [KF.zero] * (order + 1)
    for monom, coeff in poly.terms():
        # doubled exponents (a, b, cu, cv) -> linear form (a + b k + cu rho
        # + cv sigma)/2
        lin = (KF(int(monom[0])) + int(monom[1]) * K_
               + int(monom[2]) * RHO + int(monom[3]) * SIGMA) / 2
        acc = KF(int(coeff))
        out[0] = out[0] + acc
        for i in range(1, order + 1):
            acc = acc * lin / i
            out[i] = out[i] + acc
    return out


def hbar_expand(f, order):
    """Exact hbar-expansion of a RatFun under q = e^hbar, Q = e^{k hbar},
    u = e^{rho hbar}, v = e^{sigma hbar}, truncated after hbar^order.

    The substitution is a ring homomorphism wherever the denominator's
    hbar-valuation does not exceed the numerator's; otherwise PoleAtQ1."""
    if not isinstance(f, RatFun):
        f = RatFun._coerce(f)
    order = int(order)
    if f.is_zero():
        return HbarSeries([KF.zero] * (order + 1))
    num_p = f._e.numer
    den_p = f._e.denom
    # the valuation of a nonzero t-term exponential sum is at most t-1
    # (generalized Vandermonde), so this search always terminates
    vd = None
    bound = len(den_p.terms())
    den = _poly_series(den_p, bound - 1 if bound > order + 1 else order)
    for i, c in enumerate(den):
        if c:
            vd = i
            break
    num = _poly_series(num_p, order + vd)
    if len(den) < order + vd + 1:
        den = _poly_series(den_p, order + vd)
    for i in range(vd):
        if num[i]:
            raise PoleAtQ1("pole of order %d at q = 1" % (vd - i))
    lead = den[vd]
    out = []
    for i in range(order + 1):
        acc = num[vd + i]
        for j in range(1, i + 1):
            acc = acc - den[vd + j] * out[i - j]
        out.append(acc / lead)
    return HbarSeries(out)


# ---------------------------------------------------------------------------
# The classical N=2 superconformal algebra: straightening of mode words onto
# the PBW basis L_{-lam} I_{-mu} G^+_{-al} G^-_{-be} |h, u>, with exact
# coefficients in Q(k, h, u) and central charge c = 3k/(k+2).

CF, CK, CH, CU = field("k,h,u", QQ)
C_CENTRAL = 3 * CK / (CK + 2)

_RANK = {"L": 0, "I": 1, "G+": 2, "G-": 3}
_ODD = ("G+", "G-")


def _cf_rat(x):
    x = Fraction(x)
    return CF(QQ(x.numerator, x.denominator))


def classical_bracket(g1, m, g2, n):
    """Super-bracket [X_m, Y_n] (anticommutator when both are odd):
    -> (list of (gen, index, coeff), central coefficient)."""
    m, n = Fraction(m), Fraction(n)
    if g1 == "L" and g2 == "L":
        return ([("L", m + n, _cf_rat(m - n))],
                C_CENTRAL / 12 * _cf_rat(m * (m * m - 1))
                if m + n == 0 else CF.zero)
    if g1 == "L" and g2 == "I":
        return ([("I", m + n, _cf_rat(-n))], CF.zero)
    if g1 == "I" and g2 == "L":
        return ([("I", m + n, _cf_rat(m))], CF.zero)
    if g1 == "I" and g2 == "I":
        return ([], C_CENTRAL / 3 * _cf_rat(m) if m + n == 0 else CF.zero)
    if g1 == "L" and g2 in _ODD:
        return ([(g2, m + n, _cf_rat(m / 2 - n))], CF.zero)
    if g1 in _ODD and g2 == "L":
        # [G_m, L_n] = -[L_n, G_m]
        return ([(g1, m + n, _cf_rat(-(n / 2 - m)))], CF.zero)
    if g1 == "I" and g2 in _ODD:
        s = 1 if g2 == "G+" else -1
        return ([(g2, m + n, _cf_rat(s))], CF.zero)
    if g1 in _ODD and g2 == "I":
        # [G^pm_m, I_n] = -[I_n, G^pm_m]
        s = -1 if g1 == "G+" else 1
        return ([(g1, m + n, _cf_rat(s))], CF.zero)
    if g1 in _ODD and g2 in _ODD:
        if g1 == g2:
            return ([], CF.zero)
        a = m if g1 == "G+" else n       # the G^+ index
        b = n if g1 == "G+" else m
        terms = [("L", m + n, _cf_rat(2)), ("I", m + n, _cf_rat(a - b))]
        central = (C_CENTRAL / 3 * _cf_rat(a * a - Fraction(1, 4))
                   if m + n == 0 else CF.zero)
        return (terms, central)
    raise ValueError("unknown generators %r, %r" % (g1, g2))


def _creator(gen, n, sector):
    if n < 0:
        return True
    return gen == "G-" and n == 0 and sector == "R"


def _ckey(gen, n):
    return (_RANK[gen], n)


def _cadd(dst, word, coeff):
    if word in dst:
        c = dst[word] + coeff
        if c:
            dst[word] = c
        else:
            del dst[word]
    elif coeff:
        dst[word] = coeff


def _capply(gen, n, word, sector):
    """One mode applied to one PBW word -> dict word -> coeff."""
    if not word:
        if _creator(gen, n, sector):
            return {((gen, n),): CF.one}
        if n > 0:
            return {}
        if gen == "L":
            return {(): CH}
        if gen == "I":
            return {(): CU}
        return {}                       # G^+_0 annihilates the highest weight
    head = word[0]
    rest = word[1:]
    if _creator(gen, n, sector):
        kx, kh = _ckey(gen, n), _ckey(head[0], head[1])
        if kx < kh:
            return {((gen, n),) + word: CF.one}
        if kx == kh:
            if gen in _ODD:
                return {}               # (G^pm at one index)^2 = 0
            return {((gen, n),) + word: CF.one}
    sgn = -1 if (gen in _ODD and head[0] in _ODD) else 1
    out = {}
    for w2, c in _capply(gen, n, rest, sector).items():
        for w3, c3 in _capply(head[0], head[1], w2, sector).items():
            _cadd(out, w3, sgn * c * c3)
    terms, central = classical_bracket(gen, n, head[0], head[1])
    for g2, m2, co in terms:
        if not co:
            continue
        for w3, c3 in _capply(g2, m2, rest, sector).items():
            _cadd(out, w3, co * c3)
    if central:
        _cadd(out, rest, central)
    return out


def classical_apply(gen, n, vec, sector="NS"):
    """Apply one mode of the classical algebra to a vector
    (dict PBW word -> Q(k,h,u) coefficient)."""
    n = Fraction(n)
    if gen in _ODD:
        want = 2 if sector == "NS" else 1
        if n.denominator != want:
            raise ValueError("G index %s illegal in sector %s" % (n, sector))
    elif n.denominator != 1:
        raise ValueError("%s index must be an integer" % gen)
    out = {}
    for word, c in vec.items():
        for w2, c2 in _capply(gen, n, word, sector).items():
            _cadd(out, w2, c * c2)
    return out


def _cword(idx):
    """PBW index (lam, mu, al, be) of the deformed basis, reused verbatim for
    the classical basis: lam -> L parts, mu -> I parts, al/be -> G^pm."""
    lam, mu, al, be = idx
    return (tuple(("L", Fraction(-l)) for l in lam)
            + tuple(("I", Fraction(-m)) for m in mu)
            + tuple(("G+", -a) for a in al)
            + tuple(("G-", -b) for b in be))


def classical_pairing(bra_idx, ket_vec, sector="NS"):
    """<bra| ket> for the contravariant form with L_m^+ = L_{-m},
    I_m^+ = I_{-m}, (G^pm_m)^+ = G^mp_{-m}."""
    lam, mu, al, be = bra_idx
    word = ([("G+", b) for b in reversed(be)]
            + [("G-", a) for a in reversed(al)]
            + [("I", m) for m in reversed(mu)]
            + [("L", l) for l in reversed(lam)])
    vec = ket_vec
    for gen, n in reversed(word):
        vec = classical_apply(gen, n, vec, sector)
    return vec.get((), CF.zero)


def classical_gram(sector, n, j):
    from .verma import enumerate_basis
    basis = enumerate_basis(sector, n, j)
    kets = [{_cword(idx): CF.one} for idx in basis]
    return [[classical_pairing(b, ket, sector) for ket in kets]
            for b in basis]


def classical_kac_det(sector, n, j):
    M = classical_gram(sector, n, j)
    size = len(M)
    if size == 0:
        return CF.one
    # plain Gaussian elimination over the fraction field
    M = [row[:] for row in M]
    det = CF.one
    for col in range(size):
        piv = None
        for r in range(col, size):
            if M[r][col]:
                piv = r
                break
        if piv is None:
            return CF.zero
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        p = M[col][col]
        det = det * p
        for r in range(col + 1, size):
            if not M[r][col]:
                continue
            f = M[r][col] / p
            M[r] = [M[r][c] - f * M[col][c] for c in range(size)]
    return det


# ---------------------------------------------------------------------------
# The limit-check catalog.

LIMIT_CASE_IDS = ("T0-const", "T1-relation", "heisenberg-central",
                  "GG-anticomm-half", "level-half-det", "level-one-det")

_HW = {EMPTY: ONE}


def _chu_to_krs(elem, h_val, u_val):
    """Q(k,h,u) element -> Q(k,rho,sigma) under h -> h_val, u -> u_val,
    k -> k (the parameter dictionary substitution)."""
    def sub_poly(p):
        out = KF.zero
        for monom, coeff in p.terms():
            c, d = QQ.numer(coeff), QQ.denom(coeff)
            term = KF(int(c)) / KF(int(d))
            if monom[0]:
                term = term * K_ ** int(monom[0])
            if monom[1]:
                term = term * h_val ** int(monom[1])
            if monom[2]:
                term = term * u_val ** int(monom[2])
            out = out + term
        return out
    return sub_poly(elem.numer) / sub_poly(elem.denom)


def _k_only(elem):
    """True iff a Q(k,rho,sigma) element is free of rho and sigma."""
    for p in (elem.numer, elem.denom):
        for monom in p.monoms():
            if monom[1] or monom[2]:
                return False
    return True


def classical_params():
    """The parameter dictionary (u_cl, h_cl) in Q(k, rho, sigma), computed
    from the module data rather than assumed:

    - u_cl: eigenvalue of cI_0 = K^{(1)}_0/(2(k+2)); K_0 = K^-_0 K^+_0 acts
      by u^2 = e^{2 rho hbar} on the NS highest weight.
    - h_cl: eigenvalue of cL_0; T_0 acts by h(u, v) and K_0 by u^2, so the
      hbar^2 coefficients of both feed the cL dictionary."""
    k_series = hbar_expand(U * U, 2)            # K_0 eigenvalue
    t_series = hbar_expand(h_param(), 2)        # T_0 eigenvalue
    u_cl = k_series[1] / (2 * (K_ + 2))
    h_cl = (t_series[2] / (4 * (K_ + 2))
            + k_series[2] / (4 * (K_ + 1) * (K_ + 2))
            + K_ * (2 * K_ + 1) / (24 * (K_ + 1) * (K_ + 2)))
    return u_cl, h_cl


def _fock_samples():
    """Test states in the free-field realization.  The oscillator/lattice
    basis there does not depend on q, so the hbar-expansion of the action
    coefficients is the honest operator expansion (the abstract PBW basis
    would not do: its basis vectors are themselves hbar-dependent)."""
    from .fock import FockModule, osc_act, hw_key
    mod = FockModule("NS", cutoff=3)
    hw = {hw_key(): ONE}
    return mod, (hw, osc_act(mod.rep, 0, -1, hw),
                 mod.apply_mode("G+", -HALF, hw))


def _expand_vec(vec, order):
    return {idx: hbar_expand(c, order) for idx, c in vec.items()}


def _check_t0(report):
    # T(z) = k/(k+1) + O(hbar) as an operator: the hbar^0 coefficient of
    # T_m v is delta_{m,0} k/(k+1) times the hbar^0 coefficient of v.
    target = K_ / (K_ + 1)
    e0 = hbar_expand(h_param(), 0)[0]
    report["quantum"] = str(e0)
    report["classical"] = str(target)
    if e0 != target:
        raise MismatchReport(report)
    mod, samples = _fock_samples()
    for v in samples:
        ev = _expand_vec(v, 0)
        for m in range(-2, 3):
            tv = _expand_vec(mod.apply_mode("T", m, v), 0)
            for idx in set(tv) | set(ev):
                lhs = tv[idx][0] if idx in tv else KF.zero
                rhs = (target * ev[idx][0]
                       if (m == 0 and idx in ev) else KF.zero)
                if lhs != rhs:
                    report["quantum"] = str(lhs)
                    report["classical"] = str(rhs)
                    report["at"] = "T_%s, component %s" % (m, (idx,))
                    raise MismatchReport(report)
    report["checked"] = ("T_m on 3 free-field vectors, m in [-2, 2], plus "
                         "the T_0 eigenvalue")


def _check_t1(report):
    # T_m + (K^+_m + K^-_m)/(k+1) = delta_{m,0} (k+2)/(k+1) + O(hbar^2):
    # the hbar^1 coefficient of T(z) is -K^{(1)}(z)/(k+1).
    const = (K_ + 2) / (K_ + 1)
    mod, samples = _fock_samples()
    for v in samples:
        ev = _expand_vec(v, 1)
        for m in range(-2, 3):
            kv = {}
            if m >= 0:
                for idx, c in mod.apply_mode("K+", m, v).items():
                    kv[idx] = kv.get(idx, ZERO) + c
            if m <= 0:
                for idx, c in mod.apply_mode("K-", m, v).items():
                    kv[idx] = kv.get(idx, ZERO) + c
            tv = _expand_vec(mod.apply_mode("T", m, v), 1)
            kk = _expand_vec(kv, 1)
            for idx in set(tv) | set(kk) | set(ev):
                for i in (0, 1):
                    lhs = tv[idx][i] if idx in tv else KF.zero
                    lhs = lhs + ((kk[idx][i] if idx in kk else KF.zero)
                                 / (K_ + 1))
                    rhs = (const * ev[idx][i]
                           if (m == 0 and idx in ev) else KF.zero)
                    if lhs != rhs:
                        report["quantum"] = str(lhs)
                        report["classical"] = str(rhs)
                        report["at"] = "T_%s, order %d, component %s" % (
                            m, i, (idx,))
                        raise MismatchReport(report)
    report["checked"] = ("T_m + (K^+_m + K^-_m)/(k+1) constant through "
                         "order hbar^1 on 3 free-field vectors, m in [-2, 2]")


def _check_heisenberg(report):
    # [H_m, H_{-m}] = [(k+2)m][km]/m; under cI = K^{(1)}/(2(k+2)) ~ H/(k+2)
    # its leading coefficient must be the classical (c/3) m.
    quantum, classical = [], []
    for m in (1, 2, 3):
        lead = hbar_expand(qnum(2 * m, m) * qnum(0, m) / m, 0)[0]
        lead = lead * 4 / (2 * (K_ + 2)) ** 2
        hw = {(): CF.one}
        w = classical_apply("I", m, classical_apply("I", -m, hw))
        cval = w.get((), CF.zero)       # = (c/3) m
        cval = _chu_to_krs(cval, KF.zero, KF.zero)
        quantum.append(str(lead))
        classical.append(str(cval))
        if lead != cval or lead != K_ * m / (K_ + 2):
            report["quantum"] = str(lead)
            report["classical"] = str(cval)
            report["at"] = "m = %d" % m
            raise MismatchReport(report)
    report["quantum"] = quantum
    report["classical"] = classical


def _check_gg_half(report):
    # <hw| {G^-_{1/2}, G^+_{-1/2}} |hw> scaled by the cG normalization 2/(k+2)
    # must limit onto the classical {cG^-_{1/2}, cG^+_{-1/2}} = 2 h_cl - u_cl.
    u_cl, h_cl = classical_params()
    ctx = Context("NS")
    vec = ctx.apply_mode("G-", HALF, ctx.apply_mode("G+", -HALF, _HW))
    amp = vec.get(EMPTY, ZERO)
    lead = hbar_expand(amp, 0)[0] * 2 / (K_ + 2)
    hw = {(): CF.one}
    w = classical_apply("G-", HALF, classical_apply("G+", -HALF, hw))
    cval = _chu_to_krs(w.get((), CF.zero), h_cl, u_cl)
    report["quantum"] = str(lead)
    report["classical"] = str(cval)
    report["dictionary"] = {"u_cl": str(u_cl), "h_cl": str(h_cl)}
    if lead != cval:
        raise MismatchReport(report)


def _det_case(report, n, j, order):
    from .verma import kac_determinant
    u_cl, h_cl = classical_params()
    det = kac_determinant("NS", n, j)
    series = hbar_expand(det, order)
    val = series.valuation()
    cdet = _chu_to_krs(classical_kac_det("NS", n, j), h_cl, u_cl)
    report["dictionary"] = {"u_cl": str(u_cl), "h_cl": str(h_cl)}
    report["classical"] = str(cdet)
    if val is None:
        report["quantum"] = "0 through hbar^%d" % order
        raise MismatchReport(report)
    lead = series[val]
    report["quantum"] = "hbar^%d * (%s)" % (val, lead)
    ratio = lead / cdet
    report["ratio"] = str(ratio)
    report["hbar_valuation"] = val
    if not ratio or not _k_only(ratio):
        raise MismatchReport(report)


def limit_check(case_id):
    """Run one catalog case; returns the report dict on success and raises
    MismatchReport (carrying the report) on failure."""
    if case_id not in LIMIT_CASE_IDS:
        raise ValueError("unknown limit case %r" % case_id)
    report = {"case": case_id}
    if case_id == "T0-const":
        _check_t0(report)
    elif case_id == "T1-relation":
        _check_t1(report)
    elif case_id == "heisenberg-central":
        _check_heisenberg(report)
    elif case_id == "GG-anticomm-half":
        _check_gg_half(report)
    elif case_id == "level-half-det":
        _det_case(report, Fraction(1, 2), 1, order=4)
    elif case_id == "level-one-det":
        _det_case(report, Fraction(1), 0, order=10)
    report["passed"] = True
    return report
