# coding: utf-8
"""
Exact arithmetic in the fraction field of Laurent polynomials over the
integers in the four formal variables q, Q (standing for q^k), u, v, with
exponents on the half-integer lattice.

k never appears as a raw exponent: every exponent of interest is Z/2-linear
in k, so Q = q^k is an independent variable and q^{a+bk} is the monomial
q^a Q^b.  Half-integer exponents are stored doubled: internally we work with
polynomials in the square roots of the four variables, so that all internal
exponents are plain non-negative integers and sympy's dense multivariate
machinery applies unchanged.
"""

from fractions import Fraction

from sympy.polys.domains import ZZ
from sympy.polys.fields import field

__all__ = [
    "RatFun", "DivisionByZero", "NonInvertibleSubstitution", "NoExactRoot",
    "rf", "qpow", "qnum", "qbr", "VARS", "ZERO", "ONE", "Q", "QQ", "U", "V",
]


class DivisionByZero(ZeroDivisionError):
    pass


class NonInvertibleSubstitution(ValueError):
    pass


class NoExactRoot(ValueError):
    pass


VARS = ("q", "Q", "u", "v")

# Internal generators are the square roots of (q, Q, u, v); an exponent e on
# one of these generators represents the half-integer e/2 on the real variable.
_FIELD, _sq, _sQ, _su, _sv = field("sq,sQ,su,sv", ZZ)
_GENS = (_sq, _sQ, _su, _sv)
_VAR_INDEX = {name: i for i, name in enumerate(VARS)}


def _install_gcd_fallback():
    """sympy's integer polynomial gcd uses a heuristic that can give up
    (HeuristicGCDFailed) on some coefficient patterns; retry with the
    subresultant-based routine instead of propagating the failure."""
    from sympy.polys.rings import PolyElement
    from sympy.polys.polyerrors import HeuristicGCDFailed

    heu = PolyElement._gcd_ZZ

    def _gcd_zz(f, g):
        try:
            return heu(f, g)
        except HeuristicGCDFailed:
            return f.ring.dmp_inner_gcd(f, g)

    PolyElement._gcd_ZZ = _gcd_zz


_install_gcd_fallback()


def _doubled(e):
    """Exponent (int / Fraction with denominator 1 or 2) -> doubled int."""
    e2 = 2 * Fraction(e)
    if e2.denominator != 1:
        raise ValueError("exponent %s is not on the half-integer lattice" % (e,))
    return int(e2)


class RatFun:
    """Immutable rational function in (q, Q, u, v) on the half-integer lattice."""

    __slots__ = ("_e", "_hash")

    def __init__(self, elem):
        # elem: FracElement of _FIELD (internal constructor; use rf/qpow/qnum).
        self._e = elem
        self._hash = None

    # ---- constructors ----------------------------------------------------

    @staticmethod
    def from_int(n):
        return RatFun(_FIELD(ZZ(int(n))))

    @staticmethod
    def monomial(coeff, eq=0, eQ=0, eu=0, ev=0):
        """coeff * q^eq Q^eQ u^eu v^ev, exponents half-integers."""
        e = _FIELD(ZZ(int(coeff)))
        for g, ex in zip(_GENS, (eq, eQ, eu, ev)):
            d = _doubled(ex)
            if d:
                e = e * g ** d
        return RatFun(e)

    # ---- basic predicates --------------------------------------------------

    def is_zero(self):
        return not self._e

    def __bool__(self):
        return bool(self._e)

    # ---- field arithmetic --------------------------------------------------

    @staticmethod
    def _coerce(x):
        if isinstance(x, RatFun):
            return x
        if isinstance(x, int):
            return RatFun.from_int(x)
        if isinstance(x, Fraction):
            return RatFun.from_int(x.numerator) / RatFun.from_int(x.denominator)
        return NotImplemented

    def __add__(self, other):
        o = RatFun._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return RatFun(self._e + o._e)

    __radd__ = __add__

    def __sub__(self, other):
        o = RatFun._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return RatFun(self._e - o._e)

    def __rsub__(self, other):
        o = RatFun._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return RatFun(o._e - self._e)

    def __mul__(self, other):
        o = RatFun._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return RatFun(self._e * o._e)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RatFun._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not o._e:
            raise DivisionByZero("division by zero RatFun")
        return RatFun(self._e / o._e)

    def __rtruediv__(self, other):
        o = RatFun._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not self._e:
            raise DivisionByZero("division by zero RatFun")
        return RatFun(o._e / self._e)

    def __neg__(self):
        return RatFun(-self._e)

    def __pow__(self, n):
        n = int(n)
        if n < 0 and not self._e:
            raise DivisionByZero("negative power of zero")
        return RatFun(self._e ** n)

    def __eq__(self, other):
        o = RatFun._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._e == o._e

    def __hash__(self):
        if self._hash is None:
            num = tuple(sorted(self._e.numer.terms()))
            den = tuple(sorted(self._e.denom.terms()))
            self._hash = hash((num, den))
        return self._hash

    # ---- canonical Laurent view ---------------------------------------------
    #
    # sympy keeps num/den as honest polynomials with gcd 1 and positive
    # denominator leading coefficient.  The canonical Laurent form divides
    # both by the denominator's pure monomial content, so the denominator
    # carries no monomial factor and the numerator may have negative
    # (doubled) exponents.

    def _laurent(self):
        """-> (num_terms, den_terms); terms are lists of (doubled-exps, int coeff)
        sorted descending lexicographically on the exponent vector."""
        nt = self._e.numer.terms()
        dt = self._e.denom.terms()
        shift = tuple(min(m[i] for m, _ in dt) for i in range(4))
        num = [(tuple(m[i] - shift[i] for i in range(4)), int(c)) for m, c in nt]
        den = [(tuple(m[i] - shift[i] for i in range(4)), int(c)) for m, c in dt]
        num.sort(key=lambda t: t[0], reverse=True)
        den.sort(key=lambda t: t[0], reverse=True)
        return num, den

    @staticmethod
    def _fmt_exp(d):
        # d is a doubled exponent
        if d % 2 == 0:
            e = d // 2
            return str(e) if e >= 0 else "(%d)" % e
        return "(%d/2)" % d

    @staticmethod
    def _fmt_poly(terms):
        if not terms:
            return "0"
        pieces = []
        for exps, coeff in terms:
            factors = []
            for name, d in zip(VARS, exps):
                if d == 0:
                    continue
                if d == 2:
                    factors.append(name)
                else:
                    factors.append("%s^%s" % (name, RatFun._fmt_exp(d)))
            mag = abs(coeff)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if not pieces:
                pieces.append(body if coeff > 0 else "-" + body)
            else:
                pieces.append((" + " if coeff > 0 else " - ") + body)
        return "".join(pieces)

    def __str__(self):
        num, den = self._laurent()
        s = self._fmt_poly(num)
        if len(den) == 1 and den[0] == ((0, 0, 0, 0), 1):
            return s
        ds = self._fmt_poly(den)
        if len(den) > 1:
            ds = "(" + ds + ")"
        if len(num) > 1:
            s = "(" + s + ")"
        return s + " / " + ds

    def __repr__(self):
        return "RatFun(%s)" % str(self)

    # ---- substitution ---------------------------------------------------------

    def _sqrt_of_binding(self, val, name):
        """Exact square root of a bound value (needed when the bound variable
        occurs with half-integer exponents).  Exists iff val is a positive
        monomial with perfect-square coefficients and integer exponents."""
        nt = val._e.numer.terms()
        dt = val._e.denom.terms()
        if len(nt) != 1 or len(dt) != 1:
            raise NoExactRoot("binding for %s has no exact square root" % name)
        (nm, nc), (dm, dc) = nt[0], dt[0]
        nc, dc = int(nc), int(dc)
        if nc <= 0:
            raise NoExactRoot("binding for %s has no exact square root" % name)
        rn = _isqrt_exact(nc)
        rd = _isqrt_exact(dc)
        if rn is None or rd is None:
            raise NoExactRoot("binding for %s has no exact square root" % name)
        if any(e % 2 for e in nm) or any(e % 2 for e in dm):
            raise NoExactRoot("binding for %s has no exact square root" % name)
        root = _FIELD(ZZ(rn)) / _FIELD(ZZ(rd))
        for g, en, ed in zip(_GENS, nm, dm):
            root = root * g ** (en // 2) / g ** (ed // 2)
        return RatFun(root)

    def substitute(self, bindings):
        """Simultaneous exact substitution.  bindings: map from variable name
        in {'q','Q','u','v'} to a nonzero RatFun (or int/Fraction)."""
        if not bindings:
            return self
        bound = {}
        for name, val in bindings.items():
            if name not in _VAR_INDEX:
                raise KeyError("unknown variable %r" % name)
            val = RatFun._coerce(val)
            if val is NotImplemented:
                raise TypeError("cannot bind %s to %r" % (name, bindings[name]))
            if val.is_zero():
                raise NonInvertibleSubstitution("binding %s to zero" % name)
            bound[_VAR_INDEX[name]] = val

        # A variable occurring with odd doubled exponent needs the square
        # root of its binding.
        powers = {}
        for i, val in bound.items():
            odd = any(m[i] % 2 for m in self._e.numer.monoms())
            odd = odd or any(m[i] % 2 for m in self._e.denom.monoms())
            if odd:
                root = self._sqrt_of_binding(val, VARS[i])
                powers[i] = lambda d, r=root: r ** d
            else:
                powers[i] = lambda d, v=val: v ** (d // 2)

        def subst_poly(p):
            out = RatFun.from_int(0)
            for monom, coeff in p.terms():
                term = _FIELD(ZZ(int(coeff)))
                for i, g in enumerate(_GENS):
                    if i not in bound and monom[i]:
                        term = term * g ** monom[i]
                term = RatFun(term)
                for i in bound:
                    if monom[i]:
                        term = term * powers[i](monom[i])
                out = out + term
            return out

        den = subst_poly(self._e.denom)
        if den.is_zero():
            raise NonInvertibleSubstitution("denominator vanishes under binding")
        return subst_poly(self._e.numer) / den

    def is_independent_of(self, names):
        idxs = [_VAR_INDEX[n] for n in names]
        for p in (self._e.numer, self._e.denom):
            for m in p.monoms():
                if any(m[i] for i in idxs):
                    return False
        return True


def _isqrt_exact(n):
    from math import isqrt
    r = isqrt(n)
    return r if r * r == n else None


# ---- convenience constructors ----------------------------------------------

def rf(x):
    """Coerce an int/Fraction/RatFun to RatFun."""
    r = RatFun._coerce(x)
    if r is NotImplemented:
        raise TypeError("cannot coerce %r to RatFun" % (x,))
    return r


def qpow(a, b=0):
    """q^{a+bk} = q^a Q^b, with a, b half-integers."""
    return RatFun.monomial(1, eq=a, eQ=b)


def qnum(a, b=0):
    """The q-number [a+bk] = (q^a Q^b - q^{-a} Q^{-b})/(q - q^{-1})."""
    return (qpow(a, b) - qpow(-a, -b)) / (qpow(1) - qpow(-1))


# [n] for plain integers; same as qnum(n) but reads better at call sites.
qbr = qnum

ZERO = RatFun.from_int(0)
ONE = RatFun.from_int(1)
Q = RatFun.monomial(1, eq=1)      # the variable q
QQ = RatFun.monomial(1, eQ=1)     # the variable Q = q^k
U = RatFun.monomial(1, eu=1)
V = RatFun.monomial(1, ev=1)
