# coding: utf-8
"""
Command-line front end.  Every subcommand validates its arguments, runs one
exact computation and emits a versioned report (JSON or human-readable text,
to stdout or a file).

Exit status: 0 for verified/true outcomes, 1 for mathematical failures
(non-constant quotient, nonzero residual, a binding that is not singular,
a failed limit case), 2 for usage errors.  Usage errors are raised before
any computation starts, so they never write a partial report.

Reports are deterministic for a given configuration (timings excluded); all
underlying computation is pure, so the parallelism width recorded in the
configuration is an execution hint only and never changes a payload.
"""

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from .ratfun import RatFun, rf
from .verma import (
    NotSingular, enumerate_basis, multiplicity, make_context, gram_matrix,
    kac_determinant, verify_conjecture, singular_binding, singular_vector,
    d0_identities_hold, vanishing_lines_predicted,
)

__all__ = ["SCHEMA", "UsageError", "run", "main", "parse_level", "parse_spec"]

SCHEMA = "svirqk-report/1"

SUBCOMMANDS = ("det", "check-conjecture", "singular", "vanishing-lines",
               "char", "fock-check", "uqsl2-check", "limit")


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------- parsing

def parse_level(text):
    """Exact rational level from text like '2' or '5/2'."""
    try:
        n = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError("level %r is not a rational number" % (text,))
    if n < 0 or n.denominator not in (1, 2):
        raise UsageError("level %s is not on the half-integer lattice" % (n,))
    return n


def _parse_value(text):
    """int, rational, or monomial in one of q, Q, u, v (e.g. Q=q^3)."""
    try:
        x = Fraction(text)
        if x.denominator == 1:
            return rf(int(x))
        return rf(x)
    except (ValueError, ZeroDivisionError):
        pass
    base, sep, exp = text.partition("^")
    if base not in ("q", "Q", "u", "v"):
        raise UsageError("cannot parse specialization value %r" % (text,))
    if sep:
        try:
            e = Fraction(exp)
        except (ValueError, ZeroDivisionError):
            raise UsageError("bad exponent in %r" % (text,))
        if e.denominator not in (1, 2):
            raise UsageError("exponent in %r is off the half lattice" % (text,))
    else:
        e = Fraction(1)
    kw = {"q": "eq", "Q": "eQ", "u": "eu", "v": "ev"}[base]
    return RatFun.monomial(1, **{kw: e})


def parse_spec(text):
    """Comma-separated var=value bindings, e.g. 'Q=3,u=5' or 'Q=q^3'."""
    if not text:
        return {}
    out = {}
    for piece in text.split(","):
        name, sep, val = piece.partition("=")
        name = name.strip()
        if not sep or name not in ("q", "Q", "u", "v"):
            raise UsageError("bad specialization binding %r" % (piece,))
        out[name] = _parse_value(val.strip())
    return out


def _parse_sector(text):
    low = text.lower()
    if low in ("ns", "r"):
        return low.upper()
    raise UsageError("sector must be 'ns' or 'r', not %r" % (text,))


def _parse_factor(text):
    """'f(r,s)' or 'g(l)' -> ('f', r, s) / ('g', l)."""
    text = text.strip()
    if not text.endswith(")") or "(" not in text:
        raise UsageError("factor must look like f(1,1) or g(3)")
    kind, args = text[:-1].split("(", 1)
    kind = kind.strip()
    try:
        params = tuple(int(a) for a in args.split(","))
    except ValueError:
        raise UsageError("factor arguments must be integers in %r" % (text,))
    if kind == "f" and len(params) == 2 and params[0] > 0 and params[1] > 0:
        return ("f",) + params
    if kind == "g" and len(params) == 1 and params[0] % 2:
        return ("g",) + params
    raise UsageError("unknown factor %r" % (text,))


def _idx_str(idx):
    """Readable PBW label: K-(-2) T(-1) G+(-3/2) G-(-1/2), or 'hw'."""
    lam, mu, al, be = idx
    parts = []
    for name, grp in (("K-", lam), ("T", mu), ("G+", al), ("G-", be)):
        parts.extend("%s(%s)" % (name, -Fraction(p)) for p in grp)
    return " ".join(parts) if parts else "hw"


def _factor_name(fac):
    if fac[0] == "f":
        return "f(%d,%d)" % fac[1:]
    return "g(%d)" % fac[1:]


def build_parser():
    p = argparse.ArgumentParser(
        prog="svirqk",
        description="Exact computations in the quantum-deformed N=2 "
                    "superconformal algebra and its modules.")
    sub = p.add_subparsers(dest="subcommand", required=True)

    def common(sp, sector=True, level=True, charge=True, spec=True,
               cutoff=False):
        if sector:
            sp.add_argument("--sector", required=True,
                            help="ns or r")
        if level:
            sp.add_argument("--level", required=True,
                            help="rational level, e.g. 5/2")
        if charge:
            sp.add_argument("--charge", type=int, default=0,
                            help="integer charge (default 0)")
        if spec:
            sp.add_argument("--spec", default="",
                            help="comma-separated var=value bindings, e.g. "
                                 "Q=3,u=5 or Q=q^3")
        if cutoff:
            sp.add_argument("--cutoff", type=int, default=None,
                            help="oscillator-degree cutoff")
        sp.add_argument("--format", choices=("json", "text"), default="text")
        sp.add_argument("--output", default=None,
                        help="write the report here instead of stdout")
        sp.add_argument("--jobs", type=int, default=1,
                        help="parallelism width hint (results never depend "
                             "on it)")
        sp.add_argument("--max-depth", type=int, default=100000,
                        help="straightening recursion guard")

    common(sub.add_parser("det", help="Kac determinant at one (level, charge)"))
    common(sub.add_parser("check-conjecture",
                          help="determinant vs. the product formula"))
    sp = sub.add_parser("singular", help="singular vector under a factor's "
                                         "vanishing binding")
    sp.add_argument("--factor", required=True, help="f(r,s) or g(l)")
    common(sp, spec=False)
    sp = sub.add_parser("vanishing-lines",
                        help="predicted first occurrences of the factors")
    sp.add_argument("--max-level", required=True)
    common(sp, level=False, charge=False, spec=False)
    sp = sub.add_parser("char", help="basis counts vs. character "
                                     "multiplicities up to a level bound")
    common(sp, charge=False, spec=False)
    common(sub.add_parser("fock-check", help="free-field Gram matrix vs. the "
                                             "Verma-module Gram matrix"),
           spec=False, cutoff=True)
    sp = sub.add_parser("uqsl2-check", help="quadratic relations of the "
                                            "quantum affine sl2 currents")
    sp.add_argument("--relation", default="all",
                    help="Uq-1 .. Uq-7, or all")
    common(sp, sector=False, level=False, charge=False, spec=False,
           cutoff=True)
    sp = sub.add_parser("limit", help="classical-limit catalog cases")
    sp.add_argument("--case", default="all",
                    help="catalog case id, or all")
    common(sp, sector=False, level=False, charge=False, spec=False)
    return p


# ---------------------------------------------------------------- subcommands

def _cmd_det(cfg):
    sector, n, j = cfg["sector"], Fraction(cfg["level"]), cfg["charge"]
    spec = parse_spec(cfg["spec"])
    ctx = make_context(sector, spec)
    ctx.max_depth = cfg["max_depth"]
    basis = enumerate_basis(sector, n, j)
    det = kac_determinant(sector, n, j, ctx=ctx)
    result = {"basis_size": len(basis), "determinant": str(det)}
    if not basis:
        result["note"] = "empty basis; determinant of the empty matrix is 1"
    return 0, result


def _cmd_check_conjecture(cfg):
    sector, n, j = cfg["sector"], Fraction(cfg["level"]), cfg["charge"]
    spec = parse_spec(cfg["spec"])
    rep = verify_conjecture(sector, n, j, spec=spec)
    result = {
        "determinant": str(rep["determinant"]),
        "product": str(rep["product"]),
        "quotient": None if rep["quotient"] is None else str(rep["quotient"]),
        "quotient_constant_in_uv": rep.get("quotientConstantInUV"),
        "ok": rep["ok"],
    }
    return (0 if rep["ok"] else 1), result


def _cmd_singular(cfg):
    sector, n, j = cfg["sector"], Fraction(cfg["level"]), cfg["charge"]
    fac = _parse_factor(cfg["factor"])
    binding = singular_binding(fac[0], *fac[1:])
    result = {"factor": _factor_name(fac),
              "binding": {k: str(v) for k, v in binding.items()}}
    try:
        vec, basis, _ = singular_vector(sector, n, j, binding)
    except NotSingular as e:
        result["ok"] = False
        result["error"] = "NotSingular: %s" % (e,)
        return 1, result
    result["ok"] = True
    result["annihilated_by_positive_modes"] = True
    result["components"] = [[_idx_str(idx), str(vec[idx])]
                            for idx in basis if idx in vec]
    return 0, result


def _cmd_vanishing_lines(cfg):
    sector = cfg["sector"]
    max_level = parse_level(cfg["max_level"])
    d0ok = d0_identities_hold()
    lines = [{"factor": _factor_name(fac), "first_level": str(lvl),
              "charge": ch}
             for fac, lvl, ch in vanishing_lines_predicted(sector, max_level)]
    result = {"d0_identities": d0ok, "lines": lines}
    return (0 if d0ok else 1), result


def _cmd_char(cfg):
    sector, nmax = cfg["sector"], Fraction(cfg["level"])
    jspan = int(2 * nmax) + 2
    mismatches = []
    checked = 0
    n = Fraction(0)
    step = Fraction(1, 2) if sector == "NS" else Fraction(1)
    while n <= nmax:
        for j in range(-jspan, jspan + 1):
            want = multiplicity("P^" + sector, n, j)
            for dual in (False, True):
                got = len(enumerate_basis(sector, n, j, dual=dual))
                checked += 1
                if got != want:
                    mismatches.append({"level": str(n), "charge": j,
                                       "dual": dual, "basis": got,
                                       "multiplicity": want})
        n += step
    result = {"checked": checked, "mismatches": mismatches,
              "ok": not mismatches}
    return (0 if not mismatches else 1), result


def _cmd_fock_check(cfg):
    from .fock import fock_gram
    sector, n, j = cfg["sector"], Fraction(cfg["level"]), cfg["charge"]
    cutoff = cfg.get("cutoff")
    fg = fock_gram(sector, n, j, cutoff=cutoff)
    gg = gram_matrix(sector, n, j)
    equal = all(a == b for ra, rb in zip(fg, gg) for a, b in zip(ra, rb))
    result = {"size": len(fg), "cutoff": cutoff if cutoff is not None
              else str(n), "equal": equal}
    if not equal:
        result["fock"] = [[str(x) for x in row] for row in fg]
        result["verma"] = [[str(x) for x in row] for row in gg]
    return (0 if equal else 1), result


_UQ_WHICH = {"Uq-1": ("psi+", "psi-"), "Uq-2": ("E",), "Uq-3": ("E", "F"),
             "Uq-4": ("E", "F"), "Uq-5": ("E",), "Uq-6": ("E",),
             "Uq-7": ("E",)}


def _cmd_uqsl2(cfg):
    from .fock import UQ_RELATION_IDS, uqsl2_residual
    rel = cfg["relation"]
    rels = UQ_RELATION_IDS if rel == "all" else (rel,)
    for r in rels:
        if r not in UQ_RELATION_IDS:
            raise UsageError("unknown relation %r" % (r,))
    cutoff = cfg.get("cutoff") or 2
    failures = []
    checked = 0
    for r in rels:
        for which in _UQ_WHICH[r]:
            for m in (-1, 0, 1):
                for n in (-1, 0, 1):
                    res = uqsl2_residual(r, m, n, cutoff=cutoff, which=which)
                    checked += 1
                    if res:
                        failures.append({"relation": r, "which": which,
                                         "m": m, "n": n,
                                         "residual": {str(k): str(v)
                                                      for k, v in res.items()}})
    result = {"relations": list(rels), "cutoff": cutoff, "window": 1,
              "checked": checked, "failures": failures, "ok": not failures}
    return (0 if not failures else 1), result


def _cmd_limit(cfg):
    from .limits import LIMIT_CASE_IDS, MismatchReport, limit_check
    case = cfg["case"]
    cases = LIMIT_CASE_IDS if case == "all" else (case,)
    for c in cases:
        if c not in LIMIT_CASE_IDS:
            raise UsageError("unknown limit case %r" % (c,))
    reports, ok = [], True
    for c in cases:
        try:
            reports.append(limit_check(c))
        except MismatchReport as e:
            rep = dict(e.report)
            rep["passed"] = False
            reports.append(rep)
            ok = False
    return (0 if ok else 1), {"cases": reports, "ok": ok}


_DISPATCH = {
    "det": _cmd_det,
    "check-conjecture": _cmd_check_conjecture,
    "singular": _cmd_singular,
    "vanishing-lines": _cmd_vanishing_lines,
    "char": _cmd_char,
    "fock-check": _cmd_fock_check,
    "uqsl2-check": _cmd_uqsl2,
    "limit": _cmd_limit,
}


# ---------------------------------------------------------------- reporting

def _render_text(obj, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for key in obj:
            val = obj[key]
            if isinstance(val, (dict, list)):
                lines.append("%s%s:" % (pad, key))
                lines.extend(_render_text(val, indent + 1))
            else:
                lines.append("%s%s: %s" % (pad, key, val))
    elif isinstance(obj, list):
        for val in obj:
            if isinstance(val, (dict, list)):
                lines.append("%s-" % pad)
                lines.extend(_render_text(val, indent + 1))
            else:
                lines.append("%s- %s" % (pad, val))
    else:
        lines.append("%s%s" % (pad, obj))
    return lines


def _emit(report, cfg, stream):
    if cfg["format"] == "json":
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    else:
        text = "\n".join(_render_text(report)) + "\n"
    if cfg["output"]:
        with open(cfg["output"], "w") as f:
            f.write(text)
    else:
        stream.write(text)


def run(argv=None, stdout=None, stderr=None):
    """Parse argv, execute, emit a report; returns the exit status."""
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    cfg = {k.replace("-", "_"): v for k, v in vars(args).items()}
    started = time.time()
    try:
        # validate everything up front: a usage error must never write output
        if "sector" in cfg:
            cfg["sector"] = _parse_sector(cfg["sector"])
        if "level" in cfg:
            cfg["level"] = str(parse_level(cfg["level"]))
        if "max_level" in cfg:
            cfg["max_level"] = str(parse_level(cfg["max_level"]))
        if cfg.get("spec"):
            parse_spec(cfg["spec"])
        if "factor" in cfg:
            _parse_factor(cfg["factor"])
        if cfg.get("jobs") is not None and cfg["jobs"] < 1:
            raise UsageError("--jobs must be positive")
        if cfg.get("cutoff") is not None and cfg["cutoff"] < 0:
            raise UsageError("--cutoff must be non-negative")
        if cfg.get("output"):
            parent = os.path.dirname(os.path.abspath(cfg["output"]))
            if not os.path.isdir(parent):
                raise UsageError("output directory %r does not exist"
                                 % (parent,))
        status, result = _DISPATCH[cfg["subcommand"]](cfg)
    except UsageError as e:
        stderr.write("error: %s\n" % (e,))
        return 2
    report = {
        "schema": SCHEMA,
        "config": {k: v for k, v in cfg.items()},
        "result": result,
        "timings": {"seconds": round(time.time() - started, 3)},
    }
    _emit(report, cfg, stdout)
    return status


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
