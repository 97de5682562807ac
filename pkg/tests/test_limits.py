# coding: utf-8
"""Tests of the q -> 1 machinery: exact hbar-series expansion, the classical
N=2 superconformal engine (action consistency, graded Jacobi, determinants)
and the limit-check catalog."""

import itertools
import random
from fractions import Fraction

import pytest

from svirqk.ratfun import ONE, U, V, qpow, qnum
from svirqk.limits import (
    HbarSeries, hbar_expand, PoleAtQ1, MismatchReport,
    classical_apply, classical_bracket, classical_pairing,
    classical_gram, classical_kac_det, classical_params,
    limit_check, LIMIT_CASE_IDS,
    KF, K_, RHO, SIGMA, CF, CK, CH, CU, C_CENTRAL,
)

HALF = Fraction(1, 2)
CHW = {(): CF.one}


# --------------------------------------------------------------- hbar series

def test_expand_qdiff():
    s = hbar_expand(qpow(1) - qpow(-1), 2)
    assert s.coeffs == (KF.zero, KF(2), KF.zero)
    assert s.valuation() == 1


def test_expand_qnumbers():
    assert hbar_expand(qnum(2, 1), 1).coeffs == (K_ + 2, KF.zero)
    # [(k+2)][k] -> k(k+2), so dividing by (k+2)^2 leaves k/(k+2) = c/3
    lead = hbar_expand(qnum(2, 1) * qnum(0, 1), 0)[0]
    assert lead / (K_ + 2) ** 2 == K_ / (K_ + 2)


def test_expand_variables():
    assert hbar_expand(U, 2).coeffs == (KF.one, RHO, RHO ** 2 / 2)
    assert hbar_expand(V, 1).coeffs == (KF.one, SIGMA)
    assert hbar_expand((qpow(1) - qpow(-1)) ** 2, 3).coeffs == \
        (KF.zero, KF.zero, KF(4), KF.zero)


def test_expand_pole():
    with pytest.raises(PoleAtQ1):
        hbar_expand(ONE / (qpow(1) - qpow(-1)), 2)
    with pytest.raises(PoleAtQ1):
        hbar_expand(qnum(2) / (U - 1), 1)
    # a cancelling q - q^{-1} is fine
    s = hbar_expand((U - 1) / (qpow(1) - qpow(-1)), 1)
    assert s[0] == RHO / 2


def _random_ratfun(rng):
    atoms = [qpow(1), qpow(-1, 1), U, V, qnum(2), qnum(1, 1), qnum(2, 1),
             U * V, ONE + qpow(1, 1)]
    f = ONE
    for _ in range(rng.randint(1, 3)):
        f = f * rng.choice(atoms)
    f = f + rng.randint(-2, 2)
    return f


def test_expand_is_ring_homomorphism():
    rng = random.Random(20230817)
    for _ in range(12):
        f, g = _random_ratfun(rng), _random_ratfun(rng)
        sf, sg = hbar_expand(f, 3), hbar_expand(g, 3)
        assert hbar_expand(f * g, 3) == sf * sg
        assert hbar_expand(f + g, 3) == sf + sg


# ---------------------------------------------------------- classical engine

def _modes():
    out = []
    for g in ("L", "I"):
        for m in range(-2, 3):
            out.append((g, Fraction(m)))
    for g in ("G+", "G-"):
        for m2 in (-3, -1, 1, 3):
            out.append((g, Fraction(m2, 2)))
    return out


def _parity(g):
    return 1 if g in ("G+", "G-") else 0


def _bracket_dict(g1, m1, g2, m2):
    terms, central = classical_bracket(g1, m1, g2, m2)
    d = {}
    for g, m, co in terms:
        d[(g, m)] = d.get((g, m), CF.zero) + co
    if central:
        d["c"] = central
    return d


def test_classical_examples():
    w = classical_apply("G-", HALF, classical_apply("G+", -HALF, CHW))
    assert w == {(): 2 * CH - CU}
    # [L_1, L_{-1}] has no central term (m(m^2-1) = 0 at m = 1)
    w = classical_apply("L", 1, classical_apply("L", -1, CHW))
    assert w == {(): 2 * CH}
    # [I_1, I_{-1}] = c/3 = k/(k+2)
    w = classical_apply("I", 1, classical_apply("I", -1, CHW))
    assert w == {(): CK / (CK + 2)}
    assert C_CENTRAL == 3 * CK / (CK + 2)
    # the central term of [L_2, L_{-2}] is (c/12)*6 = c/2
    w = classical_apply("L", 2, classical_apply("L", -2, CHW))
    assert w == {(): 4 * CH + C_CENTRAL / 2}


def test_classical_action_matches_brackets():
    states = [CHW,
              {(("L", Fraction(-1)),): CF.one},
              {(("I", Fraction(-1)), ("G+", -HALF)): CF.one},
              {(("G+", Fraction(-3, 2)), ("G-", -HALF)): CF.one}]
    for (g1, m1), (g2, m2) in itertools.product(_modes(), _modes()):
        for v in states:
            lhs = classical_apply(g1, m1, classical_apply(g2, m2, v))
            s = -1 if _parity(g1) and _parity(g2) else 1
            for w, c in classical_apply(
                    g2, m2, classical_apply(g1, m1, v)).items():
                lhs[w] = lhs.get(w, CF.zero) - s * c
            rhs = {}
            for key, co in _bracket_dict(g1, m1, g2, m2).items():
                if key == "c":
                    for w, c in v.items():
                        rhs[w] = rhs.get(w, CF.zero) + co * c
                else:
                    for w, c in classical_apply(key[0], key[1], v).items():
                        rhs[w] = rhs.get(w, CF.zero) + co * c
            for w in set(lhs) | set(rhs):
                assert lhs.get(w, CF.zero) == rhs.get(w, CF.zero), \
                    ((g1, m1), (g2, m2), w)


def test_classical_super_jacobi():
    rng = random.Random(11)
    ms = _modes()
    for _ in range(200):
        A, B, C = rng.choice(ms), rng.choice(ms), rng.choice(ms)
        pa, pb, pc = _parity(A[0]), _parity(B[0]), _parity(C[0])
        acc = {}
        for X, Y, Z, sgn in ((A, B, C, (-1) ** (pa * pc)),
                             (B, C, A, (-1) ** (pb * pa)),
                             (C, A, B, (-1) ** (pc * pb))):
            for mode, co in _bracket_dict(Y[0], Y[1], Z[0], Z[1]).items():
                if mode == "c":
                    continue
                for m2, co2 in _bracket_dict(
                        X[0], X[1], mode[0], mode[1]).items():
                    acc[m2] = acc.get(m2, CF.zero) + sgn * co * co2
        assert all(not c for c in acc.values()), (A, B, C, acc)


def test_classical_determinants():
    assert classical_kac_det("NS", HALF, 1) == 2 * CH - CU
    assert classical_kac_det("NS", HALF, -1) == 2 * CH + CU
    d = classical_kac_det("NS", 1, 0)
    # the charged level-1/2 factors reappear at level 1, charge 0
    prod = (2 * CH - CU) * (2 * CH + CU)
    quot = d / prod
    assert quot == -(4 * CH + (CK + 2) * CU ** 2 - CK) / (CK + 2)
    # the Gram matrix is symmetric
    M = classical_gram("NS", Fraction(3, 2), 1)
    for i in range(len(M)):
        for j in range(len(M)):
            assert M[i][j] == M[j][i]


def test_classical_pairing_orthogonal_charges():
    ket = {(("G+", -HALF),): CF.one}
    assert classical_pairing(((), (), (), (HALF,)), ket) == CF.zero


# ------------------------------------------------------------ limit catalog

def test_parameter_dictionary():
    u_cl, h_cl = classical_params()
    assert u_cl == RHO / (K_ + 2)
    assert h_cl == (SIGMA * (SIGMA + 2) - RHO ** 2) / (4 * (K_ + 2))


@pytest.mark.parametrize("case", LIMIT_CASE_IDS)
def test_limit_catalog(case):
    report = limit_check(case)
    assert report["passed"] is True
    assert report["case"] == case


def test_limit_det_ratios_are_k_only():
    r = limit_check("level-half-det")
    assert r["ratio"] == str((K_ + 2) / 2)
    r1 = limit_check("level-one-det")
    assert r1["ratio"] == str(16 * (K_ + 2) ** 6)
    assert r1["hbar_valuation"] == 6


def test_limit_unknown_case():
    with pytest.raises(ValueError):
        limit_check("no-such-case")
