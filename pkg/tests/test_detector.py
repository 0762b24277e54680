import math
from fractions import Fraction

import numpy as np
import pytest

from selberg1.asymptotics import stirling_constants
from selberg1.characters import build_L_element, enumerate_characters
from selberg1.detector import (
    detect,
    detect_q,
    extract_coeffs,
    find_peaks,
    grid_denominator,
    periodicity_check,
    scan_support,
)
from selberg1.errors import ConductorMismatch, InsufficientData
from selberg1.selberg import CoefficientSource, FunctionalEquation, GammaFactorTerm, SelbergElement

T = 1e5


def element(q, i, A0=0.0):
    el = build_L_element(enumerate_characters(q)[i], A0)
    return el, stirling_constants(el.fe)


def peak_value(profile):
    return max(p.magnitude for p in profile)


def test_zeta_support_at_integers(zeta, sc_zeta):
    profile = scan_support(zeta, sc_zeta, T, 12, 2)
    assert [p.alpha for p in profile] == sorted(p.alpha for p in profile)
    assert find_peaks(profile) == [Fraction(1), Fraction(2)]
    top = peak_value(profile)
    assert all(p.magnitude <= 0.1 * top for p in profile if p.alpha.denominator != 1)


def test_chi4_support_at_odd_quarters(L4, sc_L4):
    profile = scan_support(L4, sc_L4, T, 12, 2)
    assert find_peaks(profile) == [Fraction(k, 4) for k in (1, 3, 5, 7)]
    top = peak_value(profile)
    by_alpha = {p.alpha: p.magnitude for p in profile}
    assert by_alpha[Fraction(5, 12)] <= 0.1 * top
    assert by_alpha[Fraction(1, 2)] <= 0.1 * top


def test_scan_requires_coefficients(zeta, sc_zeta):
    short = SelbergElement(zeta.fe, CoefficientSource.explicit(np.ones(1000)), "short")
    with pytest.raises(InsufficientData):
        scan_support(short, sc_zeta, T, 60, 2)


@pytest.mark.parametrize("q,i", [(1, 0), (3, 1), (4, 1), (5, 2), (7, 1), (8, 1), (11, 3)])
def test_detect_q_recovers_modulus(q, i):
    el, sc = element(q, i)
    assert detect_q(scan_support(el, sc, T, grid_denominator(el.fe, sc), 2), sc, el.fe) == q


def test_grid_always_contains_fitted_conductor(zeta, sc_zeta):
    el, sc = element(7, 1)
    assert grid_denominator(el.fe, sc) == 420
    assert grid_denominator(zeta.fe, sc_zeta) == 60


def test_wrong_Q_is_a_conductor_mismatch(zeta):
    fe = FunctionalEquation(2 * zeta.fe.Q, zeta.fe.terms, zeta.fe.omega, 1)
    el = SelbergElement(fe, zeta.coeffs, "zeta with doubled Q")
    sc = stirling_constants(fe)
    profile = scan_support(el, sc, T, grid_denominator(fe, sc), 2)
    with pytest.raises(ConductorMismatch):
        detect_q(profile, sc, fe)


def test_detect_q_invariant_under_gamma_duplication(zeta, sc_zeta):
    # Q^s Gamma(s/2) = const * (sqrt2 Q)^s Gamma(s/4) Gamma(s/4 + 1/2): C halves, Q^2 doubles
    fe = FunctionalEquation(
        zeta.fe.Q * math.sqrt(2), (GammaFactorTerm(0.25, 0), GammaFactorTerm(0.25, 0.5)), zeta.fe.omega, 1
    )
    sc = stirling_constants(fe)
    assert abs(sc.C - 0.5) < 1e-6
    el = SelbergElement(fe, zeta.coeffs, "zeta, duplicated gamma")
    profile = scan_support(el, sc, T, 60, 2)
    assert detect_q(profile, sc, fe) == detect_q(scan_support(zeta, sc_zeta, T, 60, 2), sc_zeta, zeta.fe) == 1


def test_empty_profile_rejected(sc_zeta, zeta):
    with pytest.raises(ValueError):
        detect_q([], sc_zeta, zeta.fe)


def test_extract_examples(zeta, sc_zeta, L4, sc_L4):
    z = extract_coeffs(zeta, sc_zeta, 1, T, 3)
    assert [c.m for c in z] == [1, 2, 3]
    assert all(abs(c.value - 1) < 0.05 for c in z)
    four = extract_coeffs(L4, sc_L4, 4, T, 4)
    assert np.allclose([c.value for c in four], [1, 0, -1, 0], atol=0.05)


def test_extract_shifted_character(chi3):
    el = build_L_element(chi3, 0.5)
    sc = stirling_constants(el.fe)
    table = extract_coeffs(el, sc, 3, T, 3)
    m = np.arange(1, 4)
    # under the pinned convention a(m) m^(-iA) with the fitted A is the character
    w = np.array([c.value for c in table]) * np.exp(-1j * sc.A * np.log(m))
    assert np.allclose(w, chi3.values[m % 3], atol=0.05)


def test_periodicity_examples(zeta, sc_zeta, L4, sc_L4):
    assert periodicity_check(zeta, sc_zeta, T, [Fraction(1)])[0][1] <= 0.05
    assert periodicity_check(L4, sc_L4, T, [Fraction(1, 4)])[0][1] <= 0.05
    assert periodicity_check(L4, sc_L4, T, [Fraction(5, 12)])[0][1] <= 0.05


@pytest.mark.parametrize("q,i,A0", [(4, 1, 0.0), (3, 1, 0.5), (7, 2, -0.5), (5, 1, 0.0)])
def test_recovered_table_is_periodic_and_multiplicative(q, i, A0):
    el, sc = element(q, i, A0)
    table = extract_coeffs(el, sc, q, T, 3 * q)
    v = np.array([c.value for c in table])
    u = np.array([c.uncertainty for c in table])
    m = np.arange(1, 3 * q + 1)
    assert np.all(np.abs(v - el.coeffs.a(m)) <= 3 * u + 1e-3)
    w = v * np.exp(-1j * sc.A * np.log(m))
    for k in range(q):
        assert abs(w[k] - w[k + q]) <= u[k] + u[k + q]
    for a in range(2, 3 * q):
        for b in range(a + 1, 3 * q):
            if a * b <= 3 * q and math.gcd(a * b, q) == 1:
                assert abs(v[a * b - 1] - v[a - 1] * v[b - 1]) <= u[a * b - 1] + u[a - 1] + u[b - 1]


def test_detect_report(L4, sc_L4):
    rep = detect(L4, sc_L4, T)
    assert rep.q_detected == 4 and rep.convention == -1
    assert len(rep.coeff_table) >= rep.q_detected
    assert [a for a, _ in rep.periodicity_residuals] == [Fraction(m, 4) for m in range(1, 5)]
    assert all(r <= 0.05 for _, r in rep.periodicity_residuals)
    doc = rep.to_dict()
    assert doc["q_detected"] == 4 and len(doc["support_profile"]) == 2 * 60
