import math

import numpy as np
import pytest

from selberg1.asymptotics import stirling_constants
from selberg1.characters import build_L_element, enumerate_characters
from selberg1.detector import extract_coeffs
from selberg1.errors import EvaluationError, NoMatch
from selberg1.identifier import (
    DEFAULT_SAMPLES,
    H_TOL,
    convention_probe,
    identify,
    match_character,
    verify_H_constant,
)
from selberg1.selberg import CoefficientSource, FunctionalEquation, GammaFactorTerm, SelbergElement


def test_default_samples_cover_both_half_planes():
    assert len(DEFAULT_SAMPLES) >= 6
    assert any(s.real > 0.5 for s in DEFAULT_SAMPLES) and any(s.real < 0.5 for s in DEFAULT_SAMPLES)


def test_match_exact_table(chi4):
    assert match_character([1, 0, -1, 0], 4, 0.0) == chi4


def test_match_rejects_non_character():
    with pytest.raises(NoMatch):
        match_character([1, 2, 1, 2], 4, 0.0)


def test_match_needs_full_period():
    with pytest.raises(ValueError):
        match_character([1, 0], 4, 0.0)


@pytest.mark.parametrize("i", range(1, 6))
def test_match_recovered_mod7_table(i):
    chi = enumerate_characters(7)[i]
    el = build_L_element(chi)
    sc = stirling_constants(el.fe)
    table = extract_coeffs(el, sc, 7, 1e5)
    assert match_character(table, 7, 0.0) == chi


def test_match_undoes_shift(chi3):
    table = chi3.values[np.arange(1, 4) % 3] * np.exp(-0.5j * np.log(np.arange(1, 4)))
    assert match_character(table, 3, -0.5) == chi3
    with pytest.raises(NoMatch):
        match_character(table * np.exp(0.5j * np.log(np.arange(1, 4)) * 3), 3, -0.5)


def test_H_constant_for_chi4(L4, chi4):
    _, constancy = verify_H_constant(L4, 0.0, chi4)
    assert constancy <= 1e-6


def test_H_constant_for_zeta_with_regularization(zeta):
    samples, constancy = verify_H_constant(zeta, 0.0, enumerate_characters(1)[0])
    assert constancy <= 1e-6
    assert len(samples) == len(DEFAULT_SAMPLES)


def test_H_rejects_points_near_pole(zeta):
    with pytest.raises(EvaluationError):
        verify_H_constant(zeta, 0.0, enumerate_characters(1)[0], [complex(1.05, 0)])


def imprimitive_element(chi3):
    # chi mod 3 coefficients (equal to those of the induced character mod 9) with a mod-9 descriptor
    L3 = build_L_element(chi3)
    fe = FunctionalEquation(math.sqrt(9 / math.pi), L3.fe.terms, L3.fe.omega, 0)
    return SelbergElement(fe, L3.coeffs, "chi3 with a mod-9 descriptor")


def test_imprimitive_descriptor_is_inconsistent(chi3):
    el = imprimitive_element(chi3)
    _, constancy = verify_H_constant(el, 0.0, chi3)
    # the surplus factor is 3^(s/2), so H moves by |3^((s - s0)/2) - 1| across the samples
    s0 = DEFAULT_SAMPLES[0]
    expected = max(abs(3 ** ((s - s0) / 2) - 1) for s in DEFAULT_SAMPLES)
    assert abs(constancy - expected) < 1e-6
    ident = identify(el)
    assert ident.verdict == "inconsistent" and ident.conductor_mismatch
    assert ident.H_constancy >= 1e-2


def test_perturbed_coefficients_inconsistent(chi3):
    base = build_L_element(chi3)
    values = chi3.values

    def a_func(n):
        n = np.asarray(n, dtype=np.int64)
        return values[n % 3] * np.where(n == 2, 1.3, 1.0)

    el = SelbergElement(base.fe, CoefficientSource(a_func, 10**8), "perturbed")
    assert identify(el).verdict == "inconsistent"


def test_identify_zeta(zeta):
    ident = identify(zeta)
    assert ident.verdict == "identified"
    assert ident.q_prime == 1 and ident.chi_prime.modulus == 1
    assert abs(ident.A_shift) < 1e-6
    assert ident.to_dict()["verdict"] == "identified"


@pytest.mark.parametrize("A0", [0.5, -0.5])
def test_identify_shifted_chi3(chi3, A0):
    ident = identify(build_L_element(chi3, A0))
    assert ident.verdict == "identified"
    assert ident.chi_prime == chi3 and ident.q_prime == 3
    assert abs(ident.A_shift - A0) < 1e-3
    assert ident.convention == convention_probe()
    passing = [c for c in ident.candidates if c.get("H_constancy", math.inf) <= H_TOL]
    assert len(passing) == 1


@pytest.mark.parametrize("q,i,A0", [(5, 2, 0.5), (8, 1, -0.5), (11, 3, 0.0), (12, 3, 0.5)])
def test_round_trip_samples(q, i, A0):
    chi = enumerate_characters(q)[i]
    assert chi.is_primitive
    ident = identify(build_L_element(chi, A0))
    assert ident.verdict == "identified" and ident.chi_prime == chi and ident.q_prime == q
    assert abs(abs(ident.A_shift) - abs(A0)) < 1e-3 and ident.H_constancy <= 1e-6


def test_verdict_survives_gamma_duplication(zeta):
    fe = FunctionalEquation(
        zeta.fe.Q * math.sqrt(2), (GammaFactorTerm(0.25, 0), GammaFactorTerm(0.25, 0.5)), zeta.fe.omega, 1
    )
    el = SelbergElement(fe, zeta.coeffs, "zeta, duplicated gamma")
    assert identify(el).verdict == identify(zeta).verdict == "identified"


def test_convention_probe():
    assert convention_probe() == -1
