import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from selberg1.characters import build_L_element, enumerate_characters, l_value
from selberg1.complexfn import hurwitz_zeta
from selberg1.errors import InsufficientData, OracleUnavailable
from selberg1.selberg import CoefficientSource, SelbergElement
from selberg1.smoothing import (
    _chunked_sum,
    dirichlet_polynomial,
    extrapolated_value,
    lemma_error_probe,
    loglog_slope,
    default_X,
    residue_at_one,
    smoothed_value,
    smoothed_values,
    tail_cutoff,
)


@given(st.floats(10, 1e6), st.floats(1e-14, 1e-4), st.floats(-0.5, 2))
def test_tail_cutoff_is_minimal(X, tol, sigma):
    N = tail_cutoff(X, tol, sigma)

    def bound(n):
        return n**-sigma * math.exp(-n / X) * (X + 1) * (2 if sigma < 0 else 1)

    assert bound(N) <= tol * (1 + 1e-9)
    if N > max(2, 2 * abs(min(sigma, 0)) * X + 1):
        assert bound(N - 1) > tol * (1 - 1e-9)


def test_zeta_at_zero_height_positive_and_increasing(zeta):
    vals = [smoothed_value(zeta, 0.0, X).value for X in (10, 100, 1000)]
    assert all(abs(v.imag) < 1e-12 and v.real > 0 for v in vals)
    assert vals[0].real < vals[1].real < vals[2].real


def test_truncation_tail_dominated(L4):
    sv = smoothed_value(L4, 20.0, 1e3, tol=1e-10)
    longer = _chunked_sum(L4.coeffs, complex(0.5, 20.0), 1e3, 2 * sv.terms_used)
    assert abs(longer - sv.value) < 1e-10


def test_conjugation_identity(chi3):
    el = build_L_element(chi3, 0.5)
    for t in (7.0, 31.5):
        a = smoothed_value(el, -t, 500.0).value
        b = smoothed_value(el.conjugate(), t, 500.0).value
        assert abs(a - np.conj(b)) < 1e-12


@pytest.mark.parametrize(
    "label,t,expected",
    [("zeta", 30.0, 3.736e-06), ("chi4", 20.0, 1.696e-05)],
)
def test_error_at_large_X_is_first_residue_term(zeta, L4, label, t, expected):
    # the smoothed sum differs from F(s) by -F(s-1)/X + O(X^-2)
    el = zeta if label == "zeta" else L4
    s = complex(0.5, t)
    truth = el.oracle(s)
    err = abs(smoothed_value(el, t, 1e6).value - truth)
    assert err == pytest.approx(expected, rel=2e-3)
    assert err == pytest.approx(abs(el.oracle(s - 1)) / 1e6, rel=1e-3)


def test_hurwitz_cross_check_at_large_X(zeta):
    s = complex(0.5, 30)
    ext = extrapolated_value(zeta, s)
    assert abs(ext.value - hurwitz_zeta(s, 1)) < 1e-10


def test_smoothing_error_decay(zeta):
    probe = lemma_error_probe(zeta, 50.0, (1e2, 1e3, 1e4))
    errs = [e for _, e in probe.rows]
    assert errs[0] > errs[1] > errs[2]
    for a, b in zip(errs, errs[1:]):
        assert 8 < a / b < 12
    assert probe.slope <= -0.8


def test_smoothing_error_envelope_grows_linearly_in_t(zeta):
    # envelope = max error over [t, 1.5t]; the pointwise error also carries |F(3/2 + it)|
    ts = np.geomspace(20, 320, 9)
    env = [
        max(lemma_error_probe(zeta, u, (1e4,)).rows[0][1] for u in np.linspace(t, 1.5 * t, 6))
        for t in ts
    ]
    assert loglog_slope(ts, env) <= 1.3


def test_default_smoothing_length(L4):
    T = 1e3
    X = default_X(T)
    for t in (T / 2, T, 2 * T):
        err = abs(smoothed_value(L4, t, X).value - L4.oracle(complex(0.5, t)))
        assert err <= T**-0.25


@pytest.mark.parametrize("s", [0.5 + 10j, 0.3 - 5j, 1.7 + 3j, -0.5 + 2j])
def test_extrapolated_value_matches_oracle(L4, s):
    ext = extrapolated_value(L4, s)
    assert abs(ext.value - L4.oracle(s)) < 1e-10
    assert ext.extrapolation_error < 1e-8


def test_extrapolation_error_estimate_is_honest_at_height(L4):
    s = complex(0.5, 100)
    ext = extrapolated_value(L4, s)
    assert abs(ext.value - L4.oracle(s)) <= ext.extrapolation_error
    better = extrapolated_value(L4, s, X=2e4)
    assert abs(better.value - L4.oracle(s)) < 1e-10


def test_extrapolated_value_zeta_pole_handled(zeta):
    for s in (0.3 + 3j, 1.7 - 5j, 0.5 + 14j):
        assert abs(extrapolated_value(zeta, s).value - hurwitz_zeta(s, 1)) < 1e-10
    assert abs(residue_at_one(zeta) - 1) < 1e-10


def test_dirichlet_polynomial_routes_agree(L4):
    ts = np.linspace(100, 400, 257)
    a = smoothed_values(L4, ts, 500.0, method="nufft")
    b = smoothed_values(L4, ts, 500.0, method="direct")
    assert np.max(np.abs(a - b)) < 1e-10
    with pytest.raises(ValueError):
        dirichlet_polynomial(np.ones(3), np.zeros(3), ts, method="magic")


def test_smoothed_values_match_scalar(chi3):
    el = build_L_element(chi3)
    ts = np.array([5.0, 17.0, 40.0])
    vec = smoothed_values(el, ts, 300.0)
    for t, v in zip(ts, vec):
        assert abs(smoothed_value(el, t, 300.0).value - v) < 1e-11


def test_missing_oracle_and_coefficients(zeta):
    explicit = SelbergElement(zeta.fe, CoefficientSource.explicit(np.ones(10**5)), "table")
    with pytest.raises(OracleUnavailable):
        lemma_error_probe(explicit, 20.0, (100.0,))
    with pytest.raises(InsufficientData):
        smoothed_value(explicit, 20.0, 1e5)


def test_l_value_cross_check_shifted(chi3):
    el = build_L_element(chi3, -0.5)
    s = complex(1.2, 8)
    assert abs(extrapolated_value(el, s).value - l_value(chi3, s - 0.5j)) < 1e-10
