import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from selberg1.characters import (
    build_L_element,
    conductor_and_inducer,
    enumerate_characters,
    euler_phi,
    gauss_sum,
    l_value,
    primitive_characters,
    root_number,
)
from selberg1.errors import AxiomViolation, NoMatch, NotPrimitive


def test_small_groups():
    (triv,) = list(enumerate_characters(1))
    assert triv(np.arange(1, 20)).tolist() == [1] * 19
    g4 = enumerate_characters(4)
    assert len(g4) == 2 and g4[1](3) == -1
    g7 = enumerate_characters(7)
    assert len(g7) == 6
    for chi in g7:
        units = chi.values[1:]
        assert np.allclose(units**6, 1, atol=1e-12)


@given(st.integers(1, 400))
def test_group_size_and_closure(q):
    g = enumerate_characters(q)
    assert len(g) == euler_phi(q)
    chi = g[len(g) // 2]
    a, b = np.meshgrid(np.arange(q), np.arange(q))
    assert np.allclose(chi(a * b), chi(a) * chi(b), atol=1e-10)


@given(st.integers(1, 60), st.data())
def test_orthogonality(q, data):
    g = enumerate_characters(q)
    i = data.draw(st.integers(0, len(g) - 1))
    j = data.draw(st.integers(0, len(g) - 1))
    s = np.sum(g[i].values * np.conj(g[j].values))
    assert abs(s - (euler_phi(q) if i == j else 0)) < 1e-10


def test_characters_distinct():
    g = enumerate_characters(24)
    tables = {tuple(np.round(c.values, 8)) for c in g}
    assert len(tables) == len(g) == 8


def test_from_values_round_trip_and_nomatch():
    g = enumerate_characters(20)
    for chi in g:
        assert g.from_values(chi.values).exponents == chi.exponents
    with pytest.raises(NoMatch):
        g.from_values(2 * g[1].values)


def test_conductor_examples():
    principal6 = enumerate_characters(6)[0]
    d, chi = conductor_and_inducer(principal6)
    assert d == 1 and chi.is_principal
    chi5 = enumerate_characters(5)[1]
    d, chi = conductor_and_inducer(chi5)
    assert d == 5 and chi == chi5
    chi3 = enumerate_characters(3)[1]
    (chi9,) = [c for c in enumerate_characters(9) if all(c(a) == chi3(a) for a in range(1, 9) if a % 3)]
    d, chi = conductor_and_inducer(chi9)
    assert d == 3 and chi == chi3


@pytest.mark.parametrize("q", [8, 12, 15, 16, 36, 45])
def test_conductor_agrees_on_units_and_is_idempotent(q):
    for chi in enumerate_characters(q):
        d, ind = conductor_and_inducer(chi)
        units = [a for a in range(1, q) if math.gcd(a, q) == 1]
        assert all(abs(chi(a) - ind(a)) < 1e-10 for a in units)
        assert ind.is_primitive
        d2, ind2 = conductor_and_inducer(ind)
        assert d2 == d and ind2 == ind


def test_primitive_count():
    # primitive characters mod q for q = 1..12: 1,0,1,1,3,0,5,2,4,0,9,1
    assert len(primitive_characters(12)) == 27


def test_gauss_sums():
    assert abs(gauss_sum(enumerate_characters(4)[1]) - 2j) < 1e-12
    assert abs(gauss_sum(enumerate_characters(3)[1]) - 1j * math.sqrt(3)) < 1e-12
    for chi in enumerate_characters(7)[1:]:
        assert abs(abs(gauss_sum(chi)) - math.sqrt(7)) < 1e-10
    with pytest.raises(NotPrimitive):
        gauss_sum(enumerate_characters(9)[0])


def test_l_value_against_mpmath():
    for chi in (enumerate_characters(4)[1], enumerate_characters(7)[2], enumerate_characters(5)[1]):
        chi_list = [complex(chi(a)) for a in range(chi.modulus)]
        for s in (0.5 + 20j, 1.0 + 0.5j, 0.3 - 3j, 2.0):
            ref = complex(mpmath.dirichlet(mpmath.mpc(s.real, s.imag), chi_list))
            assert abs(l_value(chi, s) - ref) < 1e-11


def test_build_examples(chi3):
    z = build_L_element(enumerate_characters(1)[0])
    assert math.isclose(z.fe.Q, math.pi**-0.5) and z.fe.terms[0].mu == 0 and z.fe.omega == 1
    assert z.fe.pole_order == 1
    L4 = build_L_element(enumerate_characters(4)[1])
    assert L4.fe.terms[0].mu == 0.5 and abs(L4.fe.omega - 1) < 1e-12
    L3 = build_L_element(chi3, 0.5)
    assert L3.fe.terms[0].mu == (1 + 0.5j) / 2
    assert abs(L3.fe.omega - root_number(chi3) * cmath.exp(-0.5j * math.log(3 / math.pi))) < 1e-12


def test_build_rejects_bad_inputs():
    with pytest.raises(NotPrimitive):
        build_L_element(enumerate_characters(9)[3])
    with pytest.raises(AxiomViolation):
        build_L_element(enumerate_characters(1)[0], 0.5)


def test_oracle_is_shifted_l_value(chi3):
    el = build_L_element(chi3, -0.5)
    s = 0.7 + 4j
    assert abs(el.oracle(s) - l_value(chi3, s - 0.5j)) < 1e-15
