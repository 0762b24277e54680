"""End-to-end identification, plus two inputs that must be rejected.

Run: python3 demos/identify_shifted.py
"""

import math

import numpy as np

from selberg1 import build_L_element, enumerate_characters, identify
from selberg1.selberg import CoefficientSource, FunctionalEquation, SelbergElement

chi3 = enumerate_characters(3)[1]


def show(title, el):
    ident = identify(el)
    chi = ident.chi_prime
    print(f"\n{title}")
    print(f"  verdict {ident.verdict}; shift {ident.A_shift:+.9f} (convention {ident.convention:+d})")
    print(f"  chi' = {chi!r}, q' = {ident.q_prime}, H variation {ident.H_constancy:.2e}")
    for c in ident.candidates:
        print("   candidate", {k: v for k, v in c.items()})


show("L(s + 0.5i, chi mod 3)", build_L_element(chi3, 0.5))
show("L(s - 0.5i, chi mod 5)", build_L_element(enumerate_characters(5)[1], -0.5))

# chi mod 3 coefficients paired with a mod-9 functional equation: the
# conductor from the gamma data disagrees with the support, and H carries 3^(s/2)
L3 = build_L_element(chi3)
fe9 = FunctionalEquation(math.sqrt(9 / math.pi), L3.fe.terms, L3.fe.omega, 0)
show("chi mod 3 coefficients, mod-9 descriptor", SelbergElement(fe9, L3.coeffs, "mod-9 descriptor"))


def perturbed(n):
    n = np.asarray(n, dtype=np.int64)
    return chi3.values[n % 3] * np.where(n == 2, 1.3, 1.0)


show("chi mod 3 with a(2) scaled by 1.3", SelbergElement(L3.fe, CoefficientSource(perturbed, 10**8), "perturbed"))
