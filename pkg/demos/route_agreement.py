"""Integral route against the exponential-sum shortcut, with the gap split in two.

The gap between the quadrature of the smoothed values and 2 pi sum a(n) e(-n alpha)
has a smoothing part, 2 pi sum a(n) (1 - e^(-n/X)) e(-n alpha) with X = T^(4/3),
and a stationary-phase part.  Each shrinks as T grows, but their sum need not
shrink monotonically.

Run: python3 demos/route_agreement.py
"""

import math
from fractions import Fraction

import numpy as np

from selberg1 import build_L_element, enumerate_characters, stirling_constants
from selberg1.smoothing import default_X
from selberg1.transform import e_neg, support_range, transform_expsum, transform_quadrature

for q, alpha in ((1, Fraction(1)), (4, Fraction(1, 4)), (4, Fraction(1))):
    el = build_L_element(enumerate_characters(q)[q > 1])
    sc = stirling_constants(el.fe)
    print(f"\n{el.label}, alpha = {alpha}")
    print(f"  {'T':>6}  {'|quad-exp|/T':>12}  {'smoothing':>10}  {'stationary':>10}")
    for T in (1e3, 2e3, 4e3):
        lo, hi = support_range(T)
        n = np.arange(lo, hi + 1)
        smoothed = 2 * math.pi * np.sum(el.coeffs.a(n) * np.exp(-n / default_X(T)) * e_neg(n, alpha))
        quad = transform_quadrature(el, sc, alpha, T).value
        exp = transform_expsum(el, alpha, T).value
        print(f"  {T:6.0f}  {abs(quad - exp) / T:12.5f}  {abs(smoothed - exp) / T:10.5f}  {abs(quad - smoothed) / T:10.5f}")
