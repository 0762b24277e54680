"""Conductor and coefficient detection from the support of the limit F(alpha).

The limit is concentrated on alpha = m/q with q = pi C Q^2; ``scan_support``
measures |T^(-1-iA) F(alpha, T)| on a rational grid with the exponential-sum
route, ``detect_q`` cross-checks the fitted pi C Q^2 against the common
denominator of the peaks, and ``extract_coeffs`` inverts the limit at
alpha = m/q to recover a(m).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ConductorMismatch
from .transform import eq5_invert, limit_scale, expsum_grid, limit_estimate

DEFAULT_T = 1e5
DEFAULT_GRID_DEN = 60
PEAK_MEDIAN_FACTOR = 3.0
PEAK_FRACTION = 0.1
CONDUCTOR_TOL = 1e-3


@dataclass(frozen=True)
class SupportPoint:
    alpha: Fraction
    magnitude: float


@dataclass(frozen=True)
class CoeffEstimate:
    m: int
    value: complex
    uncertainty: float


@dataclass
class DetectionReport:
    q_detected: int
    support_profile: list
    coeff_table: list
    periodicity_residuals: list  # (alpha, |F(alpha) - F(alpha + 1)|)
    convention: int  # F(s) = L(s + i * convention * A, chi)
    A: float = math.nan
    q_fe: float = math.nan
    peaks: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "q_detected": self.q_detected,
            "q_from_constants": self.q_fe,
            "convention": self.convention,
            "A": self.A,
            "peaks": [str(a) for a in self.peaks],
            "support_profile": [[str(p.alpha), float(p.alpha), p.magnitude] for p in self.support_profile],
            "coeff_table": [
                {"m": c.m, "value": [c.value.real, c.value.imag], "uncertainty": c.uncertainty}
                for c in self.coeff_table
            ],
            "periodicity_residuals": [[str(a), r] for a, r in self.periodicity_residuals],
        }


def grid_denominator(fe, sc, grid_den: int = DEFAULT_GRID_DEN) -> int:
    """lcm(grid_den, round(pi C Q^2)) so the fitted conductor is always on-grid."""
    q = round(math.pi * sc.C * fe.Q**2)
    return math.lcm(int(grid_den), max(1, q))


def scan_support(el, sc, T: float = DEFAULT_T, grid_den: int = DEFAULT_GRID_DEN, M: int = 2) -> list:
    """|T^(-1-iA) F(alpha, T)| for alpha = k/grid_den, 1 <= k <= M grid_den, by alpha."""
    ks = np.arange(1, M * grid_den + 1)
    values = expsum_grid(el, ks, grid_den, T)
    mags = np.abs(values) / T
    return [SupportPoint(Fraction(int(k), grid_den), float(v)) for k, v in zip(ks, mags)]


def find_peaks(profile) -> list:
    """Grid points above max(3 x median, 0.1 x max) of the profile."""
    mags = np.array([p.magnitude for p in profile])
    threshold = max(PEAK_MEDIAN_FACTOR * float(np.median(mags)), PEAK_FRACTION * float(mags.max()))
    return [p.alpha for p in profile if p.magnitude >= threshold and p.magnitude > 0]


def detect_q(profile, sc, fe) -> int:
    """round(pi C Q^2), required to equal the common denominator of the peaks."""
    if not profile:
        raise ValueError("empty support profile")
    q_fe = math.pi * sc.C * fe.Q**2
    peaks = find_peaks(profile)
    q_peaks = math.lcm(*(a.denominator for a in peaks)) if peaks else 0
    q = round(q_fe)
    if q < 1 or abs(q_fe - q) > CONDUCTOR_TOL or q != q_peaks:
        raise ConductorMismatch(q_fe, q_peaks)
    return q


def extract_coeffs(el, sc, q: int, T: float = DEFAULT_T, M=None, norm=None) -> list:
    """a(m) for m = 1..M from the limit at alpha = m/q.

    ``norm`` overrides sqrt(pi C Q^2) in the inversion; it is used when the
    functional equation's conductor disagrees with the support.
    """
    M = q if M is None else M
    out = []
    for m in range(1, M + 1):
        alpha = Fraction(m, q)
        lim = limit_estimate(el, sc, alpha, (T / 2, T), "expsum")
        value = eq5_invert(el, sc, lim.value, alpha, norm)
        factor = 1 / abs(limit_scale(el.fe, sc, alpha, norm))
        out.append(CoeffEstimate(m, value, float(lim.spread * factor)))
    return out


def periodicity_check(el, sc, T: float, alphas) -> list:
    """|F(alpha) - F(alpha + 1)| for each alpha, limits by the expsum route."""
    rows = []
    for alpha in alphas:
        u = limit_estimate(el, sc, alpha, (T / 2, T), "expsum").value
        v = limit_estimate(el, sc, alpha + 1, (T / 2, T), "expsum").value
        rows.append((alpha, float(abs(u - v))))
    return rows


def detect(
    el,
    sc,
    T: float = DEFAULT_T,
    grid_den: int = DEFAULT_GRID_DEN,
    M=None,
    convention: int = -1,
) -> DetectionReport:
    """Scan alpha in (0, 2], detect q, extract a(1..M) (M = q by default) and check periodicity."""
    den = grid_denominator(el.fe, sc, grid_den)
    profile = scan_support(el, sc, T, den, 2)
    q = detect_q(profile, sc, el.fe)
    coeffs = extract_coeffs(el, sc, q, T, q if M is None else M)
    alphas = [Fraction(m, q) for m in range(1, q + 1)]
    resid = periodicity_check(el, sc, T, alphas)
    return DetectionReport(
        q_detected=q,
        support_profile=profile,
        coeff_table=coeffs,
        periodicity_residuals=resid,
        convention=convention,
        A=sc.A,
        q_fe=math.pi * sc.C * el.fe.Q**2,
        peaks=find_peaks(profile),
    )
