"""Identify a degree-1 element as a shifted Dirichlet L-function.

The recovered periodic table a(m) m^(-iA) is matched against the characters
mod q, the match is reduced to its primitive inducer chi' mod q', and the
quotient

    H(s) = Q^s G(s) F(s) / ((q'/pi)^(s/2) Gamma((s + i shift + parity)/2) L(s + i shift, chi'))

is sampled at points on both sides of the critical strip; F(s) = L(s + i shift, chi')
is accepted when H is constant there.  Both signs shift = +A and shift = -A are
tried; exactly one should survive for A != 0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .asymptotics import stirling_constants
from .characters import (
    DirichletCharacter,
    build_L_element,
    conductor_and_inducer,
    enumerate_characters,
    l_value,
)
from .complexfn import gamma_factor_log, log_gamma
from .detector import DEFAULT_T, detect, extract_coeffs
from .errors import ConductorMismatch, EvaluationError, NoMatch
from .smoothing import extrapolated_value

MATCH_TOL = 0.2
H_TOL = 1e-6
ZERO_TOL = 1e-8
DEFAULT_SAMPLES = tuple(complex(s, t) for s in (0.3, 0.5, 1.7) for t in (3.0, -3.0, 5.0, -5.0))


@dataclass
class Identification:
    A_shift: float  # F(s) = L(s + i A_shift, chi')
    chi_prime: DirichletCharacter | None
    q_prime: int
    H_samples: list  # (s, H(s))
    H_constancy: float
    verdict: str  # "identified" or "inconsistent"
    A_fitted: float = math.nan
    convention: int = 0  # A_shift = convention * A_fitted
    q_detected: int = 0
    conductor_mismatch: bool = False
    candidates: list = field(default_factory=list)
    coeff_table: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "A_shift": self.A_shift,
            "A_fitted": self.A_fitted,
            "convention": self.convention,
            "q_detected": self.q_detected,
            "conductor_mismatch": self.conductor_mismatch,
            "q_prime": self.q_prime,
            "chi_prime": None if self.chi_prime is None else self.chi_prime.to_dict(),
            "H_constancy": self.H_constancy,
            "H_samples": [
                [[s.real, s.imag], [h.real, h.imag]] for s, h in self.H_samples
            ],
            "candidates": self.candidates,
            "coeff_table": [
                {"m": c.m, "value": [c.value.real, c.value.imag], "uncertainty": c.uncertainty}
                for c in self.coeff_table
            ],
        }


def _table_values(coeff_table):
    return np.array([getattr(c, "value", c) for c in coeff_table], dtype=complex)


def match_character(coeff_table, q: int, A_shift: float) -> DirichletCharacter:
    """Character mod q closest to a(m) m^(-i A_shift), m = 1..q, in max deviation.

    Entries with gcd(m, q) > 1 are compared against 0.
    """
    values = _table_values(coeff_table)
    if values.size < q:
        raise ValueError(f"need a(1..{q}), got {values.size} entries")
    m = np.arange(1, q + 1)
    target = values[:q] * np.exp(-1j * A_shift * np.log(m))
    best, best_dev = None, math.inf
    for chi in enumerate_characters(q):
        dev = float(np.max(np.abs(target - chi.values[m % q])))
        if dev < best_dev:
            best, best_dev = chi, dev
    if best_dev > MATCH_TOL:
        raise NoMatch(f"no character mod {q} within {MATCH_TOL} (closest deviation {best_dev:.3g})")
    return best


def _log_completed_L(s: complex, shift: float, chi: DirichletCharacter) -> complex:
    z = s + 1j * shift
    L = l_value(chi, z)
    if abs(L) < ZERO_TOL:
        raise EvaluationError(f"L(s + i shift, chi') nearly vanishes at s={s}")
    return 0.5 * s * math.log(chi.modulus / math.pi) + complex(log_gamma((z + chi.parity) / 2)) + cmath.log(L)


def verify_H_constant(el, A_shift: float, chi_prime: DirichletCharacter, sample_points=DEFAULT_SAMPLES):
    """(H samples, max |H(s_i)/H(s_0) - 1|); F from extrapolated smoothed sums."""
    regularize = chi_prime.modulus == 1
    samples = []
    for s in sample_points:
        s = complex(s)
        if abs(s - 1) < 0.1 or abs(s + 1j * A_shift - 1) < 0.1:
            raise EvaluationError(f"sample point {s} too close to a pole")
        F = extrapolated_value(el, s).value
        if abs(F) < ZERO_TOL:
            raise EvaluationError(f"F nearly vanishes at s={s}")
        num = s * math.log(el.fe.Q) + complex(gamma_factor_log(el.fe, s)) + cmath.log(F)
        den = _log_completed_L(s, A_shift, chi_prime)
        if regularize:
            # s(s-1) on both sides keeps zeta's polar factor out of the ratio
            reg = cmath.log(s * (s - 1))
            num, den = num + reg, den + reg
        samples.append((s, cmath.exp(num - den)))
    h0 = samples[0][1]
    constancy = max(abs(h / h0 - 1) for _, h in samples)
    return samples, float(constancy)


def _candidate(el, table, q, shift, points):
    try:
        chi = match_character(table, q, -shift)
    except NoMatch as exc:
        return None, {"shift": shift, "match": str(exc)}
    q_prime, chi_prime = conductor_and_inducer(chi)
    samples, constancy = verify_H_constant(el, shift, chi_prime, points)
    info = {"shift": shift, "q_prime": q_prime, "chi_index": chi_prime.index, "H_constancy": constancy}
    return (chi_prime, q_prime, samples, constancy), info


def identify(el, T: float = DEFAULT_T, sample_points=DEFAULT_SAMPLES, sc=None) -> Identification:
    """Constants, detection, character match, inducer and H test in sequence."""
    sc = stirling_constants(el.fe) if sc is None else sc
    mismatch = False
    try:
        report = detect(el, sc, T)
        q, table = report.q_detected, report.coeff_table
    except ConductorMismatch as exc:
        mismatch = True
        q = int(exc.q_peaks)
        if q < 1:
            raise
        table = extract_coeffs(el, sc, q, T, norm=math.sqrt(q))
    signs = (-1,) if abs(sc.A) < 1e-9 else (-1, 1)
    best, best_info, candidates = None, None, []
    for c in signs:
        result, info = _candidate(el, table, q, c * sc.A, sample_points)
        info["convention"] = c
        candidates.append(info)
        if result is not None and (best is None or result[3] < best[3]):
            best, best_info = result, info
    if best is None:
        return Identification(
            A_shift=math.nan,
            chi_prime=None,
            q_prime=0,
            H_samples=[],
            H_constancy=math.inf,
            verdict="inconsistent",
            A_fitted=sc.A,
            q_detected=q,
            conductor_mismatch=mismatch,
            candidates=candidates,
            coeff_table=table,
        )
    chi_prime, q_prime, samples, constancy = best
    ok = constancy <= H_TOL and not mismatch
    return Identification(
        A_shift=best_info["shift"],
        chi_prime=chi_prime,
        q_prime=q_prime,
        H_samples=samples,
        H_constancy=constancy,
        verdict="identified" if ok else "inconsistent",
        A_fitted=sc.A,
        convention=best_info["convention"],
        q_detected=q,
        conductor_mismatch=mismatch,
        candidates=candidates,
        coeff_table=table,
    )


@lru_cache(maxsize=1)
def convention_probe() -> int:
    """Sign c with F(s) = L(s + i c A, chi), A the fitted constant.

    Decided on L(s + 0.5i, chi mod 3): the sign for which H is constant.
    """
    chi = enumerate_characters(3)[1]
    el = build_L_element(chi, 0.5)
    A = stirling_constants(el.fe).A
    passing = []
    for c in (-1, 1):
        _, constancy = verify_H_constant(el, c * A, chi)
        if constancy <= H_TOL:
            passing.append(c)
    if len(passing) != 1:
        raise EvaluationError(f"convention probe is ambiguous: passing signs {passing}")
    return passing[0]
