"""The weighted critical-line transform F(alpha, T) and its normalised limit.

    F(alpha, T) = alpha^(-1/2) * integral over [alpha T, 2 alpha T] of
                  F(1/2 + it) exp(i t log(t / (2 pi e alpha)) - i pi/4) dt

Three evaluators are offered: ``transform_quadrature`` (smoothed F values
integrated numerically), ``transform_decomposed`` (the same smoothed sum,
integrated term by term with ``stationary_kernel``) and ``transform_expsum``
(the stationary-phase shortcut 2 pi sum a(n) e(-n alpha) over
T <= 2 pi n <= 2T).  ``eq5_predict`` gives the limit F(alpha) in terms of
the functional-equation data and ``eq5_invert`` reads a(m) back from it.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

import numpy as np

from .errors import InsufficientData, QuadratureBudgetExceeded, SupportMismatch
from .oscillatory import adaptive_osc_quadrature, stationary_kernel
from .smoothing import dirichlet_polynomial, default_X, tail_cutoff

QUADRATURE_CEILING = 5e3
SUPPORT_TOL = 1e-6
SMOOTHING_TOL = 1e-10


@dataclass(frozen=True)
class TransformSample:
    alpha: float
    T: float
    value: complex
    route: str
    meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "alpha": float(self.alpha),
            "T": self.T,
            "value": [self.value.real, self.value.imag],
            "route": self.route,
            "meta": self.meta,
        }


@dataclass(frozen=True)
class LimitEstimate:
    alpha: float
    value: complex
    Ts: tuple
    spread: float
    normalized: tuple = ()  # T^(-1-iA) F(alpha, T) for each T

    def to_dict(self) -> dict:
        return {
            "alpha": float(self.alpha),
            "value": [self.value.real, self.value.imag],
            "Ts": list(self.Ts),
            "spread": self.spread,
            "normalized": [[v.real, v.imag] for v in self.normalized],
        }


def _as_rational(alpha):
    if isinstance(alpha, Rational):
        return Fraction(alpha)
    return None


def support_range(T: float):
    """Integers n with T <= 2 pi n <= 2T."""
    lo = math.ceil(T / (2 * math.pi))
    hi = math.floor(T / math.pi)
    return lo, hi


def e_neg(n: np.ndarray, alpha) -> np.ndarray:
    """e(-n alpha) for an integer array n; exact residues when alpha is rational."""
    frac = _as_rational(alpha)
    if frac is not None:
        p, q = frac.numerator, frac.denominator
        r = (-(n % q) * p) % q
        return np.exp(2j * np.pi * r / q)
    x = np.mod(-n * float(alpha), 1.0)
    return np.exp(2j * np.pi * x)


def transform_expsum(el, alpha, T: float) -> TransformSample:
    """2 pi sum_{T <= 2 pi n <= 2T} a(n) e(-n alpha)."""
    lo, hi = support_range(T)
    el.coeffs.require(hi)
    n = np.arange(lo, hi + 1, dtype=np.int64)
    total = complex(np.sum(el.coeffs.a(n) * e_neg(n, alpha))) if n.size else 0j
    return TransformSample(
        float(alpha),
        float(T),
        2 * math.pi * total,
        "expsum",
        {"n_range": [lo, hi], "terms": int(n.size)},
    )


def expsum_grid(el, numerators, den: int, T: float) -> np.ndarray:
    """transform_expsum at every alpha = k/den, k in ``numerators``."""
    lo, hi = support_range(T)
    el.coeffs.require(hi)
    n = np.arange(lo, hi + 1, dtype=np.int64)
    a = el.coeffs.a(n)
    roots = np.exp(-2j * np.pi * np.arange(den) / den)
    ks = np.asarray(numerators, dtype=np.int64)
    out = np.empty(ks.size, dtype=complex)
    block = max(1, int(2e6 // max(n.size, 1)))
    nmod = n % den
    for i in range(0, ks.size, block):
        idx = (ks[i : i + block, None] * nmod[None, :]) % den
        out[i : i + block] = roots[idx] @ a
    return 2 * math.pi * out


def _smoothed_weights(el, X: float, n_max=None):
    N = tail_cutoff(X, SMOOTHING_TOL, 0.5, el.coeffs.bound)
    if n_max is not None:
        N = min(N, int(n_max))
    el.coeffs.require(N)
    n = np.arange(1, N + 1, dtype=np.int64)
    log_n = np.log(n)
    return el.coeffs.a(n) * np.exp(-0.5 * log_n - n / X), log_n


def transform_quadrature(
    el,
    sc,
    alpha,
    T: float,
    tol: float = 1e-6,
    *,
    X=None,
    n_max=None,
    method: str = "auto",
    ceiling: float = QUADRATURE_CEILING,
) -> TransformSample:
    """F(alpha, T) by adaptive quadrature of smoothed F values.

    F(1/2 + it) is replaced by sum a(n) n^(-1/2-it) e^(-n/X), X = T^(4/3)
    unless given; ``n_max`` truncates the sum (used to compare against
    ``transform_decomposed``).
    """
    if T > ceiling:
        raise QuadratureBudgetExceeded(f"T={T:g} exceeds the quadrature ceiling {ceiling:g}")
    alpha_f = float(alpha)
    X = default_X(T) if X is None else float(X)
    weights, log_n = _smoothed_weights(el, X, n_max)
    N = weights.size
    two_pi_alpha = 2 * math.pi * alpha_f

    def integrand(t):
        F = dirichlet_polynomial(weights, log_n, t, method)
        return F * np.exp(1j * (t * np.log(t / (two_pi_alpha * math.e)) - math.pi / 4))

    def rate(t):
        return np.maximum(np.abs(np.log(t / two_pi_alpha)), np.abs(np.log(t / (two_pi_alpha * N))))

    res = adaptive_osc_quadrature(integrand, alpha_f * T, 2 * alpha_f * T, rate, tol * math.sqrt(alpha_f))
    scale = 1 / math.sqrt(alpha_f)
    return TransformSample(
        alpha_f,
        float(T),
        res.value * scale,
        "quadrature",
        {
            "X": X,
            "terms": int(N),
            "panels": res.panels_used,
            "error_estimate": res.abs_error_estimate * scale,
            "A": getattr(sc, "A", None),
        },
    )


def transform_decomposed(el, alpha, T: float, n_max: int, X=None, tol: float = 1e-10) -> TransformSample:
    """Smoothed sum integrated term by term:
    alpha^(-1/2) sum_{n <= n_max} a(n) n^(-1/2) e^(-n/X) * stationary_kernel(n, alpha, T).
    """
    alpha_f = float(alpha)
    X = default_X(T) if X is None else float(X)
    weights, _ = _smoothed_weights(el, X, n_max)
    total, err, panels = 0j, 0.0, 0
    for n, w in enumerate(weights, start=1):
        k = stationary_kernel(n, alpha_f, T, tol)
        total += w * k.value
        err += abs(w) * k.abs_error_estimate
        panels += k.panels_used
    scale = 1 / math.sqrt(alpha_f)
    return TransformSample(
        alpha_f,
        float(T),
        total * scale,
        "decomposed",
        {"X": X, "terms": int(weights.size), "panels": panels, "error_estimate": err * scale},
    )


ROUTES = {"expsum", "quadrature"}


def transform(el, sc, alpha, T: float, route: str = "expsum", **kwargs) -> TransformSample:
    if route == "expsum":
        return transform_expsum(el, alpha, T)
    if route == "quadrature":
        return transform_quadrature(el, sc, alpha, T, **kwargs)
    raise ValueError(f"unknown route {route!r}")


def normalize(value: complex, T: float, A: float) -> complex:
    """T^(-1-iA) * value."""
    return value * cmath.exp(-(1 + 1j * A) * math.log(T))


def limit_estimate(el, sc, alpha, Ts, route: str = "expsum", **kwargs) -> LimitEstimate:
    """T^(-1-iA) F(alpha, T) at the largest T, with the spread over all Ts."""
    Ts = tuple(float(T) for T in Ts)
    if len(Ts) < 2 or any(b <= a for a, b in zip(Ts, Ts[1:])):
        raise ValueError("Ts must be increasing with at least two entries")
    vals = [normalize(transform(el, sc, alpha, T, route, **kwargs).value, T, sc.A) for T in Ts]
    spread = max(abs(u - v) for i, u in enumerate(vals) for v in vals[i + 1 :])
    return LimitEstimate(float(alpha), vals[-1], Ts, float(spread), tuple(vals))


def support_index(fe, sc, alpha):
    """(m, hit): m = nearest integer to pi C Q^2 alpha, hit when within SUPPORT_TOL."""
    x = math.pi * sc.C * fe.Q**2 * float(alpha)
    m = round(x)
    return m, (m >= 1 and abs(x - m) <= SUPPORT_TOL)


def limit_scale(fe, sc, alpha, norm=None) -> complex:
    """omega e^(iB) alpha^(iA) (2^(1+iA) - 1) / ((1+iA) norm), norm = sqrt(pi C) Q by default."""
    A = sc.A
    p = 1 + 1j * A
    kappa = (cmath.exp(p * math.log(2)) - 1) / p
    if norm is None:
        norm = math.sqrt(math.pi * sc.C) * fe.Q
    return fe.omega * cmath.exp(1j * sc.B) * cmath.exp(1j * A * math.log(float(alpha))) * kappa / norm


def eq5_predict(el, sc, alpha) -> complex:
    """Predicted limit F(alpha); zero off the support pi C Q^2 alpha in N."""
    m, hit = support_index(el.fe, sc, alpha)
    if not hit:
        return 0j
    if m > el.coeffs.max_index:
        raise InsufficientData(f"a({m}) needed, available up to {el.coeffs.max_index}")
    a = complex(el.coeffs.a(np.array([m], dtype=np.int64))[0])
    return limit_scale(el.fe, sc, alpha) * a.conjugate()


def eq5_invert(el, sc, value: complex, alpha, norm=None) -> complex:
    """Estimate of a(pi C Q^2 alpha) from a limit value at a support point."""
    m, hit = support_index(el.fe, sc, alpha)
    if norm is None and not hit:
        raise SupportMismatch(f"alpha={float(alpha):g} is not a support point (pi C Q^2 alpha not integral)")
    return (complex(value) / limit_scale(el.fe, sc, alpha, norm)).conjugate()
