"""Complex special functions on vertical lines.

``log_gamma`` and ``digamma`` use the Stirling series after raising the
argument until its real part is at least 10; the shifted-out factors are
accumulated as a sum of principal logarithms, which keeps ``Im log_gamma``
continuous along any vertical line (no 2*pi jumps).  ``hurwitz_zeta`` is an
Euler-Maclaurin evaluator used as an independent source of L-values.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import PoleError, PrecisionError

# B_2, B_4, ..., B_20
_BERNOULLI_EVEN = (
    1 / 6,
    -1 / 30,
    1 / 42,
    -1 / 30,
    5 / 66,
    -691 / 2730,
    7 / 6,
    -3617 / 510,
    43867 / 798,
    -174611 / 330,
)
_STIRLING_TERMS = 8
_SHIFT_TARGET = 10.0
_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)


def _prepare(z):
    arr = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite argument")
    poles = (arr.imag == 0) & (arr.real <= 0) & (arr.real == np.round(arr.real))
    if np.any(poles):
        raise PoleError(f"gamma pole at {arr[poles].ravel()[0].real:g}")
    return arr


def _shift(z):
    shift = np.maximum(0, np.ceil(_SHIFT_TARGET - z.real)).astype(np.int64)
    return shift, z + shift


def log_gamma(z):
    """Principal branch of log Gamma(z); accepts scalars or arrays."""
    z = _prepare(z)
    shift, w = _shift(z)
    acc = np.zeros_like(z)
    for k in range(int(shift.max(initial=0))):
        m = shift > k
        acc[m] += np.log(z[m] + k)
    inv = 1.0 / w
    inv2 = inv * inv
    series = np.zeros_like(w)
    power = inv
    for k in range(1, _STIRLING_TERMS + 1):
        series += _BERNOULLI_EVEN[k - 1] / (2 * k * (2 * k - 1)) * power
        power = power * inv2
    out = (w - 0.5) * np.log(w) - w + _HALF_LOG_2PI + series - acc
    return out[()] if out.ndim == 0 else out


def digamma(z):
    """psi(z) = Gamma'(z)/Gamma(z), same shifting scheme as ``log_gamma``."""
    z = _prepare(z)
    shift, w = _shift(z)
    acc = np.zeros_like(z)
    for k in range(int(shift.max(initial=0))):
        m = shift > k
        acc[m] += 1.0 / (z[m] + k)
    inv2 = 1.0 / (w * w)
    series = np.zeros_like(w)
    power = inv2
    for k in range(1, _STIRLING_TERMS + 1):
        series += _BERNOULLI_EVEN[k - 1] / (2 * k) * power
        power = power * inv2
    out = np.log(w) - 0.5 / w - series - acc
    return out[()] if out.ndim == 0 else out


def gamma_factor_log(fe, s):
    """sum_j log Gamma(lambda_j s + mu_j) for the gamma factor of ``fe``."""
    s = np.asarray(s, dtype=complex)
    total = np.zeros_like(s)
    for term in fe.terms:
        total = total + log_gamma(term.lam * s + term.mu)
    return total[()] if total.ndim == 0 else total


def _euler_maclaurin_zeta(s, a, n_shift, n_corr):
    n = np.arange(n_shift, dtype=float) + a
    head = np.exp(-s * np.log(n)).sum()
    x = n_shift + a
    log_x = math.log(x)
    value = head + np.exp((1 - s) * log_x) / (s - 1) + 0.5 * np.exp(-s * log_x)
    poch = s  # rising factorial (s)_{2k-1}
    for k in range(1, n_corr + 1):
        coef = _BERNOULLI_EVEN[k - 1] / math.factorial(2 * k)
        value += coef * poch * np.exp((-s - 2 * k + 1) * log_x)
        poch *= (s + 2 * k - 1) * (s + 2 * k)
    # poch now holds (s)_{2M+1}
    m = n_corr
    sigma = s.real
    denom = sigma + 2 * m + 1
    if denom <= 0:
        return complex(value), math.inf
    bound = (
        abs(poch)
        * abs(_BERNOULLI_EVEN[m])
        / math.factorial(2 * m + 2)
        * math.exp((-sigma - 2 * m - 1) * log_x)
        / denom
    )
    return complex(value), bound


def hurwitz_zeta(s, a=1.0, *, tol=1e-12, n_corr=8, full_output=False):
    """Hurwitz zeta(s, a) = sum_{n>=0} (n+a)^(-s), analytically continued.

    The shift length starts at ``max(10, 2|t|)`` and is doubled (up to six
    times) until the Euler-Maclaurin remainder bound is below ``tol``.
    With ``full_output`` the pair ``(value, error_bound)`` is returned.
    """
    s = complex(s)
    a = float(a)
    if not 0 < a <= 1:
        raise ValueError("a must lie in (0, 1]")
    if s == 1:
        raise PoleError("hurwitz_zeta has a pole at s = 1")
    n_shift = max(10, math.ceil(2 * abs(s.imag)))
    for _ in range(7):
        value, bound = _euler_maclaurin_zeta(s, a, n_shift, n_corr)
        if bound <= tol:
            return (value, bound) if full_output else value
        n_shift *= 2
    raise PrecisionError(
        f"Euler-Maclaurin tail {bound:.3g} exceeds tolerance {tol:.3g} at s={s}"
    )
