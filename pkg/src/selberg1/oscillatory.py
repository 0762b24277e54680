"""Quadrature for integrals with slowly varying log-type phases.

Panels are sized from a local bound on the phase rate |d phase/dt|: width
<= min(cap, 1/(4 rate)), or the cap alone where the rate drops below 0.05
(near a stationary point).  Each panel is integrated with 16-point
Gauss-Legendre, both whole and as two halves; the difference is the panel's
error estimate and panels over their share of the tolerance are split.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import EnvelopeViolation, QuadratureBudgetExceeded

GL_ORDER = 16
STATIONARY_RATE = 0.05
_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(GL_ORDER)


@dataclass(frozen=True)
class OscIntegralResult:
    value: complex
    abs_error_estimate: float
    panels_used: int


def _panel_edges(a, b, phase_rate, width_cap):
    grid = np.linspace(a, b, max(4097, int(math.ceil((b - a) / width_cap)) * 4 + 1))
    rate = np.abs(np.asarray(phase_rate(grid), dtype=float))
    width = np.where(rate < STATIONARY_RATE, width_cap, np.minimum(width_cap, 0.25 / np.maximum(rate, 1e-300)))
    density = 1.0 / width
    cell = np.maximum(density[:-1], density[1:]) * np.diff(grid)
    cum = np.concatenate([[0.0], np.cumsum(cell)])
    n_panels = max(1, int(math.ceil(cum[-1] * 1.05)))
    edges = np.interp(np.linspace(0, cum[-1], n_panels + 1), cum, grid)
    edges[0], edges[-1] = a, b
    return edges


def _gl_batch(f, left, right):
    """Whole-panel and two-half GL sums for every panel, one batched call to f."""
    half = 0.5 * (right - left)
    mid = 0.5 * (right + left)
    quarter = 0.5 * half
    nodes = np.concatenate(
        [
            (mid[:, None] + half[:, None] * _NODES).ravel(),
            (mid[:, None] - quarter[:, None] + quarter[:, None] * _NODES).ravel(),
            (mid[:, None] + quarter[:, None] + quarter[:, None] * _NODES).ravel(),
        ]
    )
    vals = np.asarray(f(nodes), dtype=complex).reshape(3, left.size, GL_ORDER)
    whole = half * (vals[0] @ _WEIGHTS)
    halves = quarter * (vals[1] @ _WEIGHTS + vals[2] @ _WEIGHTS)
    magnitude = quarter * (np.abs(vals[1]) @ _WEIGHTS + np.abs(vals[2]) @ _WEIGHTS)
    return whole, halves, magnitude


def adaptive_osc_quadrature(
    f,
    a: float,
    b: float,
    phase_rate,
    tol: float = 1e-10,
    *,
    width_cap: float = 1.0,
    max_panels: int = 4_000_000,
) -> OscIntegralResult:
    """Integrate a vectorised complex integrand ``f`` over [a, b].

    ``phase_rate(t)`` must bound the local phase derivative of ``f``.
    ``tol`` is an absolute tolerance on the summed panel error estimates.
    """
    if not a < b:
        raise ValueError("need a < b")
    edges = _panel_edges(a, b, phase_rate, width_cap)
    left, right = edges[:-1], edges[1:]
    # phases of size ~t lose about eps * t to rounding; panels whose error is
    # at that level are accepted (the error still enters the reported total)
    noise = 8 * np.finfo(float).eps * max(1.0, abs(a), abs(b))
    done_left, done_val, done_err = [], [], []
    total_panels = left.size
    while left.size:
        whole, halves, magnitude = _gl_batch(f, left, right)
        err = np.abs(whole - halves)
        share = tol * (right - left) / (b - a)
        ok = err <= np.maximum(share, noise * magnitude)
        done_left.append(left[ok])
        done_val.append(halves[ok])
        done_err.append(err[ok])
        if ok.all():
            break
        bad_l, bad_r = left[~ok], right[~ok]
        mid = 0.5 * (bad_l + bad_r)
        total_panels += bad_l.size
        if total_panels > max_panels:
            raise QuadratureBudgetExceeded(
                f"{total_panels} panels exceed the budget of {max_panels} (tol={tol:g})"
            )
        left = np.concatenate([bad_l, mid])
        right = np.concatenate([mid, bad_r])
    lefts = np.concatenate(done_left)
    order = np.argsort(lefts, kind="stable")
    values = np.concatenate(done_val)[order]
    errs = np.concatenate(done_err)[order]
    return OscIntegralResult(complex(np.sum(values)), float(np.sum(errs)), int(lefts.size))


def power_kernel_integral(x: float, A: float, alpha: float, T: float, tol: float = 1e-12) -> OscIntegralResult:
    """Integral of x^(it) t^(iA) over [alpha T, 2 alpha T].

    x = 1 uses the closed form; otherwise one integration by parts leaves
    -(A / log x) * integral of x^(it) t^(iA - 1), done by quadrature.
    """
    a, b = alpha * T, 2 * alpha * T
    if x == 1:
        if A == 0:
            return OscIntegralResult(complex(b - a), 0.0, 1)
        p = 1 + 1j * A
        value = (cmath.exp(p * math.log(b)) - cmath.exp(p * math.log(a))) / p
        return OscIntegralResult(value, 0.0, 1)
    lx = math.log(x)

    def kernel(t):
        return np.exp(1j * t * lx + 1j * A * np.log(t))

    boundary = (kernel(np.array([b]))[0] - kernel(np.array([a]))[0]) / (1j * lx)
    if A == 0:
        value, err, panels = boundary, 0.0, 1
    else:
        rem = adaptive_osc_quadrature(
            lambda t: kernel(t) / t,
            a,
            b,
            lambda t: abs(lx) + abs(A) / t,
            tol * abs(lx / A),
        )
        value = boundary - A / lx * rem.value
        err = abs(A / lx) * rem.abs_error_estimate
        panels = rem.panels_used
    envelope = (2 + abs(A) * math.log(2)) / abs(lx)
    if abs(value) > envelope * (1 + 1e-9) + err:
        raise EnvelopeViolation(f"|value|={abs(value):.6g} exceeds {envelope:.6g}")
    return OscIntegralResult(complex(value), err, panels)


def e(x: float) -> complex:
    """e(x) = exp(2 pi i x), with x reduced mod 1 first."""
    return cmath.exp(2j * math.pi * (x - math.floor(x)))


def stationary_phase(t, n, alpha):
    return t * np.log(t / (2 * math.pi * math.e * n * alpha)) - math.pi / 4


def stationary_kernel(n: int, alpha: float, T: float, tol=None) -> OscIntegralResult:
    """Integral over [alpha T, 2 alpha T] of exp(i t log(t/(2 pi e n alpha)) - i pi/4).

    ``tol`` defaults to 1e-12 times the interval length.
    """
    if T < 10:
        raise ValueError("T must be >= 10")
    if tol is None:
        tol = 1e-12 * alpha * T
    scale = 2 * math.pi * n * alpha
    return adaptive_osc_quadrature(
        lambda t: np.exp(1j * stationary_phase(t, n, alpha)),
        alpha * T,
        2 * alpha * T,
        lambda t: np.abs(np.log(t / scale)),
        tol,
    )


def stationary_main_term(n: int, alpha: float) -> complex:
    """2 pi sqrt(n alpha) e(-n alpha), the contribution of t* = 2 pi n alpha."""
    return 2 * math.pi * math.sqrt(n * alpha) * e(-n * alpha)


def stationary_envelope(n: int, T: float) -> float:
    """T^(2/5) + min(sqrt T, 1/|log(T/2 pi n)|) + min(sqrt T, 1/|log(T/pi n)|)."""
    root = math.sqrt(T)

    def near(ratio):
        lg = abs(math.log(ratio))
        return root if lg == 0 else min(root, 1 / lg)

    return T**0.4 + near(T / (2 * math.pi * n)) + near(T / (math.pi * n))
