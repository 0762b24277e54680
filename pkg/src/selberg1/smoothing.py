"""Smoothed Dirichlet sums  sum_n a(n) n^-s e^(-n/X)  and their error probes.

Besides the plain smoothed sum this module offers ``extrapolated_value``,
which removes the X^-k residue terms of the smoothed sum by Richardson
extrapolation in X (and subtracts the polar term when F has a pole at 1).
It is the evaluator of F off the critical line used by the functional
equation audit and the H-constancy test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .complexfn import log_gamma
from .errors import InsufficientData, OracleUnavailable

_CHUNK = 1 << 20
NUFFT_EPS = 1e-13
_NUFFT_OPTS = {}


def set_threads(n):
    """Cap the worker threads used by the non-uniform FFT (None: library default)."""
    _NUFFT_OPTS.pop("nthreads", None)
    if n is not None:
        _NUFFT_OPTS["nthreads"] = int(n)


@dataclass(frozen=True)
class SmoothedValue:
    value: complex
    t: float
    X: float
    terms_used: int
    truncation_error_bound: float
    sigma: float = 0.5
    extrapolation_error: float = 0.0


def default_X(T: float) -> float:
    """Smoothing length X = T^(4/3) used for the transform at height T."""
    return float(T) ** (4.0 / 3.0)


def tail_cutoff(X: float, tol: float, sigma: float = 0.5, bound: float = 1.0) -> int:
    """Smallest N with bound * N^-sigma * e^(-N/X) * (X + 1) <= tol.

    For sigma >= 0 the left side bounds sum_{n>N} |a(n)| n^-sigma e^(-n/X)
    whenever |a(n)| <= bound.  Negative sigma gets an extra factor 2, valid
    once N >= 2|sigma| X (the summand is then decreasing fast enough).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")

    def excess(N):
        extra = 2.0 if sigma < 0 else 1.0
        return math.log(bound * extra * (X + 1)) - sigma * math.log(N) - N / X - math.log(tol)

    N = max(1.0, 2 * abs(min(sigma, 0.0)) * X)
    step = max(1.0, X)
    while excess(N) > 0:
        N += step
    lo, hi = max(1.0, N - step), N
    while hi - lo > 1:
        mid = math.floor((lo + hi) / 2)
        if excess(mid) > 0:
            lo = mid
        else:
            hi = mid
    return int(math.ceil(hi))


def _chunked_sum(coeffs, s: complex, X: float, N: int) -> complex:
    """sum_{n<=N} a(n) n^-s e^(-n/X); fixed ascending chunk order."""
    total = 0j
    for start in range(1, N + 1, _CHUNK):
        n = np.arange(start, min(N, start + _CHUNK - 1) + 1, dtype=np.int64)
        logn = np.log(n)
        terms = coeffs.a(n) * np.exp(-s * logn - n / X)
        total += complex(np.sum(terms))
    return total


def smoothed_value(el, t: float, X: float, tol: float = 1e-10, sigma: float = 0.5) -> SmoothedValue:
    """sum_{n<=N} a(n) n^(-sigma-it) e^(-n/X) with N from ``tail_cutoff``."""
    if X < 1:
        raise ValueError("X must be >= 1")
    N = tail_cutoff(X, tol, sigma, el.coeffs.bound)
    if N > el.coeffs.max_index:
        raise InsufficientData(
            f"smoothing at X={X:g} needs {N} coefficients, have {el.coeffs.max_index}"
        )
    s = complex(sigma, t)
    value = _chunked_sum(el.coeffs, s, X, N)
    return SmoothedValue(value, float(t), float(X), N, tol, sigma)


def _richardson(values, ratio: float = 2.0):
    """Neville table for v(X_k), X_k = X_0 ratio^k, error expansion in 1/X."""
    table = [list(values)]
    for j in range(1, len(values)):
        prev = table[-1]
        f = ratio**j
        table.append([(f * prev[k + 1] - prev[k]) / (f - 1) for k in range(len(prev) - 1)])
    best = table[-1][0]
    err = abs(best - table[-2][-1]) if len(table) > 1 else math.inf
    return best, err


def _level_sums(el, s: complex, Xs, tol: float):
    Ns = [tail_cutoff(X, tol, s.real, el.coeffs.bound) for X in Xs]
    N = max(Ns)
    el.coeffs.require(N)
    sums = [0j] * len(Xs)
    for start in range(1, N + 1, _CHUNK):
        n = np.arange(start, min(N, start + _CHUNK - 1) + 1, dtype=np.int64)
        base = el.coeffs.a(n) * np.exp(-s * np.log(n))
        for k, (X, Nk) in enumerate(zip(Xs, Ns)):
            if start > Nk:
                continue
            m = n <= Nk
            sums[k] += complex(np.sum(base[m] * np.exp(-n[m] / X)))
    return sums, N


def residue_at_one(el, X: float = 2000.0, levels: int = 4, tol: float = 1e-14) -> complex:
    """Residue of F at s = 1 from sum a(n) e^(-n/X) = r X + F(0) - F(-1)/X + ..."""
    if el.fe.pole_order == 0:
        return 0j
    Xs = [X * 2**k for k in range(levels)]
    sums, _ = _level_sums(el, 0j, Xs, tol)
    best, _ = _richardson([S / Xk for S, Xk in zip(sums, Xs)])
    return complex(best)


def extrapolated_value(el, s, X: float = 2000.0, levels: int = 4, tol: float = 1e-14) -> SmoothedValue:
    """F(s) from smoothed sums at X, 2X, ..., 2^(levels-1) X.

    The smoothed sum equals F(s) + sum_k (-1)^k F(s-k) X^-k / k!, plus
    r Gamma(1-s) X^(1-s) when F has residue r at 1; the polar term is
    subtracted and the power series in 1/X is eliminated by Richardson
    extrapolation.
    """
    s = complex(s)
    Xs = [X * 2**k for k in range(levels)]
    sums, N = _level_sums(el, s, Xs, tol)
    if el.fe.pole_order:
        r = residue_at_one(el, X, levels)
        lg = log_gamma(1 - s)
        sums = [S - r * np.exp(lg + (1 - s) * math.log(Xk)) for S, Xk in zip(sums, Xs)]
    best, err = _richardson(sums)
    return SmoothedValue(complex(best), s.imag, X, N, tol, s.real, float(err))


def dirichlet_polynomial(weights, log_n, ts, method: str = "auto", eps: float = NUFFT_EPS):
    """sum_n weights[n] exp(-i t log_n[n]) at every t in ``ts``.

    ``method='nufft'`` uses a type-3 non-uniform FFT (finufft); ``'direct'``
    is the dense O(len(ts) * len(weights)) evaluation.
    """
    ts = np.ascontiguousarray(ts, dtype=float)
    weights = np.ascontiguousarray(weights, dtype=complex)
    log_n = np.ascontiguousarray(log_n, dtype=float)
    if method == "auto":
        method = "nufft" if ts.size * weights.size > 5e7 else "direct"
    if method == "nufft":
        import finufft

        return finufft.nufft1d3(log_n, weights, ts, isign=-1, eps=eps, **_NUFFT_OPTS)
    if method != "direct":
        raise ValueError(f"unknown method {method!r}")
    out = np.empty(ts.size, dtype=complex)
    block = max(1, int(4e6 // max(weights.size, 1)))
    for i in range(0, ts.size, block):
        phase = np.outer(ts[i : i + block], log_n)
        out[i : i + block] = np.exp(-1j * phase) @ weights
    return out


def smoothed_weights(el, X: float, tol: float = 1e-10, sigma: float = 0.5):
    """(weights, log n) for a(n) n^-sigma e^(-n/X), n <= tail cutoff."""
    N = tail_cutoff(X, tol, sigma, el.coeffs.bound)
    el.coeffs.require(N)
    n = np.arange(1, N + 1, dtype=np.int64)
    log_n = np.log(n)
    return el.coeffs.a(n) * np.exp(-sigma * log_n - n / X), log_n


def smoothed_values(el, ts, X: float, tol: float = 1e-10, sigma: float = 0.5, method: str = "auto"):
    """Smoothed sums at many heights at once."""
    weights, log_n = smoothed_weights(el, X, tol, sigma)
    return dirichlet_polynomial(weights, log_n, ts, method)


@dataclass(frozen=True)
class LemmaProbe:
    t: float
    rows: list  # (X, |smoothed - truth|)
    slope: float  # least-squares d log(error) / d log X

    def to_dict(self) -> dict:
        return {"t": self.t, "rows": [list(r) for r in self.rows], "slope": self.slope}


def loglog_slope(xs, ys) -> float:
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def lemma_error_probe(el, t: float, Xs, tol: float = 1e-10) -> LemmaProbe:
    """|smoothed_value - F(1/2+it)| against the element's independent oracle."""
    if el.oracle is None:
        raise OracleUnavailable(f"{el.label}: no independent evaluator for F")
    truth = complex(el.oracle(complex(0.5, t)))
    rows = [(float(X), abs(smoothed_value(el, t, X, tol).value - truth)) for X in Xs]
    slope = loglog_slope([r[0] for r in rows], [r[1] for r in rows]) if len(rows) > 1 else math.nan
    return LemmaProbe(float(t), rows, slope)
