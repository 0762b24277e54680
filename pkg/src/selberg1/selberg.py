"""Data model for degree-1 Selberg-class elements and desk-scale axiom audits."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .errors import AxiomViolation, DegreeError, InsufficientData

# growth audit: |a(n)| <= GROWTH_THRESHOLD * n**GROWTH_EXPONENT on the sampled range.
GROWTH_EXPONENT = 0.1
GROWTH_THRESHOLD = 100.0
EULER_TOL = 1e-8
FE_TOL = 1e-6


@dataclass(frozen=True)
class GammaFactorTerm:
    lam: float
    mu: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "mu", complex(self.mu))
        if not self.lam > 0:
            raise AxiomViolation(f"lambda must be positive, got {self.lam}")
        if self.mu.real < 0:
            raise AxiomViolation(f"Re(mu) must be >= 0, got {self.mu}")


@dataclass(frozen=True)
class FunctionalEquation:
    """Phi(s) = Q^s prod_j Gamma(lam_j s + mu_j) F(s) = omega * conj(Phi(1 - conj(s)))."""

    Q: float
    terms: tuple
    omega: complex = 1 + 0j
    pole_order: int = 0

    def __post_init__(self):
        object.__setattr__(self, "Q", float(self.Q))
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "omega", complex(self.omega))
        if not self.Q > 0:
            raise AxiomViolation("Q must be positive")
        if not self.terms:
            raise AxiomViolation("at least one gamma factor is required")
        if abs(abs(self.omega) - 1) > 1e-12:
            raise AxiomViolation(f"|omega| must be 1, got {abs(self.omega)!r}")
        if int(self.pole_order) != self.pole_order or self.pole_order < 0:
            raise AxiomViolation("pole_order must be a non-negative integer")

    @property
    def degree(self) -> float:
        return degree(self)

    def conjugate(self) -> "FunctionalEquation":
        terms = tuple(GammaFactorTerm(t.lam, t.mu.conjugate()) for t in self.terms)
        return FunctionalEquation(self.Q, terms, self.omega.conjugate(), self.pole_order)

    def to_dict(self) -> dict:
        return {
            "Q": self.Q,
            "omega": [self.omega.real, self.omega.imag],
            "terms": [{"lambda": t.lam, "mu": [t.mu.real, t.mu.imag]} for t in self.terms],
            "pole_order": int(self.pole_order),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "FunctionalEquation":
        _reject_unknown(doc, {"Q", "omega", "terms", "pole_order"}, "FE descriptor")
        terms = []
        for t in doc["terms"]:
            _reject_unknown(t, {"lambda", "mu"}, "gamma term")
            terms.append(GammaFactorTerm(t["lambda"], _complex(t.get("mu", [0, 0]))))
        return cls(
            Q=doc["Q"],
            terms=tuple(terms),
            omega=_complex(doc.get("omega", [1, 0])),
            pole_order=int(doc.get("pole_order", 0)),
        )


def degree(fe: FunctionalEquation) -> float:
    """d = 2 * sum of the gamma scale parameters."""
    return 2 * math.fsum(t.lam for t in fe.terms)


@lru_cache(maxsize=4)
def _prime_power_base(n_max: int) -> np.ndarray:
    """base[n] = p if n = p^k (k >= 1), else 0; index 0 unused."""
    base = np.zeros(n_max + 1, dtype=np.int64)
    sieve = np.ones(n_max + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n_max) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    for p in np.flatnonzero(sieve):
        pk = int(p)
        while pk <= n_max:
            base[pk] = p
            pk *= int(p)
    return base


def prime_power_base(n) -> np.ndarray:
    n = np.asarray(n, dtype=np.int64)
    top = int(n.max(initial=1))
    size = 1 << max(10, top.bit_length())
    return _prime_power_base(size)[n]


@dataclass(frozen=True, eq=False)
class CoefficientSource:
    """Vectorised provider of a(n) for 1 <= n <= max_index.

    ``a_func`` maps an int64 array of indices to complex values.  ``b_func``
    (optional) gives the prime-power coefficients b(n) of log F; ``bound`` is
    the audit constant sup|a(n)| used by tail estimates.
    """

    a_func: Callable[[np.ndarray], np.ndarray]
    max_index: int
    b_func: Optional[Callable[[np.ndarray], np.ndarray]] = None
    theta_bound: Optional[float] = None
    bound: float = 1.0
    description: dict = field(default_factory=dict)

    def __post_init__(self):
        first = complex(np.asarray(self.a_func(np.array([1], dtype=np.int64)))[0])
        if abs(first - 1) > 1e-12:
            raise AxiomViolation(f"a(1) must equal 1, got {first}")
        if self.b_func is not None:
            if self.theta_bound is None or not self.theta_bound < 0.5:
                raise AxiomViolation("b(n) data requires theta_bound < 1/2")

    def _check(self, n):
        n = np.asarray(n, dtype=np.int64)
        if n.size and (n.min() < 1 or n.max() > self.max_index):
            raise InsufficientData(
                f"coefficients requested up to {int(n.max())}, available up to {self.max_index}"
            )
        return n

    def a(self, n):
        n = self._check(n)
        out = np.asarray(self.a_func(n), dtype=complex)
        return out[()] if out.ndim == 0 else out

    def b(self, n):
        if self.b_func is None:
            raise InsufficientData("no prime-power data b(n) attached")
        n = self._check(n)
        out = np.where(prime_power_base(n) > 0, np.asarray(self.b_func(n), dtype=complex), 0)
        return out[()] if out.ndim == 0 else out

    def take(self, n_max: int) -> np.ndarray:
        """Array of a(1), ..., a(n_max)."""
        return self.a(np.arange(1, n_max + 1, dtype=np.int64))

    def require(self, n_max: int):
        if n_max > self.max_index:
            raise InsufficientData(
                f"coefficients needed up to {n_max}, available up to {self.max_index}"
            )

    def conjugate(self) -> "CoefficientSource":
        a_func = self.a_func
        b_func = self.b_func
        return CoefficientSource(
            a_func=lambda n: np.conj(a_func(n)),
            max_index=self.max_index,
            b_func=None if b_func is None else (lambda n: np.conj(b_func(n))),
            theta_bound=self.theta_bound,
            bound=self.bound,
            description={**self.description, "conjugated": True},
        )

    @classmethod
    def explicit(cls, values, shift_A0: float = 0.0) -> "CoefficientSource":
        """a(n) = values[n-1] * n^(-i shift_A0)."""
        table = np.asarray(values, dtype=complex).ravel()
        if shift_A0:
            n = np.arange(1, table.size + 1)
            table = table * np.exp(-1j * shift_A0 * np.log(n))
        table.setflags(write=False)

        def a_func(n):
            return table[np.asarray(n) - 1]

        return cls(
            a_func=a_func,
            max_index=table.size,
            bound=float(np.abs(table).max()),
            description={"kind": "explicit", "shift_A0": float(shift_A0)},
        )


@dataclass(frozen=True, eq=False)
class SelbergElement:
    """F with functional-equation data; ``oracle(s)`` returns true F(s) when known."""

    fe: FunctionalEquation
    coeffs: CoefficientSource
    label: str = "F"
    oracle: Optional[Callable[[complex], complex]] = None

    def __post_init__(self):
        d = degree(self.fe)
        if abs(d - 1) > 1e-12:
            raise DegreeError(f"degree {d:g} != 1; only degree-1 elements are supported")

    def conjugate(self) -> "SelbergElement":
        oracle = self.oracle
        return SelbergElement(
            fe=self.fe.conjugate(),
            coeffs=self.coeffs.conjugate(),
            label=f"conj({self.label})",
            oracle=None if oracle is None else (lambda s: complex(oracle(complex(s).conjugate())).conjugate()),
        )


@dataclass
class ValidationReport:
    growth_max: float
    growth_ok: bool
    euler_deviation: Optional[float]
    euler_ok: Optional[bool]
    fe_residuals: list  # (t, residual in units of F, absolute |Phi - omega conj Phi|)
    fe_ok: bool
    heuristic: str = (
        "growth audit uses exponent 0.1 and threshold 100; the constant in the prime-power bound is unspecified"
    )

    @property
    def passed(self) -> bool:
        return self.growth_ok and self.fe_ok and self.euler_ok is not False

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "growth_max": self.growth_max,
            "growth_ok": self.growth_ok,
            "euler_deviation": self.euler_deviation,
            "euler_ok": self.euler_ok,
            "fe_residuals": [list(r) for r in self.fe_residuals],
            "fe_ok": self.fe_ok,
            "heuristic": self.heuristic,
        }


def _euler_deviation(coeffs: CoefficientSource, n_max: int) -> float:
    """Sum over p of |log E_a(p) - log E_b(p)| at sigma = 2.

    E_a is the local factor built from a(p^k), E_b the exponential of the
    b-series; both are truncated to p^k <= n_max and compared as polynomials
    in y = p^-2.
    """
    base = prime_power_base(np.arange(n_max + 1))
    primes = [p for p in range(2, n_max + 1) if base[p] == p]
    total = 0.0
    for p in primes:
        powers = [p]
        while powers[-1] * p <= n_max:
            powers.append(powers[-1] * p)
        idx = np.array(powers, dtype=np.int64)
        a_k = np.concatenate([[1.0], coeffs.a(idx)])
        b_k = coeffs.b(idx)
        K = len(powers)
        c = np.zeros(K + 1, dtype=complex)
        c[0] = 1
        for k in range(1, K + 1):
            c[k] = np.dot(b_k[:k], c[k - 1 :: -1][:k]) / k
        y = float(p) ** -2
        ys = y ** np.arange(K + 1)
        total += abs(np.log(np.dot(a_k, ys)) - np.log(np.dot(c, ys)))
    return total


def fe_residual(el: SelbergElement, t: float, X: float = 2000.0):
    """Functional-equation residual on the critical line at height t.

    Returns ``(residual_F, residual_abs)`` where residual_F is measured in
    units of F and residual_abs = |Phi(s) - omega conj(Phi(1 - conj s))|.
    """
    from .complexfn import gamma_factor_log
    from .smoothing import extrapolated_value

    s = complex(0.5, t)
    F = extrapolated_value(el, s, X=X).value
    g = s * math.log(el.fe.Q) + gamma_factor_log(el.fe, s)
    mismatch = abs(F - el.fe.omega * np.exp(np.conj(g) - g) * np.conj(F))
    return float(mismatch), float(mismatch * abs(np.exp(g)))


def validate_axioms(
    el: SelbergElement, sample_budget: int = 10_000, ts=(5.0, 10.0, 20.0), X: float = 2000.0
) -> ValidationReport:
    """Spot-check coefficient growth, the Euler product and the functional equation on the first ``sample_budget`` coefficients."""
    if el.coeffs.max_index < sample_budget:
        raise InsufficientData(
            f"validation needs {sample_budget} coefficients, only {el.coeffs.max_index} available"
        )
    n = np.arange(1, sample_budget + 1, dtype=np.int64)
    growth = float(np.max(np.abs(el.coeffs.a(n)) / n**GROWTH_EXPONENT))
    euler_dev = euler_ok = None
    if el.coeffs.b_func is not None:
        euler_dev = _euler_deviation(el.coeffs, sample_budget)
        euler_ok = euler_dev <= EULER_TOL
    rows = [(float(t), *fe_residual(el, t, X)) for t in ts]
    return ValidationReport(
        growth_max=growth,
        growth_ok=growth <= GROWTH_THRESHOLD,
        euler_deviation=euler_dev,
        euler_ok=euler_ok,
        fe_residuals=rows,
        fe_ok=all(r[1] <= FE_TOL for r in rows),
    )


# ---------------------------------------------------------------------------
# File formats


def _complex(pair) -> complex:
    if isinstance(pair, (int, float)):
        return complex(pair)
    re, im = pair
    return complex(re, im)


def _reject_unknown(doc: dict, allowed: set, what: str):
    extra = set(doc) - allowed
    if extra:
        raise ValueError(f"unknown {what} field(s): {sorted(extra)}")


def load_functional_equation(path) -> FunctionalEquation:
    return FunctionalEquation.from_dict(json.loads(Path(path).read_text()))


def dump_functional_equation(fe: FunctionalEquation, path):
    Path(path).write_text(json.dumps(fe.to_dict(), indent=2) + "\n")


COEFF_FIELDS = {
    "character": {"kind", "modulus", "dlog_table", "index", "shift_A0", "max_index"},
    "explicit": {"kind", "values", "shift_A0"},
}


def load_coefficient_doc(doc: dict):
    """Parse a coefficient document.

    Returns ``(source, character, shift_A0)``; ``character`` is None for
    explicit tables.
    """
    kind = doc.get("kind")
    if kind not in COEFF_FIELDS:
        raise ValueError(f"coefficient kind must be 'character' or 'explicit', got {kind!r}")
    _reject_unknown(doc, COEFF_FIELDS[kind], f"{kind} coefficient")
    shift = float(doc.get("shift_A0", 0.0))
    if kind == "explicit":
        values = [_complex(v) for v in doc["values"]]
        return CoefficientSource.explicit(values, shift), None, shift
    from .characters import character_coefficients, enumerate_characters

    group = enumerate_characters(int(doc["modulus"]))
    if "dlog_table" in doc:
        chi = group.from_exponents(doc["dlog_table"])
    else:
        chi = group[int(doc.get("index", 0))]
    src = character_coefficients(chi, shift, max_index=int(doc.get("max_index", 10**8)))
    return src, chi, shift


def load_element(fe_path=None, coeff_path=None, label: Optional[str] = None) -> SelbergElement:
    """Build an element from descriptor files.

    When ``fe_path`` is omitted the coefficient file must describe a
    primitive character and the classical functional equation is used.
    """
    from .characters import build_L_element, l_value

    if coeff_path is None:
        raise ValueError("a coefficient file is required")
    src, chi, shift = load_coefficient_doc(json.loads(Path(coeff_path).read_text()))
    if fe_path is None:
        if chi is None:
            raise ValueError("explicit coefficients need an FE descriptor file")
        el = build_L_element(chi, shift, max_index=src.max_index)
        return el if label is None else SelbergElement(el.fe, el.coeffs, label, el.oracle)
    fe = load_functional_equation(fe_path)
    oracle = None
    if chi is not None:
        oracle = lambda s, chi=chi, shift=shift: l_value(chi, complex(s) + 1j * shift)  # noqa: E731
    return SelbergElement(fe, src, label or Path(coeff_path).stem, oracle)
