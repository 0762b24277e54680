"""Dirichlet characters from discrete-log tables, Gauss sums and L-elements.

Characters mod q are indexed by exponent vectors on a fixed set of
generators of (Z/qZ)^*: for 2^e (e >= 3) the generators are -1 then 5, for
2^2 it is -1, and for odd p^e a primitive root, components ordered by
increasing prime.  ``enumerate_characters(q)[i]`` is the i-th vector in
lexicographic order.
"""

from __future__ import annotations

import cmath
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .complexfn import hurwitz_zeta
from .errors import AxiomViolation, NoMatch, NotPrimitive
from .selberg import CoefficientSource, FunctionalEquation, GammaFactorTerm, SelbergElement

MAX_MODULUS = 10**6
_VALUE_TOL = 1e-8


def factorize(n: int) -> list:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def euler_phi(n: int) -> int:
    result = n
    for p, _ in factorize(n):
        result -= result // p
    return result


def _primitive_root(p: int) -> int:
    order = p - 1
    factors = [f for f, _ in factorize(order)]
    for g in range(2, p):
        if all(pow(g, order // f, p) != 1 for f in factors):
            return g
    return 1


def _components(q: int):
    """(prime power, order, dlog table over residues mod the prime power)."""
    comps = []
    for p, e in factorize(q):
        pe = p**e
        if p == 2:
            if e == 1:
                continue
            sign = np.full(pe, -1, dtype=np.int64)
            sign[1::4] = 0
            sign[3::4] = 1
            comps.append((pe, 2, sign))
            if e >= 3:
                order = pe // 4
                table = np.full(pe, -1, dtype=np.int64)
                x = 1
                for k in range(order):
                    table[x] = k
                    table[(-x) % pe] = k
                    x = x * 5 % pe
                comps.append((pe, order, table))
            continue
        g = _primitive_root(p)
        if pow(g, p - 1, p * p) == 1 and e > 1:
            g += p
        order = pe - pe // p
        table = np.full(pe, -1, dtype=np.int64)
        x = 1
        for k in range(order):
            table[x] = k
            x = x * g % pe
        comps.append((pe, order, table))
    return comps


@dataclass(frozen=True, eq=False)
class DirichletCharacter:
    """chi mod ``modulus``; ``values[a % modulus]`` is chi(a)."""

    modulus: int
    exponents: tuple
    values: np.ndarray = field(repr=False)
    index: int = 0

    @property
    def parity(self) -> int:
        """0 for even characters, 1 for odd ones."""
        return 0 if self.values[(self.modulus - 1) % self.modulus].real > 0 else 1

    @property
    def is_principal(self) -> bool:
        return all(e == 0 for e in self.exponents)

    @property
    def conductor(self) -> int:
        return conductor_and_inducer(self)[0]

    @property
    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    def __call__(self, n):
        return self.values[np.asarray(n, dtype=np.int64) % self.modulus]

    def __eq__(self, other):
        if not isinstance(other, DirichletCharacter):
            return NotImplemented
        return self.modulus == other.modulus and np.allclose(
            self.values, other.values, atol=_VALUE_TOL
        )

    def __hash__(self):
        return hash((self.modulus, self.exponents))

    def __repr__(self):
        return f"DirichletCharacter(mod {self.modulus}, #{self.index}, exps={self.exponents})"

    def to_dict(self) -> dict:
        return {
            "modulus": self.modulus,
            "index": self.index,
            "dlog_table": list(self.exponents),
            "parity": self.parity,
        }


class CharacterGroup(Sequence):
    """All phi(q) characters mod q; value tables are built on access."""

    def __init__(self, q: int):
        if not 1 <= q <= MAX_MODULUS:
            raise ValueError(f"modulus must lie in [1, {MAX_MODULUS}]")
        self.q = q
        comps = _components(q)
        self.orders = tuple(c[1] for c in comps)
        self.prime_powers = tuple(c[0] for c in comps)
        residues = np.arange(q, dtype=np.int64)
        self._dlogs = [table[residues % pe] for pe, _, table in comps]
        self._units = np.array([math.gcd(int(a), q) == 1 for a in residues])
        self._lcm = math.lcm(*self.orders) if self.orders else 1
        roots = np.exp(2j * np.pi * np.arange(self._lcm) / self._lcm)
        # exact zeros in the components of +-1 and +-i
        self._roots = np.where(np.abs(roots.real) < 1e-15, 0, roots.real) + 1j * np.where(
            np.abs(roots.imag) < 1e-15, 0, roots.imag
        )

    def __len__(self):
        return math.prod(self.orders)

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return [self[i] for i in range(*idx.indices(len(self)))]
        if idx < 0:
            idx += len(self)
        if not 0 <= idx < len(self):
            raise IndexError(idx)
        exps = []
        for order in reversed(self.orders):
            idx, r = divmod(idx, order)
            exps.append(r)
        return self.from_exponents(tuple(reversed(exps)))

    def index_of(self, exponents) -> int:
        idx = 0
        for e, order in zip(exponents, self.orders):
            idx = idx * order + e
        return idx

    def from_exponents(self, exponents) -> DirichletCharacter:
        exponents = tuple(int(e) for e in exponents)
        if len(exponents) != len(self.orders) or any(
            not 0 <= e < o for e, o in zip(exponents, self.orders)
        ):
            raise ValueError(f"exponent vector {exponents} invalid for orders {self.orders}")
        phase = np.zeros(self.q, dtype=np.int64)
        for e, order, dl in zip(exponents, self.orders, self._dlogs):
            phase += e * (self._lcm // order) * dl
        values = np.where(self._units, self._roots[phase % self._lcm], 0)
        values.setflags(write=False)
        return DirichletCharacter(self.q, exponents, values, self.index_of(exponents))

    def from_values(self, values, tol: float = 1e-6) -> DirichletCharacter:
        """Character whose table matches ``values`` on units mod q."""
        values = np.asarray(values, dtype=complex)
        exps = []
        for order, dl in zip(self.orders, self._dlogs):
            a = int(np.flatnonzero((dl == 1) & self._generator_mask(dl))[0])
            k = round(cmath.phase(values[a]) * order / (2 * math.pi)) % order
            exps.append(k)
        chi = self.from_exponents(exps)
        if np.max(np.abs(chi.values - values)[self._units], initial=0) > tol:
            raise NoMatch("values are not a character table mod %d" % self.q)
        return chi

    def _generator_mask(self, own):
        # units whose discrete logs vanish on every other component
        mask = self._units.copy()
        for dl in self._dlogs:
            if dl is not own:
                mask &= dl == 0
        return mask


@lru_cache(maxsize=256)
def enumerate_characters(q: int) -> CharacterGroup:
    return CharacterGroup(q)


def _divisors(n: int) -> list:
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def conductor_and_inducer(chi: DirichletCharacter):
    """(q', chi') with chi' primitive mod q' inducing chi."""
    q = chi.modulus
    units = np.abs(chi.values) > 0.5
    for d in _divisors(q):
        a = 1 + d * np.arange(q // d)
        a = a[units[a % q]]
        if np.all(np.abs(chi.values[a % q] - 1) < _VALUE_TOL):
            break
    values = np.zeros(d, dtype=complex)
    for b in range(d):
        if math.gcd(b, d) != 1:
            continue
        a = b + d * np.arange(q // d)
        a = a[units[a % q]]
        values[b] = chi.values[a[0] % q]
    return d, enumerate_characters(d).from_values(values)


def gauss_sum(chi: DirichletCharacter) -> complex:
    """tau(chi) = sum_a chi(a) e(a/q); primitive characters only."""
    if not chi.is_primitive:
        raise NotPrimitive(f"{chi!r} is not primitive")
    q = chi.modulus
    a = np.arange(q)
    return complex(np.sum(chi.values * np.exp(2j * np.pi * a / q)))


def root_number(chi: DirichletCharacter) -> complex:
    """omega = tau(chi) / (i^parity sqrt(q))."""
    w = gauss_sum(chi) / (1j**chi.parity * math.sqrt(chi.modulus))
    return w / abs(w)


def l_value(chi: DirichletCharacter, s, tol: float = 1e-13) -> complex:
    """L(s, chi) = q^-s sum_a chi(a) zeta(s, a/q) via Hurwitz zeta."""
    s = complex(s)
    q = chi.modulus
    total = 0j
    for a in range(1, q + 1):
        c = chi.values[a % q]
        if c != 0:
            total += c * hurwitz_zeta(s, a / q, tol=tol)
    return complex(cmath.exp(-s * math.log(q)) * total)


def character_coefficients(chi: DirichletCharacter, A0: float = 0.0, max_index: int = 10**8):
    """a(n) = chi(n) n^(-i A0), with b(p^k) = a(p^k) (log of the Euler product)."""
    values = chi.values
    q = chi.modulus

    def a_func(n):
        n = np.asarray(n, dtype=np.int64)
        out = values[n % q]
        if A0:
            out = out * np.exp(-1j * A0 * np.log(n))
        return out

    return CoefficientSource(
        a_func=a_func,
        max_index=max_index,
        b_func=a_func,
        theta_bound=0.0,
        bound=1.0,
        description={"kind": "character", "modulus": q, "dlog_table": list(chi.exponents),
                     "shift_A0": float(A0)},
    )


def build_L_element(chi: DirichletCharacter, A0: float = 0.0, max_index: int = 10**8) -> SelbergElement:
    """The element F(s) = L(s + i A0, chi) with its functional-equation data.

    The root number carries the extra unimodular factor (q/pi)^(-i A0) that
    the shift produces once Q^s is normalised to (q/pi)^(s/2).
    """
    q = chi.modulus
    if q > 1 and not chi.is_primitive:
        raise NotPrimitive(f"{chi!r} is not primitive")
    if q == 1 and A0 != 0:
        raise AxiomViolation("zeta(s + i A0) with A0 != 0 has its pole off s = 1")
    parity = chi.parity
    omega = root_number(chi) * cmath.exp(-1j * A0 * math.log(q / math.pi))
    fe = FunctionalEquation(
        Q=math.sqrt(q / math.pi),
        terms=(GammaFactorTerm(0.5, complex(parity, A0) / 2),),
        omega=omega / abs(omega),
        pole_order=1 if q == 1 else 0,
    )
    shift = "" if A0 == 0 else f"{A0:+g}i"
    label = "zeta(s)" if q == 1 else f"L(s{shift}, chi_{q}#{chi.index})"
    return SelbergElement(
        fe=fe,
        coeffs=character_coefficients(chi, A0, max_index),
        label=label,
        oracle=lambda s: l_value(chi, complex(s) + 1j * A0),
    )


def primitive_characters(q_max: int):
    """All primitive characters with modulus <= q_max (q = 1 gives zeta)."""
    out = []
    for q in range(1, q_max + 1):
        if q % 4 == 2:
            continue
        out.extend(chi for chi in enumerate_characters(q) if chi.is_primitive)
    return out

