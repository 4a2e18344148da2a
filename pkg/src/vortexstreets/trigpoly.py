"""Quasi-polynomials ``P(e^{iz}) e^{i kappa z}`` and their Wronskians.

Every Wronskian that appears in the vortex constructions is a Laurent
polynomial in ``u = e^{iz}`` times an optional exponential factor
``e^{i kappa z}``.  The ring is closed under multiplication and under
``d/dz``, so Wronskians can be expanded exactly (no numeric LU): term by
term through the Vandermonde product for exponentials, or by cofactor
expansion when that would need too many terms.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from types import MappingProxyType
from typing import Any, Iterable, Mapping, Sequence

import mpmath as mp
import numpy as np

from .errors import ValidationError

MAX_WRONSKIAN_SIZE = 8
MAX_PRODUCT_TERMS = 200_000


def _normalize(coeffs: Mapping[int, complex]) -> dict[int, complex]:
    # only exact zeros are dropped; no epsilon pruning at this layer
    out = {}
    for n in sorted(coeffs):
        c = complex(coeffs[n])
        if c != 0:
            out[int(n)] = c
    return out


@dataclass(frozen=True, eq=False)
class ExpPolynomial:
    """Sparse Laurent polynomial in ``u = e^{iz}`` times ``e^{i spectral z}``.

    Parameters
    ----------
    coeffs : mapping int -> complex
        ``{n: c_n}`` for the terms ``c_n u^n``.  Zero coefficients are
        dropped on construction.
    spectral : complex
        The exponent ``kappa`` of the multiplicative factor ``e^{i kappa z}``.
    """

    coeffs: Mapping[int, complex] = field(default_factory=dict)
    spectral: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "coeffs", MappingProxyType(_normalize(self.coeffs)))
        object.__setattr__(self, "spectral", complex(self.spectral))

    # -- constructors -------------------------------------------------------
    @classmethod
    def constant(cls, c: complex = 1.0) -> "ExpPolynomial":
        return cls({0: c})

    @classmethod
    def exponential(cls, kappa: complex) -> "ExpPolynomial":
        """``e^{i kappa z}``."""
        return cls({0: 1.0}, spectral=kappa)

    @classmethod
    def from_sine(cls, k: int, phi: complex = 0.0) -> "ExpPolynomial":
        """``sin(k z + phi) = (e^{i phi} u^k - e^{-i phi} u^{-k}) / 2i``."""
        if int(k) != k or k <= 0:
            raise ValidationError(f"trigpoly: from_sine needs a positive integer k, got {k!r}")
        k = int(k)
        a = cmath.exp(1j * phi) / 2j
        b = -cmath.exp(-1j * phi) / 2j
        return cls({k: a, -k: b})

    @classmethod
    def from_cosine(cls, k: int, phi: complex = 0.0) -> "ExpPolynomial":
        k = int(k)
        if k == 0:
            return cls.constant(cmath.cos(phi))
        return cls({k: cmath.exp(1j * phi) / 2, -k: cmath.exp(-1j * phi) / 2})

    # -- structure ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(self.coeffs)

    @property
    def min_exponent(self) -> int:
        return min(self.coeffs) if self.coeffs else 0

    @property
    def max_exponent(self) -> int:
        return max(self.coeffs) if self.coeffs else 0

    @property
    def span(self) -> int:
        return self.max_exponent - self.min_exponent

    def parity(self) -> int | None:
        """Common parity (0 or 1) of all exponents, or None if mixed."""
        ps = {n % 2 for n in self.coeffs}
        if len(ps) == 1:
            return ps.pop()
        return None if ps else 0

    def norm(self) -> float:
        """Max coefficient magnitude."""
        return max((abs(c) for c in self.coeffs.values()), default=0.0)

    def coefficient_array(self) -> tuple[int, np.ndarray]:
        """Dense ascending coefficients ``(low, array)`` covering the full span."""
        lo = self.min_exponent
        arr = np.zeros(self.span + 1, dtype=complex)
        for n, c in self.coeffs.items():
            arr[n - lo] = c
        return lo, arr

    def base(self) -> "ExpPolynomial":
        """The same polynomial with the exponential factor removed."""
        return ExpPolynomial(self.coeffs)

    # -- arithmetic ---------------------------------------------------------
    def _check_spectral(self, other: "ExpPolynomial") -> complex:
        if self.is_zero():
            return other.spectral
        if other.is_zero() or self.spectral == other.spectral:
            return self.spectral
        raise ValidationError(
            "trigpoly: cannot add quasi-polynomials with different spectral factors "
            f"({self.spectral} vs {other.spectral})"
        )

    def __add__(self, other):
        if not isinstance(other, ExpPolynomial):
            other = ExpPolynomial.constant(other)
        spectral = self._check_spectral(other)
        out = dict(self.coeffs)
        for n, c in other.coeffs.items():
            out[n] = out.get(n, 0j) + c
        return ExpPolynomial(out, spectral)

    __radd__ = __add__

    def __neg__(self):
        return ExpPolynomial({n: -c for n, c in self.coeffs.items()}, self.spectral)

    def __sub__(self, other):
        if not isinstance(other, ExpPolynomial):
            other = ExpPolynomial.constant(other)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, ExpPolynomial):
            c = complex(other)
            return ExpPolynomial({n: c * a for n, a in self.coeffs.items()}, self.spectral)
        out: dict[int, complex] = {}
        for n, a in self.coeffs.items():
            for m, b in other.coeffs.items():
                out[n + m] = out.get(n + m, 0j) + a * b
        return ExpPolynomial(out, self.spectral + other.spectral)

    __rmul__ = __mul__

    def derivative(self, order: int = 1) -> "ExpPolynomial":
        """Exact ``d/dz``: ``c_n -> i (n + kappa) c_n``."""
        p = self
        for _ in range(order):
            k = p.spectral
            p = ExpPolynomial({n: 1j * (n + k) * c for n, c in p.coeffs.items()}, k)
        return p

    def almost_equal(self, other: "ExpPolynomial", rtol: float = 1e-12) -> bool:
        if self.spectral != other.spectral and not (self.is_zero() or other.is_zero()):
            return False
        keys = set(self.coeffs) | set(other.coeffs)
        scale = max(self.norm(), other.norm(), 1e-300)
        return all(abs(self.coeffs.get(n, 0) - other.coeffs.get(n, 0)) <= rtol * scale for n in keys)

    # -- evaluation ---------------------------------------------------------
    def __call__(self, z):
        return evaluate(self, z)

    def __repr__(self):
        terms = " + ".join(f"({c:.6g})u^{n}" for n, c in self.coeffs.items()) or "0"
        if self.spectral:
            return f"ExpPolynomial[{terms}] * exp(i*{self.spectral:.6g}*z)"
        return f"ExpPolynomial[{terms}]"


def from_sine(k: int, phi: complex = 0.0) -> ExpPolynomial:
    return ExpPolynomial.from_sine(k, phi)


def differentiate(p: ExpPolynomial, order: int = 1) -> ExpPolynomial:
    return p.derivative(order)


def evaluate(p: ExpPolynomial, z, include_spectral: bool = True):
    """Evaluate ``sum c_n e^{inz} * e^{i kappa z}`` at scalar or array ``z``."""
    z_arr = np.asarray(z, dtype=complex)
    if p.is_zero():
        out = np.zeros_like(z_arr)
    else:
        ns = np.fromiter(p.coeffs.keys(), dtype=float)
        cs = np.fromiter(p.coeffs.values(), dtype=complex)
        terms = cs * np.exp(1j * np.multiply.outer(z_arr, ns))
        # sort by magnitude before the sum to limit cancellation error
        terms = np.take_along_axis(terms, np.argsort(np.abs(terms), axis=-1), axis=-1)
        out = terms.sum(axis=-1)
        if include_spectral and p.spectral != 0:
            out = out * np.exp(1j * p.spectral * z_arr)
    if np.ndim(z) == 0:
        return complex(out)
    return out


def log_derivative(p: ExpPolynomial, z):
    """``p'(z)/p(z)`` without ever forming the exponential factor."""
    base = p.base()
    return evaluate(base.derivative(), z) / evaluate(base, z) + 1j * p.spectral


def _vandermonde_terms(terms, spectral, unit):
    """``(power of u, value)`` for every choice of one term per function.

    ``W(e^{i l_1 z}, .., e^{i l_n z}) = prod_{a<b} i (l_b - l_a) e^{i sum l z}``,
    so each value is a plain product with no cancellation.  ``unit`` is the
    imaginary unit in the working number type.
    """
    n = len(terms)
    sign = unit ** (n * (n - 1) // 2)
    for choice in itertools.product(*terms):
        lam = [e + s for (e, _), s in zip(choice, spectral)]
        val = sign
        for _, c in choice:
            val *= c
        for a in range(n):
            for b in range(a + 1, n):
                val *= lam[b] - lam[a]
        if val != 0:
            yield sum(e for e, _ in choice), val


def _exponential_expansion(fs: Sequence[ExpPolynomial]) -> dict[int, complex]:
    """Wronskian coefficients by multilinearity over the exponential terms.

    Terms landing on the same power of ``u`` are summed with ``math.fsum``.
    """
    buckets: dict[int, list[complex]] = {}
    for e, val in _vandermonde_terms([list(f.coeffs.items()) for f in fs], [f.spectral for f in fs], 1j):
        buckets.setdefault(e, []).append(val)
    return {e: complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))
            for e, vals in buckets.items()}


def sine_wronskian_mp(k: Iterable[int], phi: Iterable[complex] | None = None,
                      kappa: complex | None = None) -> tuple[dict[int, Any], Any]:
    """:func:`sine_wronskian` in mpmath at the current working precision.

    The inputs are taken as exact binary numbers.  Returns the coefficients
    ``{power of u: mpc}`` and the spectral exponent.
    """
    k = list(k)
    phi = [0.0] * len(k) if phi is None else list(phi)
    terms, spectral = [], []
    for kj, pj in zip(k, phi):
        e = mp.exp(1j * mp.mpc(pj))
        terms.append([(int(kj), e / mp.mpc(0, 2)), (-int(kj), -1 / (e * mp.mpc(0, 2)))])
        spectral.append(mp.mpc(0))
    if kappa is not None:
        terms.append([(0, mp.mpc(1))])
        spectral.append(mp.mpc(kappa))
    if not terms:
        return {0: mp.mpc(1)}, mp.mpc(0)
    buckets: dict[int, list] = {}
    for e, val in _vandermonde_terms(terms, spectral, mp.mpc(0, 1)):
        buckets.setdefault(e, []).append(val)
    return {e: mp.fsum(vals) for e, vals in buckets.items()}, mp.fsum(spectral)


def wronskian(fs: Sequence[ExpPolynomial]) -> ExpPolynomial:
    """Exact Wronskian ``det[D^r f_c]``.

    Expanded term by term over the exponentials when the number of term
    combinations is moderate (accurate to a few ulps per coefficient),
    otherwise by cofactor expansion.  The spectral factor of the result is
    the sum of those of the inputs.  At most one distinct nonzero spectral
    factor is accepted.
    """
    fs = list(fs)
    n = len(fs)
    if n == 0:
        raise ValidationError("trigpoly: Wronskian of an empty list")
    if n > MAX_WRONSKIAN_SIZE:
        raise ValidationError(f"trigpoly: Wronskian size {n} exceeds {MAX_WRONSKIAN_SIZE}")
    nonzero = {f.spectral for f in fs if f.spectral != 0}
    if len(nonzero) > 1:
        raise ValidationError(f"trigpoly: Wronskian inputs carry distinct spectral factors {sorted(nonzero, key=abs)}")

    total_spectral = sum((f.spectral for f in fs), 0j)
    if math.prod(len(f.coeffs) for f in fs) <= MAX_PRODUCT_TERMS:
        return ExpPolynomial(_exponential_expansion(fs), total_spectral)

    rows = [[f.derivative(r) for f in fs] for r in range(n)]

    @lru_cache(maxsize=None)
    def minor(row: int, cols: tuple[int, ...]) -> ExpPolynomial:
        if len(cols) == 1:
            return rows[row][cols[0]]
        acc = ExpPolynomial()
        for pos, c in enumerate(cols):
            entry = rows[row][c]
            if entry.is_zero():
                continue
            rest = cols[:pos] + cols[pos + 1:]
            term = entry * minor(row + 1, rest)
            acc = acc + term if pos % 2 == 0 else acc - term
        return acc

    result = minor(0, tuple(range(n)))
    return ExpPolynomial(result.coeffs, total_spectral)


def sine_wronskian(k: Iterable[int], phi: Iterable[complex] | None = None, kappa: complex | None = None) -> ExpPolynomial:
    """``W(sin(k_1 z + phi_1), ..., sin(k_n z + phi_n) [, e^{i kappa z}])``.

    An empty ``k`` with no ``kappa`` gives the constant 1 (empty determinant).
    """
    k = list(k)
    phi = [0.0] * len(k) if phi is None else list(phi)
    fs = [ExpPolynomial.from_sine(kj, pj) for kj, pj in zip(k, phi)]
    if kappa is not None:
        fs.append(ExpPolynomial.exponential(kappa))
    if not fs:
        return ExpPolynomial.constant(1.0)
    return wronskian(fs)


@dataclass(frozen=True)
class StreetSpec:
    """Wavenumbers ``k_1 < ... < k_n``, phases ``phi_j`` (mod pi) and ``kappa``."""

    k: tuple[int, ...]
    phi: tuple[complex, ...] = ()
    kappa: complex = 0j

    def __post_init__(self):
        k = tuple(int(x) for x in self.k)
        phi = tuple(complex(p) for p in self.phi) if self.phi else (0j,) * len(k)
        if not k:
            raise ValidationError("trigpoly: StreetSpec needs at least one wavenumber")
        if any(x <= 0 for x in k) or any(b <= a for a, b in zip(k, k[1:])):
            raise ValidationError(f"trigpoly: wavenumbers must be positive and strictly increasing, got {k}")
        if len(phi) != len(k):
            raise ValidationError(f"trigpoly: {len(phi)} phases for {len(k)} wavenumbers")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "kappa", complex(self.kappa))

    @property
    def n(self) -> int:
        return len(self.k)

    def chis(self) -> list[ExpPolynomial]:
        return [ExpPolynomial.from_sine(kj, pj) for kj, pj in zip(self.k, self.phi)]

    def without(self, j: int) -> tuple[tuple[int, ...], tuple[complex, ...]]:
        """``(k^(j), phi^(j))`` with the 1-based entry ``j`` deleted."""
        if not 1 <= j <= self.n:
            raise ValidationError(f"trigpoly: index j={j} outside 1..{self.n}")
        i = j - 1
        return self.k[:i] + self.k[i + 1:], self.phi[:i] + self.phi[i + 1:]
