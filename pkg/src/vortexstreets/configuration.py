"""Vortex configurations and the wave functions whose zeros and poles they are."""
from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Any

import mpmath as mp
import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import ValidationError
from .rootfind import MATCH_TOL, deflate, reduce_to_strip, strip_distance, x_polynomial
from .trigpoly import ExpPolynomial, evaluate, log_derivative, sine_wronskian_mp

if TYPE_CHECKING:
    from .elliptic import Lattice

PERIOD = math.pi


def _bernoulli(n: int) -> list[Fraction]:
    """Bernoulli numbers ``B_0 .. B_n`` (``B_1 = -1/2``)."""
    b = [Fraction(1)]
    for m in range(1, n + 1):
        b.append(-sum(math.comb(m + 1, j) * b[j] for j in range(m)) / (m + 1))
    return b


_B = _bernoulli(60)
# cot w - 1/w = sum_n c_n w^(2n-1); the series converges for |w| < pi
_COT_SERIES = np.array([float((-1) ** n * 2 ** (2 * n) * _B[2 * n] / math.factorial(2 * n)) for n in range(1, 31)])


def cot_minus_pole(w):
    """``cot w - 1/w`` without the cancellation of the direct formula near 0."""
    w = np.asarray(w, dtype=complex)
    small = np.abs(w) < 1
    ws = np.where(small, w, 0)
    series = ws * np.polynomial.polynomial.polyval(ws * ws, _COT_SERIES)
    wd = np.where(small, 1, w)
    return np.where(small, series, np.cos(wd) / np.sin(wd) - 1 / wd)


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class VortexConfiguration:
    """Point vortices with integer circulations and a common translation velocity.

    ``lattice is None`` means the strip geometry: period ``pi`` along the real
    axis.  Otherwise the configuration lives on the torus of ``lattice``.
    ``velocity`` is ``dz/dt`` of every vortex (the relative equilibrium's
    translation); ``alpha`` is the strength of the background flow with
    complex potential ``(alpha / 2 pi i) cos 2z``.
    """

    positions: np.ndarray
    circulations: np.ndarray
    velocity: complex = 0j
    alpha: complex = 0j
    lattice: "Lattice | None" = None
    provenance: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        pos = _frozen_array(self.positions, complex)
        gam = np.array(self.circulations).reshape(-1)
        if len(pos) != len(gam):
            raise ValidationError(f"configuration: {len(pos)} positions but {len(gam)} circulations")
        if len(gam) and (np.any(gam != np.round(gam)) or np.any(gam == 0)):
            raise ValidationError("configuration: circulations must be nonzero integers")
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "circulations", _frozen_array(gam, int))
        object.__setattr__(self, "velocity", complex(self.velocity))
        object.__setattr__(self, "alpha", complex(self.alpha))

    @property
    def n(self) -> int:
        return len(self.positions)

    def __len__(self):
        return self.n

    @property
    def is_strip(self) -> bool:
        return self.lattice is None

    @property
    def total_circulation(self) -> int:
        return int(self.circulations.sum())

    def circulation_counts(self) -> dict[int, int]:
        vals, counts = np.unique(self.circulations, return_counts=True)
        return {int(v): int(c) for v, c in zip(vals, counts)}

    def replace(self, **changes) -> "VortexConfiguration":
        return replace(self, **changes)

    def sorted(self) -> "VortexConfiguration":
        """Canonical order: by ``Re z`` then ``Im z``."""
        order = np.lexsort((self.positions.imag, self.positions.real))
        return self.replace(positions=self.positions[order], circulations=self.circulations[order])

    def reduced(self) -> "VortexConfiguration":
        """Positions mapped into the fundamental strip or cell."""
        if self.is_strip:
            return self.replace(positions=reduce_to_strip(self.positions, PERIOD))
        return self.replace(positions=self.lattice.reduce_to_cell(self.positions))

    def find(self, z: complex, tol: float = MATCH_TOL) -> int | None:
        """Index of the vortex at ``z`` (modulo periods), or None."""
        if self.n == 0:
            return None
        if self.is_strip:
            d = strip_distance(self.positions, z, PERIOD)
        else:
            d = self.lattice.torus_distance(self.positions, z)
        i = int(np.argmin(d))
        return i if d[i] <= tol else None

    def nearest_distances(self) -> np.ndarray:
        """Distance from each vortex to the nearest other vortex or periodic image."""
        out = np.full(self.n, np.inf)
        for j in range(self.n):
            if self.is_strip:
                d = strip_distance(self.positions, self.positions[j], PERIOD)
                d[j] = np.inf
                d = np.append(d, PERIOD)  # the vortex's own image
            else:
                d = self.lattice.torus_distance(self.positions, self.positions[j])
                d[j] = np.inf
                d = np.append(d, self.lattice.shortest_period())
            out[j] = d.min()
        return out


@dataclass(frozen=True, eq=False)
class RationalWave:
    """``psi(z) = numerator(z) / denominator(z) * e^{alpha cos 2z}``.

    For trigonometric streets the spectral factor ``e^{i kappa z}`` is
    carried by ``numerator`` and ``alpha = 0``; Whittaker-Hill waves have
    plain trigonometric polynomials and ``alpha != 0``.

    ``sine_data`` optionally records how both polynomials were built, as
    ``((k, phi, kappa), (k, phi, None))`` arguments of the sine Wronskian,
    so that they can be rebuilt at higher precision.
    """

    numerator: ExpPolynomial
    denominator: ExpPolynomial
    alpha: complex = 0j
    sine_data: tuple | None = None

    def __post_init__(self):
        if self.denominator.is_zero():
            raise ValidationError("configuration: RationalWave denominator is the zero polynomial")
        if self.denominator.spectral != 0:
            raise ValidationError("configuration: spectral factor must live in the numerator")

    @property
    def kappa(self) -> complex:
        return self.numerator.spectral

    def __call__(self, z, frame: str = "moving"):
        return self.value(z, frame)

    def value(self, z, frame: str = "moving"):
        """``psi(z)``; in the fixed frame the factor ``e^{i kappa z}`` is dropped."""
        include = _frame(frame) == "moving"
        num = evaluate(self.numerator, z, include_spectral=include)
        out = num / evaluate(self.denominator, z)
        if self.alpha != 0:
            out = out * np.exp(self.alpha * np.cos(2 * np.asarray(z, dtype=complex)))
        return out

    def log_derivative(self, z, frame: str = "moving"):
        """``f = psi'/psi`` from exact derivatives of both polynomials."""
        f = log_derivative(self.numerator, z) - log_derivative(self.denominator, z)
        if _frame(frame) == "fixed":
            f = f - 1j * self.kappa
        if self.alpha != 0:
            f = f - 2 * self.alpha * np.sin(2 * np.asarray(z, dtype=complex))
        return f

    def regular_part(self, z0: complex):
        """Order ``m`` of ``psi`` at ``z0`` and ``g(z) = f(z) - m / (z - z0)``.

        The zero of each polynomial at ``z0`` is divided out before anything
        is evaluated, so ``g`` stays accurate next to a multiple vortex where
        evaluating ``f`` directly loses most of its digits.
        """
        x0 = complex(np.exp(2j * z0))
        parts = []
        order = 0
        for p, sign in ((self.numerator, 1), (self.denominator, -1)):
            lo, _, q = x_polynomial(p)
            mult, quotient = deflate(q, x0)
            order += sign * mult
            dq = npoly.polyder(quotient) if len(quotient) > 1 else np.zeros(1, complex)
            parts.append((sign, mult, 1j * (p.spectral + lo), quotient, dq))

        def g(z):
            z = np.asarray(z, dtype=complex)
            w = z - z0
            X = np.exp(2j * z)
            out = np.zeros_like(z)
            for sign, mult, const, quotient, dq in parts:
                term = const + 2j * X * npoly.polyval(X, dq) / npoly.polyval(X, quotient)
                if mult:
                    # 2iX/(X - x0) = i + cot w, minus its pole 1/w
                    term = term + mult * (1j + cot_minus_pole(w))
                out = out + sign * term
            if self.alpha != 0:
                out = out - 2 * self.alpha * np.sin(2 * z)
            return out

        return order, g

    def high_precision_log_derivative(self, dps: int):
        """``f`` in mpmath at ``dps`` digits, rebuilt from ``sine_data``.

        Returns None when the wave carries no construction data.  The
        callable takes and returns mpmath numbers and must be called inside
        ``mpmath.workdps(dps)``.
        """
        if self.sine_data is None or self.alpha != 0:
            return None
        with mp.workdps(dps):
            parts = [(sine_wronskian_mp(*data), sign) for data, sign in zip(self.sine_data, (1, -1))]
        parts = [(list(coeffs.items()), spectral, sign) for (coeffs, spectral), sign in parts]

        def f(z):
            u = mp.exp(1j * z)
            out = mp.mpc(0)
            for terms, spectral, sign in parts:
                powers = [(c * u ** e, e) for e, c in terms]
                num = mp.fsum(t * (e + spectral) for t, e in powers)
                out += sign * 1j * num / mp.fsum(t for t, _ in powers)
            return out

        return f

    def second_log_derivative(self, z):
        """``f'`` (frame independent)."""
        out = 0
        for p, sign in ((self.numerator.base(), 1), (self.denominator, -1)):
            v = evaluate(p, z)
            d1 = evaluate(p.derivative(), z) / v
            d2 = evaluate(p.derivative(2), z) / v
            out = out + sign * (d2 - d1 ** 2)
        if self.alpha != 0:
            out = out - 4 * self.alpha * np.cos(2 * np.asarray(z, dtype=complex))
        return out


def _frame(frame: str) -> str:
    if frame not in ("moving", "fixed"):
        raise ValidationError(f"configuration: frame must be 'moving' or 'fixed', got {frame!r}")
    return frame
