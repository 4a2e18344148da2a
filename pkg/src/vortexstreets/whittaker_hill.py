"""Elementary eigenfunctions of the Whittaker-Hill operator and background-flow equilibria.

The operator ``-D^2 - (4 alpha s cos 2x + 2 alpha^2 cos 4x)`` has, for odd
``s``, exactly ``s`` eigenfunctions ``phi(x) e^{alpha cos 2x}`` with ``phi`` a
trigonometric polynomial in the modes ``e^{2ikx}``, ``|k| <= (s-1)/2``.
Writing ``psi = phi e^{alpha cos 2x}`` turns the equation into

    -phi'' + 4 alpha sin 2x phi' + 4 alpha (1 - s) cos 2x phi = (lambda + 2 alpha^2) phi,

which is tridiagonal in that Fourier basis and closes on the ``s`` modes.
Eigenfunctions are numbered ``1..s`` by ascending ``Re lambda``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .configuration import RationalWave, VortexConfiguration
from .errors import ValidationError
from .rootfind import DEFAULT_TOL, merge_with_signs, roots_in_strip
from .trigpoly import ExpPolynomial, evaluate, wronskian

MAX_S = 15
DEGENERACY_TOL = 1e-8


@dataclass(frozen=True)
class WHSpec:
    """Darboux data: ``J = I`` plus one more eigenfunction index (1-based)."""

    s: int
    alpha: complex
    J: tuple[int, ...]
    I: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "J", tuple(int(j) for j in self.J))
        object.__setattr__(self, "I", tuple(int(i) for i in self.I))
        object.__setattr__(self, "alpha", complex(self.alpha))
        _check_s(self.s)
        for idx in self.J + self.I:
            if not 1 <= idx <= self.s:
                raise ValidationError(f"whittaker_hill: index {idx} outside 1..{self.s}")
        if len(set(self.J)) != len(self.J) or len(set(self.I)) != len(self.I):
            raise ValidationError("whittaker_hill: repeated index in I or J")
        if not set(self.I) <= set(self.J) or len(self.J) != len(self.I) + 1:
            raise ValidationError(f"whittaker_hill: J must be I plus one index, got J={self.J}, I={self.I}")

    def extra(self) -> int:
        return (set(self.J) - set(self.I)).pop()


@dataclass(frozen=True, eq=False)
class WHEigenfunction:
    """``psi = phi e^{alpha cos 2x}`` with eigenvalue ``lam``."""

    phi: ExpPolynomial
    lam: complex
    alpha: complex
    s: int
    degenerate: bool = False

    def psi(self, x):
        x = np.asarray(x, dtype=complex)
        return evaluate(self.phi, x) * np.exp(self.alpha * np.cos(2 * x))

    def ode_residual(self, x) -> np.ndarray:
        """``(-psi'' - (4 alpha s cos 2x + 2 alpha^2 cos 4x) psi - lam psi) / scale``.

        ``psi''`` is assembled from exact derivatives of ``phi`` and of the
        exponential factor, independent of the Fourier matrix.
        """
        x = np.asarray(x, dtype=complex)
        a, s = self.alpha, self.s
        p0 = evaluate(self.phi, x)
        p1 = evaluate(self.phi.derivative(), x)
        p2 = evaluate(self.phi.derivative(2), x)
        g1 = -2 * a * np.sin(2 * x)
        g2 = -4 * a * np.cos(2 * x)
        d2 = p2 + 2 * g1 * p1 + (g2 + g1 ** 2) * p0
        pot = 4 * a * s * np.cos(2 * x) + 2 * a ** 2 * np.cos(4 * x)
        res = -d2 - pot * p0 - self.lam * p0
        scale = np.maximum.reduce([np.abs(p2), np.abs(g1 * p1), np.abs((g2 + g1 ** 2) * p0),
                                   np.abs(pot * p0), np.abs(self.lam * p0), np.full(np.shape(p0), 1e-300)])
        return res / scale


def _check_s(s: int):
    if not isinstance(s, (int, np.integer)) or s < 1 or s % 2 == 0 or s > MAX_S:
        raise ValidationError(f"whittaker_hill: s must be odd with 1 <= s <= {MAX_S}, got {s}")


def fourier_matrix(s: int, alpha: complex) -> np.ndarray:
    """Matrix of the reduced operator on modes ``k = -(s-1)/2 .. (s-1)/2``.

    Column ``k`` holds the image of ``e^{2ikx}``: ``4k^2`` on the diagonal,
    ``2 alpha (2k+1-s)`` into mode ``k+1`` and ``-2 alpha (2k-1+s)`` into mode
    ``k-1``.  Both couplings vanish at the ends, which is why the span closes.
    """
    _check_s(s)
    h = (s - 1) // 2
    ks = np.arange(-h, h + 1)
    M = np.diag(4.0 * ks ** 2).astype(complex)
    for col, k in enumerate(ks):
        if col + 1 < s:
            M[col + 1, col] = 2 * alpha * (2 * k + 1 - s)
        if col - 1 >= 0:
            M[col - 1, col] = -2 * alpha * (2 * k - 1 + s)
    return M


def _normalize(vec: np.ndarray) -> np.ndarray:
    top = vec[-1]
    if abs(top) > 1e-12 * np.max(np.abs(vec)):
        return vec / top
    return vec / vec[np.argmax(np.abs(vec))]


def wh_eigenfunctions(s: int, alpha: complex) -> list[WHEigenfunction]:
    """The ``s`` elementary eigenfunctions, sorted by ascending ``Re lambda``.

    ``phi`` is normalized so its highest Fourier coefficient is 1 (or its
    largest one, when the highest vanishes).  Eigenvalues closer than
    ``1e-8`` (relative) to another are flagged ``degenerate``.
    """
    _check_s(s)
    alpha = complex(alpha)
    if alpha == 0:
        raise ValidationError("whittaker_hill: alpha must be nonzero")
    mu, vecs = np.linalg.eig(fourier_matrix(s, alpha))
    lam = mu - 2 * alpha ** 2
    order = np.lexsort((lam.imag, lam.real))
    h = (s - 1) // 2
    scale = max(1.0, float(np.max(np.abs(lam))))
    out = []
    for i in order:
        others = np.delete(lam, i)
        degenerate = bool(len(others) and np.min(np.abs(others - lam[i])) < DEGENERACY_TOL * scale)
        v = _normalize(vecs[:, i])
        coeffs = {2 * k: complex(c) for k, c in zip(range(-h, h + 1), v) if c != 0}
        out.append(WHEigenfunction(ExpPolynomial(coeffs), complex(lam[i]), alpha, s, degenerate))
    return out


def wh_wave(spec: WHSpec, eigs: Sequence[WHEigenfunction] | None = None) -> RationalWave:
    """``psi_JI = W(phi_J) / W(phi_I) * e^{alpha cos 2z}``."""
    eigs = wh_eigenfunctions(spec.s, spec.alpha) if eigs is None else eigs
    phis_i = [eigs[i - 1].phi for i in spec.I]
    phis_j = phis_i + [eigs[spec.extra() - 1].phi]
    den = wronskian(phis_i) if phis_i else ExpPolynomial.constant(1)
    return RationalWave(wronskian(phis_j), den, alpha=spec.alpha)


def wh_street(spec: WHSpec, tol: float = DEFAULT_TOL) -> tuple[VortexConfiguration, RationalWave]:
    """Equilibrium in the background flow ``(alpha / 2 pi i) cos 2z``.

    Vortices are the zeros (positive) and poles (negative) of the
    trigonometric Wronskian ratio; the exponential factors never vanish.
    """
    eigs = wh_eigenfunctions(spec.s, spec.alpha)
    wave = wh_wave(spec, eigs)
    num = roots_in_strip(wave.numerator, tol)
    den = roots_in_strip(wave.denominator, tol)
    pos, gam = merge_with_signs(num, den)
    prov = {
        "construction": "whittaker_hill",
        "s": spec.s,
        "alpha": spec.alpha,
        "J": list(spec.J),
        "I": list(spec.I),
        "ordering": "ascending Re lambda",
        "lambdas": [e.lam for e in eigs],
        "tol": tol,
    }
    config = VortexConfiguration(pos, gam, velocity=0j, alpha=spec.alpha, provenance=prov)
    return config, wave


def free_limit_eigenvalues(s: int) -> np.ndarray:
    """Eigenvalues of the ``alpha = 0`` operator on the same modes, ``4k^2``."""
    h = (s - 1) // 2
    return np.sort(4.0 * np.arange(-h, h + 1) ** 2)

