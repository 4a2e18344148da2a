"""Periodic vortex streets from trigonometric Wronskians.

``psi(kappa, z) = W(chi_1, ..., chi_n, e^{i kappa z}) / W(chi_1, ..., chi_n)``
with ``chi_j = sin(k_j z + phi_j)``.  Zeros of the numerator are vortices of
positive circulation (their multiplicity), zeros of the denominator carry
minus their multiplicity, and the whole row translates with velocity
``-conj(kappa) / 2 pi``.  Circulation signs are those of the complex
potential ``W = log(psi) / 2 pi i``.
"""
from __future__ import annotations

import cmath
import math
from typing import Sequence

import mpmath as mp
import numpy as np

from .configuration import RationalWave, VortexConfiguration
from .errors import CriticalKappaError, NumericalError, ValidationError
from .rootfind import (
    DEFAULT_TOL,
    MATCH_TOL,
    merge_with_signs,
    polish_high_precision,
    reduce_to_strip,
    roots_in_strip,
    strip_distance,
)
from .trigpoly import ExpPolynomial, StreetSpec, evaluate, sine_wronskian, sine_wronskian_mp

CRITICAL_TOL = 1e-8
POLISH_DPS = 40


def critical_index(spec: StreetSpec, tol: float = CRITICAL_TOL) -> int | None:
    """1-based ``j`` with ``kappa = +-k_j`` (within ``tol``), else None."""
    for j, kj in enumerate(spec.k, start=1):
        if abs(spec.kappa - kj) < tol or abs(spec.kappa + kj) < tol:
            return j
    return None


def street_wave(spec: StreetSpec) -> RationalWave:
    """The Baker-Akhiezer ratio for ``spec`` without locating any zeros."""
    num = sine_wronskian(spec.k, spec.phi, kappa=spec.kappa)
    den = sine_wronskian(spec.k, spec.phi)
    return RationalWave(num, den, sine_data=((spec.k, spec.phi, spec.kappa), (spec.k, spec.phi, None)))


def _provenance(spec: StreetSpec, tol: float, **extra) -> dict:
    prov = {
        "construction": "street",
        "k": list(spec.k),
        "phi": list(spec.phi),
        "kappa": spec.kappa,
        "tol": tol,
    }
    prov.update(extra)
    return prov


def _configuration(wave: RationalWave, tol: float, velocity: complex, provenance: dict,
                   match_tol: float = MATCH_TOL) -> VortexConfiguration:
    num = roots_in_strip(wave.numerator, tol)
    den = roots_in_strip(wave.denominator, tol)
    if wave.sine_data is not None:
        with mp.workdps(POLISH_DPS):
            num_mp, den_mp = (sine_wronskian_mp(*data)[0] for data in wave.sine_data)
        num = polish_high_precision(num, num_mp, POLISH_DPS)
        den = polish_high_precision(den, den_mp, POLISH_DPS)
    pos, gam = merge_with_signs(num, den, match_tol)
    provenance = dict(provenance, escaped=num.escaped + den.escaped)
    return VortexConfiguration(pos, gam, velocity=velocity, provenance=provenance)


def build_street(spec: StreetSpec, tol: float = DEFAULT_TOL) -> tuple[VortexConfiguration, RationalWave]:
    """The relative equilibrium ``Sigma_{k, phi, kappa}`` and its wave function.

    Raises
    ------
    CriticalKappaError
        If ``kappa`` is within 1e-8 of some ``+-k_j``; use :func:`build_critical`.
    """
    j = critical_index(spec)
    if j is not None:
        raise CriticalKappaError(
            f"streets: kappa={spec.kappa} is critical (k_{j}={spec.k[j - 1]}); use build_critical(spec, {j})"
        )
    wave = street_wave(spec)
    velocity = -spec.kappa.conjugate() / (2 * math.pi)
    config = _configuration(wave, tol, velocity, _provenance(spec, tol, critical=None))
    return config, wave


def build_critical(spec: StreetSpec, j: int, tol: float = DEFAULT_TOL) -> tuple[VortexConfiguration, RationalWave]:
    """Genuine equilibrium at ``kappa = k_j``: ``psi_j = W_{k^(j)} / W_k``.

    The supplied ``spec.kappa`` is ignored.  For ``n = 1`` the numerator is the
    empty Wronskian 1 and the configuration consists of poles only.
    """
    k_j, phi_j = spec.without(j)
    num = sine_wronskian(k_j, phi_j)
    den = sine_wronskian(spec.k, spec.phi)
    wave = RationalWave(num, den, sine_data=((k_j, phi_j, None), (spec.k, spec.phi, None)))
    crit = StreetSpec(spec.k, spec.phi, spec.k[j - 1])
    config = _configuration(wave, tol, 0j, _provenance(crit, tol, critical=j))
    return config, wave


def closed_form_n2(kappa: complex) -> list[complex]:
    """Positive vortices of ``Sigma_{(1,2), 0, kappa}`` from the quadratic in ``X = e^{2iz}``.

    ``X = ((kappa^2 - 4) +- sqrt(3 (4 - kappa^2))) / ((kappa - 1)(kappa - 2))``,
    ``z = Log(X) / 2i`` reduced to the strip.  Independent of any root finder.
    """
    kappa = complex(kappa)
    if abs(kappa - 1) < CRITICAL_TOL or abs(kappa - 2) < CRITICAL_TOL:
        raise CriticalKappaError(f"streets: closed_form_n2 undefined at critical kappa={kappa}")
    root = cmath.sqrt(3 * (4 - kappa ** 2))
    den = (kappa - 1) * (kappa - 2)
    xs = [((kappa ** 2 - 4) + root) / den, ((kappa ** 2 - 4) - root) / den]
    return [reduce_to_strip(cmath.log(x) / 2j) for x in xs]


def collinear_wavenumbers(n: int, m: int, l: int) -> tuple[int, ...]:
    """``(1, ..., n-m, n-m+2, n-m+4, ..., n+m-2, n+m+l)``."""
    return tuple(range(1, n - m + 1)) + tuple(n - m + 2 * j for j in range(1, m)) + (n + m + l,)


def build_collinear(n: int, m: int, l: int, tol: float = DEFAULT_TOL,
                    real_tol: float = 1e-8) -> VortexConfiguration:
    """Collinear equilibrium ``Sigma(n, m, l)``.

    ``psi = W_k / W_{k^(n)}`` for the wavenumbers of
    :func:`collinear_wavenumbers` with zero phases.  The expected structure
    (``n`` at 0, ``m`` at ``pi/2``, ``l`` real simple vortices symmetric about
    ``pi/2``) is recomputed and checked, not assumed.
    """
    if not (n > m >= 1) or l <= 0 or l % 2:
        raise ValidationError(f"streets: Sigma(n,m,l) needs n > m >= 1 and even l > 0, got ({n},{m},{l})")
    k = collinear_wavenumbers(n, m, l)
    wave = RationalWave(sine_wronskian(k), sine_wronskian(k[:-1]), sine_data=((k, None, None), (k[:-1], None, None)))
    config = _configuration(wave, tol, 0j, {
        "construction": "collinear", "n": n, "m": m, "l": l, "k": list(k), "tol": tol,
    })

    def gamma_at(z):
        i = config.find(z)
        return None if i is None else int(config.circulations[i])

    if gamma_at(0.0) != n or gamma_at(math.pi / 2) != m:
        raise NumericalError(
            f"streets: Sigma({n},{m},{l}) has circulations {gamma_at(0.0)} at 0 and {gamma_at(math.pi / 2)} at pi/2"
        )
    extra = [(z, g) for z, g in zip(config.positions, config.circulations)
             if strip_distance(z, 0.0) > MATCH_TOL and strip_distance(z, math.pi / 2) > MATCH_TOL]
    if len(extra) != l or any(g != 1 for _, g in extra):
        raise NumericalError(f"streets: Sigma({n},{m},{l}) expected {l} unit vortices, got {extra}")
    xs = np.array([z for z, _ in extra])
    if np.max(np.abs(xs.imag)) > real_tol:
        raise NumericalError(f"streets: Sigma({n},{m},{l}) extra vortices are not real: {xs}")
    mirrored = np.sort(math.pi - xs.real)
    if np.max(np.abs(np.sort(xs.real) - mirrored)) > real_tol:
        raise NumericalError(f"streets: Sigma({n},{m},{l}) extra vortices not symmetric about pi/2")
    return config


# -- potentials ---------------------------------------------------------------

def _near_zero(p: ExpPolynomial, z: complex, rel: float = 1e-12) -> bool:
    base = p.base()
    val = abs(evaluate(base, z))
    ns = np.array(list(base.coeffs.keys()), dtype=float)
    size = float(np.sum(np.abs(list(base.coeffs.values())) * np.exp(-ns * complex(z).imag)))
    return val <= rel * size


def complex_potential(wave: RationalWave, z: complex, frame: str = "moving") -> complex:
    """``W = log(psi) / 2 pi i`` (principal branch).

    The fixed-frame potential drops ``e^{i kappa z}``, i.e. equals the moving
    one minus ``kappa z / 2 pi`` modulo integers.
    """
    if _near_zero(wave.numerator, z) or _near_zero(wave.denominator, z):
        raise ValidationError(f"streets: complex potential evaluated at a vortex z={z}")
    return complex(np.log(wave.value(z, frame)) / (2j * math.pi))


def complex_velocity(wave: RationalWave, z, frame: str = "moving"):
    """``dW/dz = f / 2 pi i``; conjugate it to get the fluid velocity."""
    return wave.log_derivative(z, frame) / (2j * math.pi)


def potential_u(spec: StreetSpec | Sequence[ExpPolynomial] | ExpPolynomial, z):
    """``u = -2 (log W)''`` for ``W = W_{k, phi}`` (or a given polynomial)."""
    if isinstance(spec, StreetSpec):
        w = sine_wronskian(spec.k, spec.phi)
    elif isinstance(spec, ExpPolynomial):
        w = spec
    else:
        from .trigpoly import wronskian
        w = wronskian(list(spec))
    zs = np.atleast_1d(np.asarray(z, dtype=complex))
    for zi in zs:
        if _near_zero(w, zi, 1e-10):
            raise ValidationError(f"streets: potential evaluated at a pole z={zi}")
    v = evaluate(w, z)
    d1 = evaluate(w.derivative(), z) / v
    d2 = evaluate(w.derivative(2), z) / v
    return -2 * (d2 - d1 ** 2)


def schrodinger_residual(wave: RationalWave, z, energy: complex | None = None):
    """Relative residual of ``-psi'' + u psi = E psi`` with ``u = -2 (log W_den)''``.

    Returns ``(-psi''/psi + u - E) / scale`` where ``scale`` bounds the
    magnitude of the individual terms; ``E`` defaults to ``kappa^2``.
    """
    if energy is None:
        energy = wave.kappa ** 2
    f = wave.log_derivative(z)
    fp = wave.second_log_derivative(z)
    u = potential_u(wave.denominator, z)
    res = -(fp + f ** 2) + u - energy
    scale = np.maximum.reduce([np.abs(fp), np.abs(f) ** 2, np.abs(u), np.full(np.shape(f), abs(energy)), np.ones(np.shape(f))])
    return res / scale
