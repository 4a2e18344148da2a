"""Residual checks for vortex equilibria, independent of how they were built."""
from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp
import numpy as np

from .configuration import PERIOD, VortexConfiguration
from .errors import NumericalError, ValidationError

COINCIDENT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class EquilibriumReport:
    per_vortex: np.ndarray
    equation_kind: str

    @property
    def max_residual(self) -> float:
        return float(np.max(np.abs(self.per_vortex))) if len(self.per_vortex) else 0.0

    def __len__(self):
        return len(self.per_vortex)


def cot(w):
    """``cot w`` that stays finite for large ``|Im w|``.

    Uses ``cot w = i (q + 1)/(q - 1)`` with ``q = e^{2iw}`` for ``Im w > 0`` and
    the mirrored form otherwise, so the exponential never overflows.
    """
    w = np.asarray(w, dtype=complex)
    w = np.mod(w.real, PERIOD) + 1j * w.imag
    up = w.imag > 0
    q = np.exp(2j * np.where(up, w, -w))
    out = np.where(up, 1j * (q + 1) / (q - 1), -1j * (q + 1) / (q - 1))
    return complex(out) if out.ndim == 0 else out


def _pairwise(config: VortexConfiguration) -> np.ndarray:
    z = config.positions
    diff = z[:, None] - z[None, :]
    off = ~np.eye(len(z), dtype=bool)
    if config.is_strip:
        dx = np.mod(diff.real + PERIOD / 2, PERIOD) - PERIOD / 2
        dist = np.hypot(dx, diff.imag)
    else:
        dist = config.lattice.torus_distance(diff, 0)
    if np.any(dist[off] < COINCIDENT_TOL):
        raise ValidationError("equilibrium: coincident vortices")
    return diff


def cot_sums(config: VortexConfiguration) -> np.ndarray:
    """``S_j = sum_{k != j} Gamma_k cot(z_j - z_k)``."""
    diff = _pairwise(config)
    n = config.n
    c = np.zeros((n, n), dtype=complex)
    off = ~np.eye(n, dtype=bool)
    c[off] = cot(diff[off])
    return c @ config.circulations.astype(complex)


def _require_strip(config, name):
    if not config.is_strip:
        raise ValidationError(f"equilibrium: {name} needs strip periodicity")


def residuals_periodic(config: VortexConfiguration) -> EquilibriumReport:
    """``r_j = (1/2 pi i) sum_{k != j} Gamma_k cot(z_j - z_k) - conj(v)``."""
    _require_strip(config, "residuals_periodic")
    r = cot_sums(config) / (2j * math.pi) - np.conj(config.velocity)
    return EquilibriumReport(r, "periodic")


def residuals_background(config: VortexConfiguration, alpha: complex | None = None) -> EquilibriumReport:
    """``r_i = sum_{j != i} Gamma_j cot(z_i - z_j) - 2 alpha sin 2 z_i``.

    No ``1/2 pi i`` prefactor, so for ``alpha = 0`` this is ``2 pi i`` times
    :func:`residuals_periodic` of the same (velocity-free) configuration.
    """
    _require_strip(config, "residuals_background")
    if config.velocity != 0:
        raise ValidationError("equilibrium: background-flow equilibria must have zero velocity")
    alpha = config.alpha if alpha is None else complex(alpha)
    r = cot_sums(config) - 2 * alpha * np.sin(2 * config.positions)
    return EquilibriumReport(r, "background")


def lattice_constant_C(config: VortexConfiguration) -> complex:
    """``C = a sum Gamma_j z_j + b sum Gamma_j conj(z_j)``."""
    lat = config.lattice
    g = config.circulations
    z = config.positions
    return complex(lat.a * np.sum(g * z) + lat.b * np.sum(g * np.conj(z)))


def zeta_sums(config: VortexConfiguration) -> np.ndarray:
    """``sum_{j != k} Gamma_j zeta(z_k - z_j) + C`` for every vortex ``k``."""
    diff = _pairwise(config)
    lat = config.lattice
    n = config.n
    zmat = np.zeros((n, n), dtype=complex)
    off = ~np.eye(n, dtype=bool)
    zmat[off] = lat.zeta(diff[off])
    return zmat @ config.circulations.astype(complex) + lattice_constant_C(config)


def residuals_doubly_periodic(config: VortexConfiguration, lattice=None) -> EquilibriumReport:
    """``r_k = (1/2 pi i)(sum_{j != k} Gamma_j zeta(z_k - z_j) + C) - conj(v)``.

    Requires zero total circulation; positions are used as given (the
    residuals do not depend on which cell each vortex is drawn in).
    """
    if lattice is not None:
        config = config.replace(lattice=lattice)
    if config.lattice is None:
        raise ValidationError("equilibrium: residuals_doubly_periodic needs a lattice")
    if config.total_circulation != 0:
        raise ValidationError(
            f"equilibrium: doubly periodic equilibria need zero total circulation, got {config.total_circulation}"
        )
    r = zeta_sums(config) / (2j * math.pi) - np.conj(config.velocity)
    return EquilibriumReport(r, "doubly_periodic")


# -- generalised Stieltjes relations -----------------------------------------

def contour_integral_moments(func, center: complex, radius: float, nodes: int, power: int) -> complex:
    """``(1/2 pi i) oint func(z)^power dz`` on a circle, by the trapezoidal rule."""
    theta = 2 * math.pi * np.arange(nodes) / nodes
    e = np.exp(1j * theta)
    vals = np.asarray(func(center + radius * e), dtype=complex)
    return complex(radius * np.mean(vals ** power * e))


def _taylor_coefficients(g, center: complex, radius: float, nodes: int, order: int) -> np.ndarray:
    """First ``order + 1`` Taylor coefficients of ``g`` at ``center`` by FFT on a circle."""
    e = np.exp(2j * math.pi * np.arange(nodes) / nodes)
    c = np.fft.fft(np.asarray(g(center + radius * e), dtype=complex)) / nodes
    return c[: order + 1] / radius ** np.arange(order + 1)


def _power_residues(m: int, a: np.ndarray) -> tuple[list[complex], list[float]]:
    """Residues of ``(m/w + g)^p``, ``p = 2, 4, .., 2|m|``, with ``g = sum a_n w^n``.

    ``Res (m/w + g)^p = sum_{i=1}^{p} C(p, i) m^i [g^{p-i}]_{i-1}``.  Also
    returns the largest term of each sum as the scale of its rounding error.
    """
    top = 2 * abs(m)
    powers = [np.zeros(top, dtype=complex)]
    powers[0][0] = 1
    for _ in range(top):
        powers.append(np.convolve(powers[-1], a[:top])[:top])
    res, scale = [], []
    for p in range(2, top + 1, 2):
        terms = [math.comb(p, i) * m ** i * powers[p - i][i - 1] for i in range(1, p + 1)]
        res.append(complex(sum(terms)))
        scale.append(max(abs(t) for t in terms))
    return res, scale


def _check_winding(winding: complex, vortex: complex, m: int) -> None:
    if not abs(winding - round(winding.real)) < 1e-6:
        raise NumericalError(f"equilibrium: winding number {winding:.6g} around {vortex} is not an integer; "
                             "the contour runs too close to another singularity")
    if round(winding.real) != m:
        raise ValidationError(f"equilibrium: winding number {round(winding.real)} around {vortex} is not {m}")


def _stieltjes_mp(f, vortex: complex, m: int, radius: float, nodes: int, conv_tol: float,
                  dps: int) -> list[complex]:
    """Trapezoidal residues of ``f^p`` with ``f`` and the sums in mpmath."""
    top = 2 * abs(m)
    with mp.workdps(dps):
        z0, r, total = mp.mpc(vortex), mp.mpf(radius), 2 * nodes
        e = [mp.expjpi(mp.mpf(2 * t) / total) for t in range(total)]
        vals = [f(z0 + r * et) for et in e]

        def moment(p, step):
            return mp.fsum(vals[t] ** p * e[t] for t in range(0, total, step)) * r * step / total

        _check_winding(complex(moment(1, 1)), vortex, m)
        out = []
        for p in range(2, top + 1, 2):
            a, b = moment(p, 2), moment(p, 1)
            if abs(a - b) > conv_tol:
                raise NumericalError(
                    f"equilibrium: contour quadrature not converged at {vortex} (order {p}): "
                    f"|diff|={float(abs(a - b)):.2e}"
                )
            out.append(complex(b))
    return out


def generalized_stieltjes(wave, vortex: complex, m: int, radius: float | None = None, nodes: int = 128,
                          neighbours: np.ndarray | None = None, conv_tol: float = 1e-10,
                          precision: int | None = 40) -> list[complex]:
    """Residues of ``f^2, f^4, ..., f^{2|m|}`` at ``vortex``, ``f = psi'/psi``.

    Trapezoidal quadrature of ``f^p`` on a circle, recomputed with twice
    the nodes; disagreement above ``conv_tol`` means the contour runs too
    close to another singularity.  The winding number of ``psi`` around
    the circle must be the integer ``m``.

    Waves built from sines (``high_precision_log_derivative``) are rebuilt
    and integrated with mpmath at ``precision`` digits, raised as needed to
    absorb the cancellation among the ``(m/w)^p`` samples.  Double rounding of
    the Wronskian coefficients alone can leave residues near ``1e-8`` at
    triple vortices.  Otherwise, or with ``precision=None``, ``f = m/w + g``
    is split with ``g`` analytic (taken from ``regular_part`` when the wave
    has one), Taylor coefficients of ``g`` come from the quadrature, and the
    residues follow by the binomial theorem.  In double precision the
    convergence test allows for the rounding level of the binomial sums.
    """
    m = int(m)
    if nodes < 64:
        raise ValidationError("equilibrium: generalized_stieltjes needs at least 64 nodes")
    if radius is None:
        if neighbours is None or len(neighbours) == 0:
            raise ValidationError("equilibrium: give a radius or the neighbouring vortex positions")
        radius = 0.25 * float(np.min(np.abs(np.asarray(neighbours) - vortex)))
    top = 2 * abs(m)

    if precision is not None and hasattr(wave, "high_precision_log_derivative"):
        # digits lost to cancellation: the samples of f^p reach about (2|m|/r)^p
        dps = int(precision + top * max(0.0, math.log10(2 * abs(m) / radius)))
        f = wave.high_precision_log_derivative(dps)
        if f is not None:
            return _stieltjes_mp(f, vortex, m, radius, nodes, conv_tol, dps)

    _check_winding(contour_integral_moments(wave.log_derivative, vortex, radius, 2 * nodes, 1), vortex, m)
    g = None
    if hasattr(wave, "regular_part"):
        order, g = wave.regular_part(vortex)
        if order != m:
            g = None
    if g is None:
        def g(z):
            return wave.log_derivative(z) - m / (np.asarray(z) - vortex)

    res_a, _ = _power_residues(m, _taylor_coefficients(g, vortex, radius, nodes, top))
    coeffs = _taylor_coefficients(g, vortex, radius, 2 * nodes, top)
    res_b, _ = _power_residues(m, coeffs)
    # Cauchy bounds |a_n| <= M / r^n give the size of every binomial term
    bound = np.max(np.abs(g(vortex + radius * np.exp(2j * math.pi * np.arange(nodes) / nodes))))
    _, natural = _power_residues(abs(m), bound / radius ** np.arange(top + 1))
    for p, a, b, s in zip(range(2, top + 1, 2), res_a, res_b, natural):
        if abs(a - b) > max(conv_tol, 1e3 * np.finfo(float).eps * s):
            raise NumericalError(
                f"equilibrium: contour quadrature not converged at {vortex} (order {p}): |diff|={abs(a - b):.2e}"
            )
    return res_b


def stieltjes_report(config: VortexConfiguration, wave, nodes: int = 128) -> dict[int, list[complex]]:
    """Generalised Stieltjes residues at every vortex, radius 0.25 x nearest distance."""
    nn = config.nearest_distances()
    return {
        j: generalized_stieltjes(wave, complex(config.positions[j]), int(config.circulations[j]),
                                 radius=0.25 * float(nn[j]), nodes=nodes)
        for j in range(config.n)
    }


def check_equilibrium(config: VortexConfiguration) -> EquilibriumReport:
    """The residual matching the configuration's geometry.

    Lattice: doubly periodic; strip with a background flow: background;
    otherwise periodic.
    """
    if not config.is_strip:
        return residuals_doubly_periodic(config)
    if config.alpha != 0:
        return residuals_background(config)
    return residuals_periodic(config)
