"""Weierstrass functions, doubly periodic lattice constants and Hermite streets.

sigma, zeta and wp are evaluated from the Jacobi theta function
``theta_1(v, q) = 2 sum_n (-1)^n q^{(n+1/2)^2} sin((2n+1) v)`` on a reduced
basis of the lattice (so ``|q| <= e^{-pi sqrt(3)/2}``), after moving ``z``
into the centred fundamental cell with the quasi-periodicity relations

    zeta(z + 2w) = zeta(z) + 2 eta(w)
    sigma(z + 2w) = -+ sigma(z) exp(2 eta(w) (z + w))
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .configuration import VortexConfiguration
from .errors import NumericalError, ValidationError

SERIES_EPS = 1e-17


def _reduce_basis(w1: complex, w2: complex, max_steps: int = 100) -> tuple[complex, complex]:
    """Gauss reduction keeping ``Im(w2/w1) > 0``; returns a basis with ``|Re tau| <= 1/2 <= ... |tau| >= 1``."""
    for _ in range(max_steps):
        tau = w2 / w1
        w2 = w2 - round(tau.real) * w1
        if abs(w2) < abs(w1) * (1 - 1e-15):
            w1, w2 = -w2, w1
        else:
            return w1, w2
    raise NumericalError("elliptic: lattice basis reduction did not terminate")


@dataclass(frozen=True, eq=False)
class _Theta:
    """theta_1 and its v-derivatives for a fixed nome, vectorised over v."""

    q: complex
    nterms: int

    def __post_init__(self):
        n = np.arange(self.nterms)
        odd = 2 * n + 1
        log_q = cmath.log(self.q)
        coef = 2 * (-1.0) ** n * np.exp(log_q * (n + 0.5) ** 2)
        object.__setattr__(self, "_odd", odd.astype(float))
        object.__setattr__(self, "_coef", coef)

    def derivs(self, v, order: int = 3):
        """``[theta_1, theta_1', ..., theta_1^(order)]`` at ``v``."""
        v = np.asarray(v, dtype=complex)
        arg = np.multiply.outer(v, self._odd)
        s, c = np.sin(arg), np.cos(arg)
        base = [s, c, -s, -c]
        return [np.sum(self._coef * self._odd ** r * base[r % 4], axis=-1) for r in range(order + 1)]

    def at_zero(self):
        """``theta_1'(0)`` and ``theta_1'''(0)``."""
        return complex(np.sum(self._coef * self._odd)), complex(-np.sum(self._coef * self._odd ** 3))


@dataclass(frozen=True, eq=False)
class Lattice:
    """Period lattice ``2 omega1 Z + 2 omega2 Z`` with its constants.

    ``eta_i = zeta(omega_i)``; ``(a, b)`` solve ``a omega_i + b conj(omega_i) = eta_i``
    and enter the doubly periodic vortex velocity through ``C``.
    """

    omega1: complex
    omega2: complex
    eta1: complex = field(init=False)
    eta2: complex = field(init=False)
    a: complex = field(init=False)
    b: complex = field(init=False)

    def __post_init__(self):
        w1, w2 = complex(self.omega1), complex(self.omega2)
        if w1 == 0 or w2 == 0:
            raise ValidationError("elliptic: half-periods must be nonzero")
        ratio = (w2 / w1).imag
        if abs(ratio) < 1e-12:
            raise ValidationError(f"elliptic: degenerate lattice, omega2/omega1 = {w2 / w1} is real")
        if ratio < 0:
            raise ValidationError("elliptic: need Im(omega2/omega1) > 0 (canonical orientation)")
        object.__setattr__(self, "omega1", w1)
        object.__setattr__(self, "omega2", w2)

        r1, r2 = _reduce_basis(w1, w2)
        tau = r2 / r1
        q = cmath.exp(1j * math.pi * tau)
        # |term| <= |q|^{(n+1/2)^2 - (n+1/2)} inside the centred cell
        need = math.log(SERIES_EPS) / math.log(abs(q))
        nterms = int(math.ceil(math.sqrt(need + 0.25) + 0.5)) + 2
        theta = _Theta(q, nterms)
        t1, t3 = theta.at_zero()
        eta_r1 = -(math.pi ** 2) * t3 / (12 * r1 * t1)
        object.__setattr__(self, "_r1", r1)
        object.__setattr__(self, "_r2", r2)
        object.__setattr__(self, "_theta", theta)
        object.__setattr__(self, "_t1", t1)
        object.__setattr__(self, "_eta_r1", eta_r1)
        # eta for the second reduced half-period straight from the series (converges on the cell edge)
        eta_r2 = complex(self._zeta_series(np.asarray(r2)))
        object.__setattr__(self, "_eta_r2", eta_r2)

        object.__setattr__(self, "eta1", complex(self.zeta(w1)))
        object.__setattr__(self, "eta2", complex(self.zeta(w2)))
        mat = np.array([[w1, w1.conjugate()], [w2, w2.conjugate()]])
        a, b = np.linalg.solve(mat, np.array([self.eta1, self.eta2]))
        object.__setattr__(self, "a", complex(a))
        object.__setattr__(self, "b", complex(b))

    # -- geometry -------------------------------------------------------------
    @property
    def tau(self) -> complex:
        return self.omega2 / self.omega1

    @property
    def nome(self) -> complex:
        return cmath.exp(1j * math.pi * self.tau)

    def legendre_defect(self) -> complex:
        """``eta1 omega2 - eta2 omega1 - i pi/2`` (zero for a correct evaluation)."""
        return self.eta1 * self.omega2 - self.eta2 * self.omega1 - 0.5j * math.pi

    def linear_defect(self) -> float:
        r1 = self.a * self.omega1 + self.b * self.omega1.conjugate() - self.eta1
        r2 = self.a * self.omega2 + self.b * self.omega2.conjugate() - self.eta2
        return max(abs(r1), abs(r2))

    def _coords(self, z, w1, w2):
        """Real coordinates ``(s, t)`` with ``z = 2 s w1 + 2 t w2``."""
        z = np.asarray(z, dtype=complex)
        det = (np.conj(w1) * w2).imag
        s = (np.conj(z) * w2).imag / (2 * det)
        t = (np.conj(w1) * z).imag / (2 * det)
        return s, t

    def _split(self, z):
        """``z = z0 + 2 m r1 + 2 n r2`` with ``z0`` in the centred reduced cell."""
        s, t = self._coords(z, self._r1, self._r2)
        m = np.round(s)
        n = np.round(t)
        z0 = np.asarray(z, dtype=complex) - 2 * m * self._r1 - 2 * n * self._r2
        return z0, m, n

    def reduce_to_cell(self, z):
        """Map ``z`` into ``{2 s omega1 + 2 t omega2 : 0 <= s, t < 1}``."""
        s, t = self._coords(z, self.omega1, self.omega2)
        out = np.asarray(z, dtype=complex) - 2 * np.floor(s) * self.omega1 - 2 * np.floor(t) * self.omega2
        return complex(out) if np.ndim(out) == 0 else out

    def torus_distance(self, z1, z2):
        """Distance from ``z1 - z2`` to the nearest lattice point."""
        d = np.asarray(z1, dtype=complex) - np.asarray(z2, dtype=complex)
        d0, _, _ = self._split(d)
        best = np.abs(d0)
        for i in (-1, 0, 1):
            for j in (-1, 0, 1):
                best = np.minimum(best, np.abs(d0 + 2 * i * self._r1 + 2 * j * self._r2))
        return best

    def shortest_period(self) -> float:
        return 2 * abs(self._r1)

    def is_lattice_point(self, z, tol: float = 1e-12):
        return self.torus_distance(z, 0) <= tol * max(1.0, abs(self._r1))

    # -- series (no cell reduction) -------------------------------------------
    def _v(self, z):
        return math.pi * np.asarray(z, dtype=complex) / (2 * self._r1)

    def _zeta_series(self, z):
        th, th1 = self._theta.derivs(self._v(z), 1)[:2]
        return self._eta_r1 * z / self._r1 + (math.pi / (2 * self._r1)) * th1 / th

    # -- public evaluation ----------------------------------------------------
    def zeta(self, z):
        z0, m, n = self._split(z)
        out = self._zeta_series(z0) + 2 * m * self._eta_r1 + 2 * n * self._eta_r2
        return complex(out) if np.ndim(out) == 0 else out

    def sigma(self, z):
        z0, m, n = self._split(z)
        th = self._theta.derivs(self._v(z0), 0)[0]
        base = 2 * self._r1 / math.pi * th / self._t1 * np.exp(self._eta_r1 * z0 ** 2 / (2 * self._r1))
        shift = 2 * m * self._eta_r1 + 2 * n * self._eta_r2
        half = m * self._r1 + n * self._r2
        sign = np.where((m % 2 == 0) & (n % 2 == 0), 1.0, -1.0)
        out = sign * base * np.exp(shift * (z0 + half))
        return complex(out) if np.ndim(out) == 0 else out

    def wp(self, z):
        z0, _, _ = self._split(z)
        th, th1, th2 = self._theta.derivs(self._v(z0), 2)[:3]
        g = th1 / th
        k = math.pi / (2 * self._r1)
        out = -self._eta_r1 / self._r1 - k ** 2 * (th2 / th - g ** 2)
        return complex(out) if np.ndim(out) == 0 else out

    def wp_prime(self, z):
        z0, _, _ = self._split(z)
        th, th1, th2, th3 = self._theta.derivs(self._v(z0), 3)
        g1, g2, g3 = th1 / th, th2 / th, th3 / th
        k = math.pi / (2 * self._r1)
        out = -k ** 3 * (g3 - 3 * g2 * g1 + 2 * g1 ** 3)
        return complex(out) if np.ndim(out) == 0 else out


def lattice_new(omega1: complex, omega2: complex) -> Lattice:
    return Lattice(omega1, omega2)


def weierstrass(kind: str, z, lat: Lattice):
    """Evaluate ``kind`` in ``{"p", "zeta", "sigma", "p_prime"}`` at ``z``."""
    if kind in ("p", "zeta", "p_prime") and np.any(lat.is_lattice_point(z)):
        raise ValidationError(f"elliptic: {kind} has a pole at lattice point {z}")
    if kind == "p":
        return lat.wp(z)
    if kind == "zeta":
        return lat.zeta(z)
    if kind == "sigma":
        return lat.sigma(z)
    if kind == "p_prime":
        return lat.wp_prime(z)
    raise ValidationError(f"elliptic: unknown Weierstrass function {kind!r}")


# -- Eisenstein invariants (independent of the theta route) --------------------

def _cot_derivative_coeffs(order: int) -> np.ndarray:
    """Polynomial ``P`` (ascending, in ``y = cot(pi w)``) with ``d^order/dw^order [pi cot(pi w)] = P(y)``."""
    p = np.array([0.0, math.pi])  # pi * y
    for _ in range(order):
        dp = np.polynomial.polynomial.polyder(p)
        # d/dw f(y) = f'(y) * dy/dw, dy/dw = -pi (1 + y^2)
        p = np.polynomial.polynomial.polymul(dp, [-math.pi, 0.0, -math.pi])
    return p


def eisenstein_invariants(omega1: complex, omega2: complex, rows: int | None = None) -> tuple[complex, complex]:
    """``g2 = 60 sum' Omega^-4`` and ``g3 = 140 sum' Omega^-6`` over ``Omega = 2 m omega1 + 2 n omega2``.

    Each row ``n`` is summed in closed form from derivatives of
    ``pi cot(pi w) = sum_m 1/(w + m)``; rows decay like ``|q|^{|n|}``.
    """
    w1, w2 = _reduce_basis(complex(omega1), complex(omega2))
    tau = w2 / w1
    if rows is None:
        rows = int(math.ceil(40 / (math.pi * tau.imag))) + 2
    p3 = _cot_derivative_coeffs(3)
    p5 = _cot_derivative_coeffs(5)
    s4 = 2 * math.pi ** 4 / 90
    s6 = 2 * math.pi ** 6 / 945
    for n in range(1, rows + 1):
        for w in (n * tau, -n * tau):
            y = 1 / cmath.tan(math.pi * w)
            # sum_m (w + m)^-4 = -(1/6) D^3 [pi cot], sum_m (w + m)^-6 = -(1/120) D^5 [pi cot]
            s4 += -np.polynomial.polynomial.polyval(y, p3) / 6
            s6 += -np.polynomial.polynomial.polyval(y, p5) / 120
    g2 = 60 * s4 / (2 * w1) ** 4
    g3 = 140 * s6 / (2 * w1) ** 6
    return complex(g2), complex(g3)


# -- doubly periodic streets ---------------------------------------------------

@dataclass(frozen=True, eq=False)
class EllipticWave:
    """``psi(z) = scale * prod sigma(z - z_i)^{m_i} * e^{B z}`` with ``sum m_i = 0``."""

    zeros: tuple[tuple[complex, int], ...]
    B: complex
    lattice: Lattice
    energy: complex = 0j
    scale: complex = 1.0

    def __post_init__(self):
        zeros = tuple((complex(z), int(m)) for z, m in self.zeros)
        if sum(m for _, m in zeros) != 0:
            raise ValidationError("elliptic: EllipticWave needs multiplicities summing to zero")
        object.__setattr__(self, "zeros", zeros)

    def log_derivative(self, z):
        out = self.B + 0 * np.asarray(z, dtype=complex)
        for zi, mi in self.zeros:
            out = out + mi * self.lattice.zeta(np.asarray(z, dtype=complex) - zi)
        return out

    def value(self, z):
        z = np.asarray(z, dtype=complex)
        out = self.scale * np.exp(self.B * z)
        for zi, mi in self.zeros:
            out = out * self.lattice.sigma(z - zi) ** mi
        return out

    __call__ = value

    def potential(self, z):
        """``sum m_i (m_i - 1) wp(z - z_i)``."""
        z = np.asarray(z, dtype=complex)
        out = 0 * z
        for zi, mi in self.zeros:
            if mi * (mi - 1):
                out = out + mi * (mi - 1) * self.lattice.wp(z - zi)
        return out


def stieltjes_elliptic_residual(wave: EllipticWave) -> np.ndarray:
    """``sum_{j != i} m_j zeta(z_i - z_j) + B`` for each point ``z_i``."""
    pts = wave.zeros
    out = []
    for i, (zi, _) in enumerate(pts):
        s = wave.B
        for j, (zj, mj) in enumerate(pts):
            if j != i:
                s += mj * wave.lattice.zeta(zi - zj)
        out.append(s)
    return np.array(out, dtype=complex)


def hermite_wave(a_points: Sequence[complex], lat: Lattice) -> EllipticWave:
    """``psi = prod_r sigma(a_r - z) / (sigma(z) sigma(a_r)) e^{B z}``, ``B = sum zeta(a_r)``."""
    a = [complex(x) for x in a_points]
    s = len(a)
    if s == 0:
        raise ValidationError("elliptic: Hermite street needs at least one point a_r")
    for i in range(s):
        if lat.is_lattice_point(a[i]):
            raise ValidationError(f"elliptic: a_{i + 1}={a[i]} is a lattice point")
        for j in range(i):
            if lat.torus_distance(a[i], a[j]) < 1e-10:
                raise ValidationError(f"elliptic: coincident Hermite points a_{j + 1}, a_{i + 1}")
    B = sum(lat.zeta(x) for x in a)
    scale = (-1) ** s / np.prod([lat.sigma(x) for x in a])
    energy = -lat.wp(a[0]) if s == 1 else 0j
    zeros = ((0j, -s),) + tuple((x, 1) for x in a)
    return EllipticWave(zeros, complex(B), lat, complex(energy), complex(scale))


def hermite_street(a_points: Sequence[complex], lat: Lattice) -> tuple[VortexConfiguration, EllipticWave]:
    """Doubly periodic street: ``-s`` at 0 and ``+1`` at each ``a_r``.

    Velocity ``v = conj((C - B) / 2 pi i)`` with
    ``C = a sum Gamma_j z_j + b sum Gamma_j conj(z_j)``.  The configuration is
    a relative equilibrium only when the Stieltjes residuals vanish, which is
    automatic for ``s = 1`` and is arranged by :func:`solve_hermite` otherwise.
    """
    wave = hermite_wave(a_points, lat)
    pos = np.array([z for z, _ in wave.zeros])
    gam = np.array([m for _, m in wave.zeros])
    C = lat.a * np.sum(gam * pos) + lat.b * np.sum(gam * np.conj(pos))
    velocity = np.conj((C - wave.B) / (2j * math.pi))
    config = VortexConfiguration(pos, gam, velocity=complex(velocity), lattice=lat, provenance={
        "construction": "hermite",
        "a": [complex(x) for x in a_points],
        "omega1": lat.omega1,
        "omega2": lat.omega2,
    })
    return config, wave


def solve_hermite(a_guess: Sequence[complex], lat: Lattice, fixed: Sequence[int] = (0,),
                  tol: float = 1e-13, maxiter: int = 60) -> list[complex]:
    """Damped Newton on the Stieltjes residuals of a Hermite street.

    The residuals at the points ``a_r`` satisfy one linear relation, so the
    solutions form a one-parameter family; the points listed in ``fixed``
    (0-based) stay put and the remaining ones are solved for.
    """
    a = np.array(a_guess, dtype=complex)
    s = len(a)
    free = [i for i in range(s) if i not in set(fixed)]
    if not free:
        return list(a)

    def residual(a):
        B = sum(lat.zeta(x) for x in a)
        r = np.empty(s, dtype=complex)
        for i in range(s):
            r[i] = B - s * lat.zeta(a[i]) + sum(lat.zeta(a[i] - a[j]) for j in range(s) if j != i)
        return r

    def jacobian(a):
        J = np.empty((s, s), dtype=complex)
        wp_a = [lat.wp(x) for x in a]
        for i in range(s):
            for p in range(s):
                if p == i:
                    J[i, p] = -wp_a[i] + s * wp_a[i] - sum(lat.wp(a[i] - a[j]) for j in range(s) if j != i)
                else:
                    J[i, p] = -wp_a[p] + lat.wp(a[i] - a[p])
        return J

    r = residual(a)
    for _ in range(maxiter):
        norm = np.max(np.abs(r))
        if norm <= tol:
            break
        J = jacobian(a)[:, free]
        step = np.linalg.lstsq(J, -r, rcond=None)[0]
        t = 1.0
        while t > 1e-6:
            trial = a.copy()
            trial[free] += t * step
            r_trial = residual(trial)
            if np.max(np.abs(r_trial)) < norm:
                a, r = trial, r_trial
                break
            t /= 2
        else:
            break
    if np.max(np.abs(r)) > max(tol, 1e-10):
        raise NumericalError(f"elliptic: Hermite Newton solve stalled at residual {np.max(np.abs(r)):.2e}")
    return [complex(lat.reduce_to_cell(x)) for x in a]
