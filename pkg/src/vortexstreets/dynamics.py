"""Point-vortex time integration and flow-field sampling.

The equations of motion give ``d conj(z_j)/dt``; :func:`vortex_velocities`
is the only place where that conjugation happens.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .configuration import PERIOD, RationalWave, VortexConfiguration
from .equilibrium import cot_sums, zeta_sums
from .errors import CollisionError, ValidationError
from .rootfind import reduce_to_strip

COLLISION_DISTANCE = 1e-6


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # shape (len(times), n_vortices), complex, not strip-reduced
    scheme: str
    step: float

    def final(self) -> np.ndarray:
        return self.states[-1]

    def rigid_motion_error(self, velocity: complex) -> float:
        """``max_{t, j} |z_j(t) - z_j(0) - v t|``."""
        expected = self.states[0][None, :] + velocity * self.times[:, None]
        return float(np.max(np.abs(self.states - expected)))

    def shape_drift(self) -> float:
        """Largest change of any pairwise difference ``z_j - z_k`` along the run."""
        d0 = self.states[0][:, None] - self.states[0][None, :]
        return float(max(np.max(np.abs((s[:, None] - s[None, :]) - d0)) for s in self.states))

    def reduced_states(self) -> np.ndarray:
        return reduce_to_strip(self.states, PERIOD)


def conj_velocities(config: VortexConfiguration) -> np.ndarray:
    """Right-hand side ``d conj(z_j)/dt`` of the equations of motion."""
    if config.n == 0:
        return np.zeros(0, dtype=complex)
    if config.is_strip:
        rhs = cot_sums(config)
        if config.alpha != 0:
            rhs = rhs - 2 * config.alpha * np.sin(2 * config.positions)
        return rhs / (2j * math.pi)
    return zeta_sums(config) / (2j * math.pi)


def vortex_velocities(config: VortexConfiguration) -> np.ndarray:
    """``dz_j/dt`` for every vortex.

    Strip: conjugate of ``(1/2 pi i)(sum_{k != j} Gamma_k cot(z_j - z_k) - 2 alpha sin 2 z_j)``.
    Lattice: conjugate of ``(1/2 pi i)(sum_{k != j} Gamma_k zeta(z_j - z_k) + C)``.
    """
    return np.conj(conj_velocities(config))


def _check_collisions(config: VortexConfiguration, t: float):
    if config.n < 2:
        return
    dist = config.nearest_distances()
    if np.min(dist) < COLLISION_DISTANCE:
        raise CollisionError(f"dynamics: vortex collision at t={t:.6g} (distance {np.min(dist):.2e})", time=t)


def integrate(config: VortexConfiguration, T: float, dt: float, record_every: int = 1) -> Trajectory:
    """Classical fourth-order Runge-Kutta on the complex positions.

    Positions are never reduced to the strip during the run, so a rigid
    translation shows up as such in ``Trajectory.states``.
    """
    if dt <= 0 or T < dt:
        raise ValidationError(f"dynamics: need dt > 0 and T >= dt, got T={T}, dt={dt}")
    nsteps = int(round(T / dt))
    if abs(nsteps * dt - T) > 1e-9 * T:
        raise ValidationError(f"dynamics: T={T} is not a whole number of steps dt={dt}")

    def f(z):
        return vortex_velocities(config.replace(positions=z))

    z = np.array(config.positions, dtype=complex)
    times = [0.0]
    states = [z.copy()]
    for step in range(1, nsteps + 1):
        k1 = f(z)
        k2 = f(z + 0.5 * dt * k1)
        k3 = f(z + 0.5 * dt * k2)
        k4 = f(z + dt * k3)
        z = z + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t = step * dt
        _check_collisions(config.replace(positions=z), t)
        if step % record_every == 0 or step == nsteps:
            times.append(t)
            states.append(z.copy())
    return Trajectory(np.array(times), np.array(states), "rk4", dt)


@dataclass(frozen=True)
class Grid:
    """Rectangle ``[x0, x1] x [y0, y1]`` sampled on ``nx x ny`` points."""

    x0: float
    x1: float
    y0: float
    y1: float
    nx: int
    ny: int

    def points(self) -> np.ndarray:
        x = np.linspace(self.x0, self.x1, self.nx)
        y = np.linspace(self.y0, self.y1, self.ny)
        X, Y = np.meshgrid(x, y)
        return X + 1j * Y


def flow_field(wave: RationalWave, grid: Grid | np.ndarray, frame: str = "moving",
               vortices: np.ndarray | None = None, margin: float = 1e-3) -> tuple[np.ndarray, np.ndarray]:
    """Fluid velocity ``conj(dW/dz)`` with ``W = log(psi) / 2 pi i`` on a grid.

    Returns ``(velocity, near_singular)``.  Samples closer than ``margin`` to a
    listed vortex, or where the result is not finite, are flagged.  In the
    fixed frame the field equals the moving-frame one plus the street
    velocity ``v = -conj(kappa) / 2 pi``.
    """
    pts = grid.points() if isinstance(grid, Grid) else np.asarray(grid, dtype=complex)
    with np.errstate(all="ignore"):
        w = np.conj(wave.log_derivative(pts, frame) / (2j * math.pi))
    flag = ~np.isfinite(w)
    if vortices is not None and len(vortices):
        d = np.asarray(pts)[..., None] - np.asarray(vortices)[None, ...]
        dx = np.mod(d.real + PERIOD / 2, PERIOD) - PERIOD / 2
        flag |= np.min(np.hypot(dx, d.imag), axis=-1) < margin
    return w, flag
