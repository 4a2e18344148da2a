"""Large-wavenumber curves along which the complex vortices of ``k = (m, n)`` streets line up.

Both curves come from balancing the dominant exponential of
``sin (m+n) z`` against ``sin (n-m) z`` for small ``|Im z|``; they are
treated as conjectural fits, and :func:`curve_adherence` measures how far a
computed configuration is from them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .configuration import VortexConfiguration
from .errors import ValidationError

AXIS_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class CurveSample:
    """Upper and lower branches sampled at abscissae ``x``.

    ``dips`` marks samples where the equilibrium curve formula is negative,
    i.e. the curve passes through the real axis.
    """

    x: np.ndarray
    y_plus: np.ndarray
    y_minus: np.ndarray
    dips: np.ndarray


def _check_mn(m: int, n: int):
    if not (n > m >= 1):
        raise ValidationError(f"asymptotics: need n > m >= 1, got (m, n) = ({m}, {n})")


def equilibrium_curve(m: int, n: int, x) -> np.ndarray | float:
    """``|y| = (log|sin (n-m) x| + log(2(m+n)/(n-m))) / (m+n)``.

    Values may be negative close to the zeros of ``sin (n-m) x``; they are
    returned as they are.  Exact zeros are rejected.
    """
    _check_mn(m, n)
    xs = np.asarray(x, dtype=float)
    s = np.abs(np.sin((n - m) * xs))
    if np.any(s == 0) or np.any(np.abs(np.mod(xs * (n - m) / math.pi + 0.5, 1) - 0.5) < 1e-15):
        raise ValidationError(f"asymptotics: x is a zero of sin({n - m}x)")
    y = (np.log(s) + math.log(2 * (m + n) / (n - m))) / (m + n)
    return float(y) if y.ndim == 0 else y


def moving_curve(m: int, n: int, kappa: float, x) -> tuple:
    """Branches ``(y_plus, y_minus)`` of the curve for ``kappa != 0``.

    ``y = shift +- (2 log(2(n+m)/(n-m)) + log|sin^2 (n-m) x + c|) / (2(n+m))``
    with ``shift = log|(kappa-n)(kappa-m) / ((kappa+n)(kappa+m))| / (2(n+m))``
    and ``c = kappa^2 (n-m)^2 / ((kappa^2 - n^2)(kappa^2 - m^2))``.
    """
    _check_mn(m, n)
    kappa = float(kappa)
    if min(abs(abs(kappa) - m), abs(abs(kappa) - n)) < 1e-8:
        raise ValidationError(f"asymptotics: kappa={kappa} is critical for (m, n) = ({m}, {n})")
    xs = np.asarray(x, dtype=float)
    N, D = n + m, n - m
    shift = math.log(abs((kappa - n) * (kappa - m) / ((kappa + n) * (kappa + m)))) / (2 * N)
    c = kappa ** 2 * D ** 2 / ((kappa ** 2 - n ** 2) * (kappa ** 2 - m ** 2))
    inner = np.abs(np.sin(D * xs) ** 2 + c)
    if np.any(inner == 0):
        raise ValidationError("asymptotics: moving curve log argument vanishes")
    half = (2 * math.log(2 * N / D) + np.log(inner)) / (2 * N)
    yp, ym = shift + half, shift - half
    if yp.ndim == 0:
        return float(yp), float(ym)
    return yp, ym


def sample_curve(m: int, n: int, kappa: float = 0.0, samples: int = 400) -> CurveSample:
    """Both branches on ``samples`` midpoints of ``(0, pi)``."""
    x = (np.arange(samples) + 0.5) * math.pi / samples
    if kappa == 0:
        y = equilibrium_curve(m, n, x)
        return CurveSample(x, y, -y, y < 0)
    yp, ym = moving_curve(m, n, kappa, x)
    return CurveSample(x, yp, ym, yp < ym)


def curve_adherence(config: VortexConfiguration, curve: str, m: int, n: int, kappa: float = 0.0) -> float:
    """Largest vertical distance from an off-axis vortex to its branch of the curve.

    ``curve="equilibrium"`` uses every vortex with ``|Im z| > 1e-8``.
    ``curve="moving"`` only uses the positive vortices, since the zeros of the
    denominator do not depend on ``kappa`` and so cannot follow a
    ``kappa``-dependent curve.  Returns 0 when no vortex qualifies.
    """
    z = config.positions
    off = np.abs(z.imag) > AXIS_TOL
    if curve == "equilibrium":
        sel = z[off]
        if len(sel) == 0:
            return 0.0
        y = equilibrium_curve(m, n, sel.real)
        target = np.where(sel.imag > 0, y, -y)
    elif curve == "moving":
        sel = z[off & (config.circulations > 0)]
        if len(sel) == 0:
            return 0.0
        yp, ym = moving_curve(m, n, kappa, sel.real)
        # the branch nearest in sign: upper branch for points above the curve's midline
        mid = 0.5 * (yp + ym)
        target = np.where(sel.imag > mid, yp, ym)
    else:
        raise ValidationError(f"asymptotics: curve must be 'equilibrium' or 'moving', got {curve!r}")
    return float(np.max(np.abs(sel.imag - target)))
