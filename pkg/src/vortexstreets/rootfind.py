"""Zeros of a trigonometric quasi-polynomial in the strip ``0 <= Re z < pi``.

A Laurent polynomial whose exponents share one parity satisfies
``P(-u) = +-P(u)``, so its zero set is pi-periodic and it can be written as
``u^lo Q(X)`` with ``X = u^2 = e^{2iz}``.  Roots of ``Q`` are found
simultaneously (companion eigenvalues or Aberth-Ehrlich), clustered into
multiple roots, polished, and mapped back by ``z = Log(X) / 2i``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp
import numpy as np

from .errors import RootFindingError, ValidationError
from .trigpoly import ExpPolynomial

DEFAULT_TOL = 1e-10
ESCAPE_TOL = 1e-9
MATCH_TOL = 1e-6


@dataclass(frozen=True)
class Root:
    z: complex
    multiplicity: int
    residual: float


@dataclass(frozen=True)
class RootSet:
    """Clustered zeros in the fundamental strip.

    ``escaped_down`` counts zeros lost to ``Im z -> -inf`` (vanishing top
    coefficient), ``escaped_up`` those lost to ``Im z -> +inf``.
    """

    roots: tuple[Root, ...]
    escaped_down: int = 0
    escaped_up: int = 0
    tol: float = DEFAULT_TOL

    @property
    def positions(self) -> np.ndarray:
        return np.array([r.z for r in self.roots], dtype=complex)

    @property
    def multiplicities(self) -> np.ndarray:
        return np.array([r.multiplicity for r in self.roots], dtype=int)

    @property
    def total_multiplicity(self) -> int:
        return int(sum(r.multiplicity for r in self.roots))

    @property
    def escaped(self) -> int:
        return self.escaped_down + self.escaped_up

    def __len__(self):
        return len(self.roots)


def reduce_to_strip(z, period: float = math.pi):
    """Shift ``Re z`` into ``[0, period)``."""
    z = np.asarray(z, dtype=complex)
    x = np.mod(z.real, period)
    # np.mod can return `period` itself for tiny negative inputs
    x = np.where(x >= period, x - period, x)
    # adding 0.0 turns -0.0 into 0.0 so serialized output is canonical
    out = (x + 0.0) + 1j * (z.imag + 0.0)
    return complex(out) if out.ndim == 0 else out


def strip_distance(z1, z2, period: float = math.pi):
    """Distance between ``z1`` and the nearest periodic image of ``z2``."""
    d = np.asarray(z1, dtype=complex) - np.asarray(z2, dtype=complex)
    dx = np.mod(d.real + period / 2, period) - period / 2
    return np.hypot(dx, d.imag)


# -- polynomial helpers (ascending coefficient arrays) -------------------------

def _horner(c: np.ndarray, x):
    x = np.asarray(x, dtype=complex)
    acc = np.zeros_like(x)
    for a in c[::-1]:
        acc = acc * x + a
    return acc


def _derivative(c: np.ndarray, order: int) -> np.ndarray:
    for _ in range(order):
        if len(c) <= 1:
            return np.zeros(1, dtype=complex)
        c = c[1:] * np.arange(1, len(c))
    return c


def _backward_error(c: np.ndarray, x) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    num = np.abs(_horner(c, x))
    den = _horner(np.abs(c).astype(complex), np.abs(x)).real
    return num / np.maximum(den, np.finfo(float).tiny)


def companion_roots(c: np.ndarray) -> np.ndarray:
    """All roots of the ascending-coefficient polynomial ``c`` via eigenvalues."""
    if len(c) <= 1:
        return np.zeros(0, dtype=complex)
    return np.roots(c[::-1]).astype(complex)


def aberth_roots(c: np.ndarray, maxiter: int = 500, tol: float = 1e-15) -> np.ndarray:
    """Aberth-Ehrlich simultaneous iteration for the roots of ``c`` (ascending)."""
    deg = len(c) - 1
    if deg <= 0:
        return np.zeros(0, dtype=complex)
    dc = _derivative(c, 1)
    # initial guesses on a circle of the Cauchy-bound radius, offset angle to break symmetry
    radius = (abs(c[0]) / abs(c[-1])) ** (1.0 / deg) if c[0] != 0 else 1.0
    angles = 2 * np.pi * np.arange(deg) / deg + 0.4
    z = radius * np.exp(1j * angles)
    for _ in range(maxiter):
        ratio = _horner(c, z) / _horner(dc, z)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        s = inv.sum(axis=1)
        step = ratio / (1 - ratio * s)
        step = np.where(np.isfinite(step), step, 0)
        z = z - step
        if np.all(np.abs(step) <= tol * np.maximum(np.abs(z), 1.0)):
            break
    return z


# -- clustering ---------------------------------------------------------------

def _components(points: np.ndarray, idx: list[int], radius: float) -> list[list[int]]:
    """Single-linkage components using relative distance ``|a-b|/max(|a|,|b|,1e-300)``."""
    idx = list(idx)
    parent = {i: i for i in idx}

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a_pos, a in enumerate(idx):
        for b in idx[a_pos + 1:]:
            scale = max(abs(points[a]), abs(points[b]), 1e-300)
            if abs(points[a] - points[b]) <= radius * scale:
                parent[find(a)] = find(b)
    groups: dict[int, list[int]] = {}
    for i in idx:
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _spread(points: np.ndarray, idx: list[int]) -> float:
    p = points[idx]
    c = p.mean()
    return float(np.max(np.abs(p - c)) / max(abs(c), 1e-300))


def _cluster(points: np.ndarray, idx: list[int], tol: float) -> list[list[int]]:
    n = len(idx)
    if n == 1 or _spread(points, idx) <= tol ** (1.0 / n):
        return [idx]
    for m in range(n - 1, 0, -1):
        comps = _components(points, idx, 2 * tol ** (1.0 / m))
        if len(comps) > 1:
            return [c for comp in comps for c in _cluster(points, comp, tol)]
    return [[i] for i in idx]


def cluster_roots(points: np.ndarray, tol: float = DEFAULT_TOL, max_multiplicity: int = 12) -> list[list[int]]:
    """Group perturbed multiple roots: ``m`` roots within relative radius ``tol^(1/m)``."""
    points = np.asarray(points, dtype=complex)
    if len(points) == 0:
        return []
    first = _components(points, list(range(len(points))), 2 * tol ** (1.0 / max_multiplicity))
    out = [c for comp in first for c in _cluster(points, comp, tol)]
    return sorted(out, key=lambda g: min(g))


def _polish(c: np.ndarray, x0: complex, m: int, radius: float, iters: int = 20) -> complex:
    """Newton on the (m-1)-th derivative, which has a simple root at an m-fold root."""
    f = _derivative(c, m - 1)
    df = _derivative(c, m)
    x = complex(x0)
    for _ in range(iters):
        d = complex(_horner(df, x))
        if d == 0:
            break
        step = complex(_horner(f, x)) / d
        x_new = x - step
        if abs(x_new - x0) > max(radius, 1e-12) * max(abs(x0), 1.0) * 10:
            # wandered off the cluster; keep the centroid
            return complex(x0)
        x = x_new
        if abs(step) <= 4 * np.finfo(float).eps * max(abs(x), 1.0):
            break
    return x


def x_polynomial(p: ExpPolynomial) -> tuple[int, int, np.ndarray]:
    """Write ``p = e^{i kappa z} u^lo Q(u^2)``; returns ``(lo, parity, Q ascending)``."""
    parity = p.parity()
    if parity is None:
        raise ValidationError("rootfind: mixed exponent parity, zero set is not pi-periodic")
    lo, dense = p.coefficient_array()
    return lo, parity, dense[::2].copy()


def deflate(q: np.ndarray, x0: complex, rel_tol: float = 1e-8) -> tuple[int, np.ndarray]:
    """Divide ``Q`` (ascending) by ``X - x0`` while the remainder is negligible.

    Returns the number of factors removed and the quotient.  A remainder
    counts as negligible when it is below ``rel_tol * sum |q_j| |x0|^j``.
    """
    q = np.asarray(q, dtype=complex)
    mult = 0
    while len(q) > 1:
        desc = q[::-1]
        b = np.empty_like(desc)
        b[0] = desc[0]
        for k in range(1, len(desc)):
            b[k] = desc[k] + x0 * b[k - 1]
        scale = float(np.sum(np.abs(q) * np.abs(x0) ** np.arange(len(q))))
        if abs(b[-1]) > rel_tol * scale:
            break
        q = b[:-1][::-1].copy()
        mult += 1
    return mult, q


def roots_in_strip(p: ExpPolynomial, tol: float = DEFAULT_TOL, method: str = "companion",
                   escape_tol: float = ESCAPE_TOL) -> RootSet:
    """Zeros of ``p`` with ``Re z`` in ``[0, pi)`` and their multiplicities.

    Parameters
    ----------
    p : ExpPolynomial
        Nonzero quasi-polynomial with single-parity exponents.  The spectral
        factor never vanishes and is ignored.
    tol : float
        Bound on the relative backward error ``|Q(X)| / sum |q_j||X|^j`` of
        every reported root; also sets the clustering radii ``tol^(1/m)``.
    method : {"companion", "aberth"}
    escape_tol : float
        End coefficients below ``escape_tol * max|q|`` are treated as zero and
        their roots reported as escaped to infinity (near-critical kappa).

    Raises
    ------
    RootFindingError
        If a polished root still has residual above ``tol``.
    """
    if p.is_zero():
        raise ValidationError("rootfind: the zero polynomial has no isolated roots")
    _, _, q = x_polynomial(p)
    scale = np.max(np.abs(q))
    small = np.abs(q) <= escape_tol * scale
    top = len(q) - 1
    while small[top]:
        top -= 1
    bottom = 0
    while small[bottom]:
        bottom += 1
    escaped_down = len(q) - 1 - top
    escaped_up = bottom
    q_trim = q[bottom:top + 1]

    if method == "companion":
        raw = companion_roots(q_trim)
    elif method == "aberth":
        raw = aberth_roots(q_trim)
    else:
        raise ValidationError(f"rootfind: unknown method {method!r}")

    roots = []
    for group in cluster_roots(raw, tol):
        m = len(group)
        centroid = complex(raw[group].mean())
        radius = tol ** (1.0 / m)
        x = _polish(q_trim, centroid, m, radius)
        res = float(_backward_error(q_trim, x))
        if res <= tol:
            found = [(x, m, res)]
        else:
            # a tight cluster of distinct roots, not a true multiple root: keep the members apart
            found = [(xi, 1, float(_backward_error(q_trim, xi)))
                     for xi in (_polish(q_trim, complex(raw[i]), 1, radius) for i in group)]
            if m == 1 or any(r > tol for _, _, r in found):
                raise RootFindingError(
                    f"rootfind: residual {res:.3e} > tol {tol:.1e} at X={x:.6g} (multiplicity {m})"
                )
        for xi, mi, ri in found:
            z = reduce_to_strip(-0.5j * np.log(xi))
            roots.append(Root(complex(z), mi, ri))
    roots.sort(key=lambda r: (r.z.real, r.z.imag))
    return RootSet(tuple(roots), escaped_down, escaped_up, tol)


def polish_high_precision(roots: RootSet, coeffs: dict, dps: int = 40, max_shift: float = 1e-6,
                          iters: int = 8) -> RootSet:
    """Refine every root against mpmath coefficients ``{power of u: mpc}``.

    Newton on the ``(m-1)``-th ``z``-derivative of ``sum c_e e^{i e z}``.
    Double roots of a nearly multiple cluster are only good to about
    ``eps / spread^2``; this brings them to full double accuracy.  A root
    that would move by more than ``max_shift`` is left as it was.
    """
    terms = list(coeffs.items())
    out = []
    with mp.workdps(dps):
        tiny = mp.mpf(10) ** (8 - dps)
        for r in roots.roots:
            m = r.multiplicity
            z = mp.mpc(r.z)
            for _ in range(iters):
                w = [(c * mp.expj(e * z), mp.mpc(0, e)) for e, c in terms]
                f = mp.fsum(t * ie ** (m - 1) for t, ie in w)
                df = mp.fsum(t * ie ** m for t, ie in w)
                if df == 0:
                    break
                step = f / df
                z -= step
                if abs(step) <= tiny:
                    break
            # parts below the Newton tolerance are noise (e.g. Im z of a zero on the real axis)
            z = complex(z.real if abs(z.real) > tiny else 0, z.imag if abs(z.imag) > tiny else 0)
            out.append(Root(reduce_to_strip(z) if abs(z - r.z) <= max_shift else r.z, m, r.residual))
    return RootSet(tuple(out), roots.escaped_down, roots.escaped_up, roots.tol)


def merge_with_signs(numerator: RootSet, denominator: RootSet, tol: float = MATCH_TOL,
                     period: float = math.pi) -> tuple[np.ndarray, np.ndarray]:
    """Positions and net circulations of ``numerator / denominator``.

    Zeros count with ``+multiplicity``, poles with ``-multiplicity``; matched
    positions (within ``tol``, modulo the period) net out and vanish when the
    multiplicities agree.
    """
    num = list(numerator.roots)
    den = list(denominator.roots)
    taken = [False] * len(num)
    pos, gam = [], []
    for d in den:
        hits = [i for i, r in enumerate(num) if strip_distance(r.z, d.z, period) <= tol]
        if len(hits) > 1:
            raise ValidationError(
                f"rootfind: ambiguous match, {len(hits)} numerator roots within {tol:g} of pole {d.z:.12g}"
            )
        if hits:
            i = hits[0]
            if taken[i]:
                raise ValidationError(f"rootfind: ambiguous match, numerator root {num[i].z:.12g} near two poles")
            taken[i] = True
            net = num[i].multiplicity - d.multiplicity
            if net != 0:
                # the higher-multiplicity root is located more reliably after polishing; keep the average
                pos.append(0.5 * (num[i].z + d.z) if abs(num[i].z - d.z) <= tol else d.z)
                gam.append(net)
        else:
            pos.append(d.z)
            gam.append(-d.multiplicity)
    for i, r in enumerate(num):
        if not taken[i]:
            pos.append(r.z)
            gam.append(r.multiplicity)
    pos = np.array(pos, dtype=complex)
    gam = np.array(gam, dtype=int)
    order = np.lexsort((pos.imag, pos.real)) if len(pos) else np.zeros(0, dtype=int)
    return pos[order], gam[order]
