"""End-to-end acceptance runs, one PASS/FAIL line per criterion."""
import math
import time

import numpy as np
import pytest

from vortexstreets.asymptotics import curve_adherence, equilibrium_curve, moving_curve
from vortexstreets.cli import main
from vortexstreets.dynamics import integrate
from vortexstreets.elliptic import hermite_street, hermite_wave, lattice_new
from vortexstreets.equilibrium import (
    generalized_stieltjes,
    residuals_background,
    residuals_doubly_periodic,
    residuals_periodic,
)
from vortexstreets.rootfind import strip_distance
from vortexstreets.streets import build_critical, build_street, closed_form_n2
from vortexstreets.trigpoly import StreetSpec
from vortexstreets.whittaker_hill import WHSpec, wh_eigenfunctions, wh_street

from .test_whittaker_hill import coeff_vector, proportional, s3_formulas

SQUARE = lattice_new(math.pi / 2, 1j * math.pi / 2)


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} {number}: {title} [{detail}]")
        assert ok, detail

    return emit


def _positive(config):
    return config.positions[config.circulations > 0]


def test_closed_form_oracle(report):
    worst = 0.0
    for kappa in (0, 0.5, 1.2, 1.9, 2.1, 3, 6):
        pos = _positive(build_street(StreetSpec((1, 2), (), kappa))[0])
        for z in closed_form_n2(kappa):
            worst = max(worst, float(min(strip_distance(pos, z))))
    pos = _positive(build_street(StreetSpec((1, 2), (), 0))[0])
    shift = 0.5j * math.log(2 + math.sqrt(3))
    exact = max(float(min(strip_distance(pos, math.pi / 2 + s))) for s in (shift, -shift))
    report(1, "n=2 streets against the quadratic closed form", worst <= 1e-10 and exact <= 1e-10,
           f"max |dz| {worst:.1e}, kappa=0 offset {exact:.1e}")


def _random_specs(count, seed=7):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(1, 4))
        k = tuple(sorted(int(x) for x in rng.choice(np.arange(1, 13), n, replace=False)))
        if rng.random() < 0.3:
            # zero phases keep the multiple vortices at 0 and pi/2
            phi = (0.0,) * n
        else:
            phi = tuple(complex(rng.uniform(-math.pi, math.pi), rng.uniform(-0.5, 0.5)) for _ in k)
        while True:
            kappa = float(rng.uniform(-14, 14))
            if min(abs(abs(kappa) - kj) for kj in k) >= 0.1:
                break
        yield StreetSpec(k, phi, kappa)


def test_randomized_sweep(report):
    start = time.perf_counter()
    worst_res = worst_stil = 0.0
    circulation_ok = True
    multiple = 0
    for spec in _random_specs(200):
        config, wave = build_street(spec)
        circulation_ok &= config.total_circulation == 0
        worst_res = max(worst_res, residuals_periodic(config).max_residual)
        nn = config.nearest_distances()
        for j in np.flatnonzero(np.abs(config.circulations) > 1):
            multiple += 1
            res = generalized_stieltjes(wave, config.positions[j], int(config.circulations[j]),
                                        radius=0.25 * nn[j])
            worst_stil = max(worst_stil, max(abs(r) for r in res))
    elapsed = time.perf_counter() - start
    ok = circulation_ok and worst_res <= 1e-9 and worst_stil <= 1e-8 and elapsed <= 60 and multiple > 0
    report(2, "200 random streets: residuals, circulation, Stieltjes residues", ok,
           f"residual {worst_res:.1e}, Stieltjes {worst_stil:.1e} at {multiple} multiple vortices, {elapsed:.1f} s")


def _rigid_errors():
    config, _ = build_street(StreetSpec((7, 8), (), 4))
    v = -4 / (2 * math.pi)
    return [integrate(config, 1.0, dt).rigid_motion_error(v) for dt in (1e-3, 5e-4)]


@pytest.mark.xfail(strict=True, reason="an exact relative equilibrium has no RK4 truncation error to halve; "
                                       "the remaining deviation is rounding, so the ratio is near 1")
def test_rigid_translation_and_fourth_order(report):
    e1, e2 = _rigid_errors()
    ratio = e1 / e2
    report(3, "RK4 rigid translation of the (7,8) street, halving dt", e1 <= 1e-6 and 12 <= ratio <= 20,
           f"deviation {e1:.1e}, ratio {ratio:.2f} (needs 12..20)")


def test_rigid_translation_deviation_only():
    config, _ = build_street(StreetSpec((7, 8), (), 4))
    assert integrate(config, 1.0, 1e-3).rigid_motion_error(-4 / (2 * math.pi)) <= 1e-6


def test_vortex_counting(report):
    a = build_street(StreetSpec((10, 12), (), 0))[0].circulation_counts()
    b = build_street(StreetSpec((7, 8), (), 0))[0].circulation_counts()
    ok = a == {-2: 2, -1: 16, 1: 20} and b == {-2: 1, -1: 12, 1: 14}
    report(4, "vortex counts for (10,12) and (7,8) at kappa=0", ok, f"{a}; {b}")


def _exact_structure(config, expected):
    if config.n != len(expected):
        return False
    for z, g in expected:
        i = config.find(z, tol=1e-12)
        if i is None or config.circulations[i] != g:
            return False
    return True


def test_critical_degenerations(report):
    spec = StreetSpec((1, 2), (), 0)
    first = _exact_structure(build_critical(spec, 1)[0], [(0, -2), (math.pi / 2, 1)])
    second = _exact_structure(build_critical(spec, 2)[0], [(0, -2)])
    above = np.sort(_positive(build_street(StreetSpec((1, 2), (), 2 + 1e-4))[0]).real)
    below = np.sort(_positive(build_street(StreetSpec((1, 2), (), 2 - 1e-4))[0]).real)
    dev_above = float(np.max(np.abs(above - [math.pi / 4, 3 * math.pi / 4])))
    dev_below = float(np.max(np.abs(below - [0, math.pi / 2])))
    ok = first and second and dev_above <= 1e-2 and dev_below <= 1e-2
    report(5, "critical kappa = k_j and near-critical kappa = 2 +- 1e-4", ok,
           f"j=1 {first}, j=2 {second}, Re z offsets {dev_above:.1e} above, {dev_below:.1e} below")


def test_asymptotic_curves(report):
    a1 = curve_adherence(build_street(StreetSpec((10, 12), (), 0))[0], "equilibrium", 10, 12)
    a2 = curve_adherence(build_street(StreetSpec((20, 22), (), 0))[0], "equilibrium", 20, 22)
    x = np.linspace(0.01, math.pi - 0.01, 997)
    x = x[np.abs(np.sin(2 * x)) > 1e-6]
    y = equilibrium_curve(10, 12, x)
    yp, ym = moving_curve(10, 12, 0.0, x)
    gap = float(max(np.max(np.abs(yp - y)), np.max(np.abs(ym + y))))
    ok = a1 <= 0.5 / 22 and a2 < a1 and gap <= 1e-14
    report(6, "asymptotic curves: adherence and kappa=0 limit", ok,
           f"adherence {a1:.4f} then {a2:.4f}, moving vs equilibrium {gap:.1e}")


def test_whittaker_hill(report):
    eigs = wh_eigenfunctions(3, 1.5)
    forms = all(proportional(coeff_vector(e.phi, 3), f, 1e-10) for e, f in zip(eigs, s3_formulas(1.5)))
    res = [residuals_background(wh_street(WHSpec(5, 1.5, J, I))[0]).max_residual
           for J, I in (((4, 5), (4,)), ((1, 5), (1,)))]
    ok = forms and max(res) <= 1e-8
    report(7, "Whittaker-Hill eigenfunctions and background-flow streets", ok,
           f"s=3 closed forms {forms}, residuals {res[0]:.1e} and {res[1]:.1e}")


def test_elliptic(report, rng):
    legendre = abs(SQUARE.legendre_defect())
    a = SQUARE.omega1 / 2 + SQUARE.omega2 / 3
    config, _ = hermite_street([a], SQUARE)
    residual = residuals_doubly_periodic(config).max_residual
    wave = hermite_wave([a], SQUARE)
    lame = 0.0
    h = 1e-3
    for s, t in zip(rng.uniform(0.15, 0.85, 10), rng.uniform(0.15, 0.85, 10)):
        z = 2 * s * SQUARE.omega1 + 2 * t * SQUARE.omega2
        if min(abs(z - a), SQUARE.torus_distance(z, 0)) < 0.1:
            continue
        f = wave.value
        d2 = (-f(z + 2 * h) + 16 * f(z + h) - 30 * f(z) + 16 * f(z - h) - f(z - 2 * h)) / (12 * h * h)
        psi = f(z)
        lame = max(lame, abs(-d2 + 2 * SQUARE.wp(z) * psi - wave.energy * psi) / max(1, abs(psi)))
    shifted = config.positions + np.array([2 * SQUARE.omega1, -2 * SQUARE.omega2])[: config.n]
    shift = float(np.max(np.abs(residuals_doubly_periodic(config.replace(positions=shifted)).per_vortex
                                - residuals_doubly_periodic(config).per_vortex)))
    ok = legendre <= 1e-12 and residual <= 1e-8 and lame <= 1e-6 and shift <= 1e-9
    report(8, "square lattice, Hermite s=1 street", ok,
           f"Legendre {legendre:.1e}, residual {residual:.1e}, Lame {lame:.1e}, cell shift {shift:.1e}")


def test_figure_data_reproducible(report, tmp_path):
    codes, runs = [], []
    for name in ("a", "b"):
        out = tmp_path / name
        codes.append(main(["figures", "--outdir", str(out)]))
        runs.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
    json_names = [n for n in runs[0] if n.endswith(".json")]
    stable = runs[0] == runs[1] and len(json_names) >= 8
    report(9, "figure datasets regenerate with exit 0, byte-stable", codes == [0, 0] and stable,
           f"exit codes {codes}, {len(json_names)} JSON files, identical {runs[0] == runs[1]}")
