import cmath
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vortexstreets.errors import RootFindingError, ValidationError
from vortexstreets.rootfind import (
    RootSet,
    Root,
    aberth_roots,
    cluster_roots,
    companion_roots,
    merge_with_signs,
    polish_high_precision,
    reduce_to_strip,
    roots_in_strip,
    strip_distance,
    x_polynomial,
)
from vortexstreets.trigpoly import ExpPolynomial, StreetSpec, from_sine, sine_wronskian, sine_wronskian_mp

from .oracle_values import STREET_7_8_KAPPA4_NUMERATOR_ROOTS
from .test_trigpoly import street_specs


def as_dict(rs: RootSet, digits=8):
    return {(round(r.z.real, digits) + 0.0, round(r.z.imag, digits) + 0.0): r.multiplicity for r in rs.roots}


def test_sin_cubed_triple_root():
    rs = roots_in_strip(sine_wronskian((1, 2)))
    assert len(rs) == 1
    assert rs.roots[0].multiplicity == 3
    assert abs(rs.roots[0].z) < 1e-5


def test_n2_kappa0_numerator_roots():
    rs = roots_in_strip(sine_wronskian((1, 2), kappa=0))
    expected = [0, math.pi / 2 + 0.5j * math.log(2 + math.sqrt(3)), math.pi / 2 - 0.5j * math.log(2 + math.sqrt(3))]
    assert rs.total_multiplicity == 3
    for e in expected:
        assert min(strip_distance(rs.positions, e)) < 1e-12
    assert all(r.multiplicity == 1 for r in rs.roots)


def test_sin5z_roots():
    rs = roots_in_strip(from_sine(5))
    assert np.allclose(np.sort(rs.positions.real), np.arange(5) * math.pi / 5, atol=1e-13)
    assert np.all(rs.multiplicities == 1)


def test_street_7_8_kappa4_matches_oracle():
    rs = roots_in_strip(sine_wronskian((7, 8), kappa=4))
    assert rs.total_multiplicity == 15
    for z in STREET_7_8_KAPPA4_NUMERATOR_ROOTS:
        assert min(strip_distance(rs.positions, z)) < 1e-11


def test_aberth_agrees_with_companion():
    p = sine_wronskian((7, 8), kappa=4)
    a = roots_in_strip(p, method="aberth")
    c = roots_in_strip(p, method="companion")
    assert a.total_multiplicity == c.total_multiplicity
    for z in c.positions:
        assert min(strip_distance(a.positions, z)) < 1e-11


def test_aberth_on_known_polynomial():
    roots = aberth_roots(np.array([-6, 11, -6, 1], dtype=complex))
    assert np.allclose(np.sort(roots.real), [1, 2, 3], atol=1e-12)
    assert np.allclose(np.sort(companion_roots(np.array([-6, 11, -6, 1], dtype=complex)).real), [1, 2, 3])


def test_sextuple_root():
    rs = roots_in_strip(sine_wronskian((1, 2, 6)))
    mult = as_dict(rs, 5)
    assert max(mult.values()) == 6


def test_zero_polynomial_rejected():
    with pytest.raises(ValidationError):
        roots_in_strip(ExpPolynomial())


def test_mixed_parity_rejected():
    with pytest.raises(ValidationError):
        x_polynomial(ExpPolynomial({0: 1, 1: 1}))


def test_impossible_tolerance_raises():
    with pytest.raises(RootFindingError):
        roots_in_strip(sine_wronskian((7, 8), kappa=4), tol=1e-30)


def test_near_critical_reports_escape():
    rs = roots_in_strip(sine_wronskian((1, 2), kappa=2 + 1e-12))
    assert rs.escaped >= 1
    assert np.all(np.abs(rs.positions.imag) < 10)


def test_reduce_to_strip_canonical_zero():
    z = reduce_to_strip(-0.0 + 0.5j)
    assert math.copysign(1, z.real) == 1
    assert reduce_to_strip(-1e-20) == 0 or reduce_to_strip(-1e-20).real < math.pi
    assert reduce_to_strip(math.pi + 0.1j) == pytest.approx(0.1j)


def test_cluster_roots_groups_close_points():
    pts = np.array([1.0, 1.0 + 1e-7, 1.0 - 1e-7j, 2.0])
    groups = cluster_roots(pts, 1e-10)
    assert sorted(len(g) for g in groups) == [1, 3]


def test_merge_cancels_sine_factor():
    num = roots_in_strip(sine_wronskian((1, 2), kappa=4))
    den = roots_in_strip(sine_wronskian((1, 2)))
    pos, gam = merge_with_signs(num, den)
    assert sorted(gam.tolist()) == [-2, 1, 1]
    assert abs(pos[np.argmin(gam)]) < 1e-6


def test_merge_identical_is_empty():
    rs = roots_in_strip(sine_wronskian((3, 5)))
    pos, gam = merge_with_signs(rs, rs)
    assert len(pos) == 0 and len(gam) == 0


def test_merge_10_12_common_zeros():
    num = roots_in_strip(sine_wronskian((10, 12), kappa=0))
    den = roots_in_strip(sine_wronskian((10, 12)))
    pos, gam = merge_with_signs(num, den)
    doubles = pos[gam == -2]
    assert len(doubles) == 2
    assert min(strip_distance(doubles, 0)) < 1e-6
    assert min(strip_distance(doubles, math.pi / 2)) < 1e-6


def test_merge_ambiguous_rejected():
    num = RootSet((Root(0.1 + 0j, 1, 0.0), Root(0.1 + 1e-8j, 1, 0.0)))
    den = RootSet((Root(0.1 + 0j, 1, 0.0),))
    with pytest.raises(ValidationError):
        merge_with_signs(num, den)


@given(street_specs(max_n=3, max_k=9), st.floats(-6, 6))
def test_root_count_conservation(spec, kappa):
    for p in (sine_wronskian(spec.k, spec.phi), sine_wronskian(spec.k, spec.phi, kappa=kappa)):
        if min(abs(abs(kappa) - k) for k in spec.k) < 0.05:
            continue
        rs = roots_in_strip(p)
        assert rs.total_multiplicity + rs.escaped == p.span // 2
        assert all(r.residual <= rs.tol for r in rs.roots)


@given(street_specs(max_n=3, max_k=8))
def test_deflation_leaves_constant(spec):
    p = sine_wronskian(spec.k, spec.phi)
    _, _, q = x_polynomial(p)
    rs = roots_in_strip(p)
    xs = np.exp(2j * rs.positions)
    test_points = np.exp(2j * np.array([0.3 + 0.7j, 1.9 - 0.4j, 2.6 + 0.05j]))
    for x in test_points:
        qx = np.polyval(q[::-1], x)
        prod = q[-1] * np.prod([(x - r) ** m for r, m in zip(xs, rs.multiplicities)])
        assert abs(qx / prod - 1) < 1e-6


@given(st.lists(st.integers(1, 9), min_size=1, max_size=3, unique=True),
       st.lists(st.floats(-1.5, 1.5), min_size=3, max_size=3),
       st.floats(-5, 5))
def test_conjugation_symmetry_of_denominator_zeros(k, phis, kappa):
    # real phases: W_{k,phi} has real coefficients up to a phase, so zeros come in conjugate pairs
    k = sorted(k)
    spec = StreetSpec(tuple(k), tuple(phis[: len(k)]))
    rs = roots_in_strip(sine_wronskian(spec.k, spec.phi))
    pos = rs.positions
    mirrored = reduce_to_strip(np.conj(pos))
    for z in mirrored:
        assert min(strip_distance(pos, z)) < 1e-5


@given(st.lists(st.integers(1, 9), min_size=1, max_size=3, unique=True), st.floats(-5, 5))
def test_reflection_symmetry_real_kappa(k, kappa):
    # phi = 0 and real kappa: zero set invariant under z -> -conj(z) (mod pi)
    k = tuple(sorted(k))
    if min(abs(abs(kappa) - kj) for kj in k) < 0.05:
        return
    rs = roots_in_strip(sine_wronskian(k, kappa=kappa))
    pos = rs.positions
    for z in reduce_to_strip(-np.conj(pos)):
        assert min(strip_distance(pos, z)) < 1e-5


def test_strip_distance_periodic():
    assert strip_distance(0.01, math.pi - 0.01) == pytest.approx(0.02)
    assert strip_distance(1j, 1j + 3 * math.pi) == pytest.approx(0, abs=1e-14)


def test_log_mapping_round_trip():
    z = 0.7 - 0.4j
    x = cmath.exp(2j * z)
    assert reduce_to_strip(-0.5j * cmath.log(x)) == pytest.approx(z)


def test_high_precision_polish():
    # sin z sin 3z: simple zero at pi/3, double zero at 0
    p = from_sine(1) * from_sine(3)
    coeffs = dict(p.coeffs)
    rough = RootSet((Root(math.pi / 3 + 3e-9, 1, 0.0), Root(2e-9j, 2, 0.0), Root(2.0, 1, 0.0)))
    with mp.workdps(40):
        exact = {e: mp.mpc(c) for e, c in coeffs.items()}
    fine = polish_high_precision(rough, exact)
    with mp.workdps(40):
        third = complex(mp.pi / 3)
    assert fine.roots[0].z == third  # correctly rounded, unlike math.pi / 3
    assert abs(fine.roots[1].z) <= 1e-16 and fine.roots[1].multiplicity == 2
    # 2.0 is not a root: Newton would move far, so it is kept
    assert fine.roots[2].z == 2.0
