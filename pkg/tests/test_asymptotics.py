import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vortexstreets.asymptotics import curve_adherence, equilibrium_curve, moving_curve, sample_curve
from vortexstreets.configuration import VortexConfiguration
from vortexstreets.errors import ValidationError
from vortexstreets.streets import build_street
from vortexstreets.trigpoly import StreetSpec

mn_pairs = st.tuples(st.integers(1, 20), st.integers(1, 6)).map(lambda t: (t[0], t[0] + t[1]))
abscissae = st.floats(0.01, math.pi - 0.01)


def _adherence(m, n, kappa=0.0):
    config, _ = build_street(StreetSpec((m, n), (), kappa))
    return curve_adherence(config, "equilibrium" if kappa == 0 else "moving", m, n, kappa)


def test_equilibrium_curve_value():
    assert equilibrium_curve(10, 12, math.pi / 4) == pytest.approx(math.log(22) / 22, rel=1e-15)


def test_equilibrium_curve_rejects_zero_of_sine():
    with pytest.raises(ValidationError):
        equilibrium_curve(10, 12, math.pi / 2)
    with pytest.raises(ValidationError):
        equilibrium_curve(3, 3, 0.4)


def test_equilibrium_curve_dips_below_axis_near_zeros():
    assert equilibrium_curve(10, 12, 1e-4) < 0
    sample = sample_curve(10, 12, 0, samples=400)
    assert sample.dips.any() and not sample.dips.all()
    assert np.allclose(sample.y_minus, -sample.y_plus)


def test_sample_curve_abscissae():
    sample = sample_curve(7, 8, 4, samples=10)
    assert len(sample.x) == 10 and 0 < sample.x[0] < sample.x[-1] < math.pi


def test_moving_curve_rejects_critical():
    with pytest.raises(ValidationError):
        moving_curve(7, 8, 8, 0.3)
    with pytest.raises(ValidationError):
        moving_curve(7, 8, -7, 0.3)


def test_curve_adherence_rejects_unknown_curve():
    with pytest.raises(ValidationError):
        curve_adherence(VortexConfiguration([0.1j], [1]), "parabola", 1, 2)


def test_adherence_without_off_axis_vortices():
    assert curve_adherence(VortexConfiguration([0.3], [1]), "equilibrium", 1, 2) == 0.0


def test_adherence_10_12():
    assert _adherence(10, 12) <= 0.5 / 22


def test_adherence_20_22_better_than_10_12():
    assert _adherence(20, 22) < _adherence(10, 12)


def test_adherence_monotone_along_family():
    values = [_adherence(m, m + 2) for m in (6, 10, 14, 18)]
    assert all(b <= a for a, b in zip(values, values[1:]))


def test_moving_adherence_7_8_kappa4():
    assert _adherence(7, 8, 4.0) <= 1 / 15


@given(mn_pairs, abscissae)
def test_equilibrium_curve_periodic(mn, x):
    m, n = mn
    if abs(math.sin((n - m) * x)) < 1e-6:
        return
    period = math.pi / (n - m)
    assert equilibrium_curve(m, n, x + period) == pytest.approx(equilibrium_curve(m, n, x), abs=1e-10)


@given(mn_pairs, abscissae)
def test_equilibrium_curve_maximum(mn, x):
    m, n = mn
    if abs(math.sin((n - m) * x)) < 1e-6:
        return
    top = math.log(2 * (m + n) / (n - m)) / (m + n)
    assert equilibrium_curve(m, n, x) <= top + 1e-15
    assert equilibrium_curve(m, n, math.pi / (2 * (n - m))) == pytest.approx(top, rel=1e-14)


@given(mn_pairs, abscissae)
def test_moving_curve_at_rest_is_equilibrium_curve(mn, x):
    m, n = mn
    if abs(math.sin((n - m) * x)) < 1e-6:
        return
    yp, ym = moving_curve(m, n, 0.0, x)
    y = equilibrium_curve(m, n, x)
    assert abs(yp - y) <= 1e-14 and abs(ym + y) <= 1e-14


@given(mn_pairs, abscissae, st.floats(-30, 30))
def test_branch_gap_is_independent_of_shift(mn, x, kappa):
    m, n = mn
    if min(abs(abs(kappa) - m), abs(abs(kappa) - n)) < 0.05:
        return
    N, D = n + m, n - m
    c = kappa ** 2 * D ** 2 / ((kappa ** 2 - n ** 2) * (kappa ** 2 - m ** 2))
    inner = abs(math.sin(D * x) ** 2 + c)
    if inner < 1e-12:
        return
    yp, ym = moving_curve(m, n, kappa, x)
    assert yp - ym == pytest.approx((2 * math.log(2 * N / D) + math.log(inner)) / N, rel=1e-12, abs=1e-12)
    shift = math.log(abs((kappa - n) * (kappa - m) / ((kappa + n) * (kappa + m)))) / (2 * N)
    assert 0.5 * (yp + ym) == pytest.approx(shift, rel=1e-12, abs=1e-12)
