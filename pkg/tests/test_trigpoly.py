import cmath
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vortexstreets.errors import ValidationError
from vortexstreets.trigpoly import (
    ExpPolynomial,
    StreetSpec,
    differentiate,
    evaluate,
    from_sine,
    log_derivative,
    sine_wronskian,
    sine_wronskian_mp,
    wronskian,
)

from .oracle_values import WRONSKIAN_1_2_KAPPA4_AT_03_01

small_complex = st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False)


@st.composite
def exp_polys(draw, max_terms=5, span=6, spectral=False):
    n = draw(st.integers(1, max_terms))
    exps = draw(st.lists(st.integers(-span, span), min_size=n, max_size=n, unique=True))
    coeffs = {e: draw(small_complex.filter(lambda c: abs(c) > 1e-3)) for e in exps}
    kappa = draw(small_complex) if spectral else 0j
    return ExpPolynomial(coeffs, kappa)


@st.composite
def street_specs(draw, max_n=4, max_k=10):
    k = sorted(draw(st.lists(st.integers(1, max_k), min_size=1, max_size=max_n, unique=True)))
    phi = draw(st.lists(st.complex_numbers(max_magnitude=1.0, allow_nan=False, allow_infinity=False),
                        min_size=len(k), max_size=len(k)))
    return StreetSpec(tuple(k), tuple(phi))


def fd_derivatives(f, z, order, h=1e-2):
    """Derivatives 0..order by Cauchy integral on a small circle (spectrally accurate)."""
    n = 64
    t = np.exp(2j * math.pi * np.arange(n) / n)
    vals = np.array([f(z + h * w) for w in t])
    return [math.factorial(k) * np.mean(vals * t ** (-k)) / h ** k for k in range(order + 1)]


def test_from_sine_coefficients():
    p = from_sine(1, 0)
    assert dict(p.coeffs) == pytest.approx({1: 1 / 2j, -1: -1 / 2j})
    assert p.spectral == 0


def test_from_sine_phase_shift():
    assert evaluate(from_sine(2, math.pi / 2), 0.0) == pytest.approx(1.0)


def test_from_sine_complex_phase():
    assert evaluate(from_sine(3, 0.7j), 0.2) == pytest.approx(cmath.sin(0.6 + 0.7j), rel=1e-14)


@pytest.mark.parametrize("k", [0, -2])
def test_from_sine_rejects_nonpositive(k):
    with pytest.raises(ValidationError):
        from_sine(k)


def test_derivative_of_sine_is_cosine():
    d = differentiate(from_sine(1))
    for z in [0.1, 0.7 - 0.3j, 2.0 + 1.0j, -1.3, 0.5j]:
        assert evaluate(d, z) == pytest.approx(cmath.cos(z), rel=1e-14)


def test_derivative_of_exponential():
    kappa = 1.3 - 0.2j
    d = differentiate(ExpPolynomial.exponential(kappa))
    z = 0.4 + 0.1j
    assert evaluate(d, z) == pytest.approx(1j * kappa * cmath.exp(1j * kappa * z))


def test_second_derivative_sin2z():
    assert differentiate(from_sine(2), 2).almost_equal(ExpPolynomial({2: -4 / 2j, -2: 4 / 2j}))


def test_wronskian_sin_sin2_is_minus_two_sin_cubed():
    w = wronskian([from_sine(1), from_sine(2)])
    expected = from_sine(1) * ExpPolynomial.constant(-1.5) + from_sine(3) * ExpPolynomial.constant(0.5)
    assert w.almost_equal(expected, rtol=1e-15)
    assert evaluate(w, math.pi / 2) == pytest.approx(-2.0)


def test_wronskian_two_sines_closed_form():
    m, n = 3, 5
    w = wronskian([from_sine(m), from_sine(n)])
    expected = (from_sine(m + n) * ExpPolynomial.constant((n - m) / 2)
                - from_sine(n - m) * ExpPolynomial.constant((m + n) / 2))
    assert w.almost_equal(expected, rtol=1e-15)


def test_wronskian_repeated_row_is_zero():
    f = from_sine(3, 0.2)
    assert wronskian([f, f]).is_zero()


def test_wronskian_with_exponential_matches_oracle():
    w = wronskian([from_sine(1), from_sine(2), ExpPolynomial.exponential(4)])
    z = 0.3 + 0.1j
    assert evaluate(w, z) == pytest.approx(WRONSKIAN_1_2_KAPPA4_AT_03_01, rel=1e-13)


def test_wronskian_with_exponential_matches_finite_differences():
    fs = [cmath.sin, lambda z: cmath.sin(2 * z), lambda z: cmath.exp(4j * z)]
    z = 0.3 + 0.1j
    rows = np.array([fd_derivatives(f, z, 2) for f in fs]).T
    fd = np.linalg.det(rows)
    w = wronskian([from_sine(1), from_sine(2), ExpPolynomial.exponential(4)])
    assert abs(evaluate(w, z) - fd) < 1e-8


def test_wronskian_spectral_factor_is_sum():
    w = wronskian([from_sine(1), ExpPolynomial.exponential(2.5)])
    assert w.spectral == 2.5


def test_wronskian_rejects_empty_and_two_spectra():
    with pytest.raises(ValidationError):
        wronskian([])
    with pytest.raises(ValidationError):
        wronskian([ExpPolynomial.exponential(1), ExpPolynomial.exponential(2)])


def test_wronskian_rejects_too_many():
    with pytest.raises(ValidationError):
        wronskian([from_sine(k) for k in range(1, 10)])


def test_empty_sine_wronskian_is_one():
    assert sine_wronskian(()).almost_equal(ExpPolynomial.constant(1))


def test_street_spec_validation():
    with pytest.raises(ValidationError):
        StreetSpec((2, 1))
    with pytest.raises(ValidationError):
        StreetSpec((1, 1))
    with pytest.raises(ValidationError):
        StreetSpec((0, 1))
    with pytest.raises(ValidationError):
        StreetSpec((1, 2), (0.0,))
    assert StreetSpec((1, 2)).phi == (0, 0)
    assert StreetSpec((1, 2, 5), (0.1, 0.2, 0.3)).without(2) == ((1, 5), (0.1, 0.3))


def test_log_derivative_includes_spectral_term():
    p = from_sine(1) * ExpPolynomial.exponential(0.5)
    z = 0.3 + 0.2j
    assert log_derivative(p, z) == pytest.approx(1 / cmath.tan(z) + 0.5j)


def test_evaluate_vectorised():
    z = np.array([0.1, 0.2 + 0.1j, 1.0])
    assert np.allclose(evaluate(from_sine(2), z), np.sin(2 * z))


@given(street_specs(max_n=3), st.integers(0, 2), st.integers(0, 2))
def test_wronskian_antisymmetry(spec, i, j):
    fs = spec.chis()
    i, j = i % len(fs), j % len(fs)
    if i == j:
        return
    swapped = list(fs)
    swapped[i], swapped[j] = swapped[j], swapped[i]
    assert wronskian(swapped).almost_equal(-wronskian(fs), rtol=1e-12)


@given(street_specs())
def test_sine_wronskian_extreme_exponents(spec):
    w = sine_wronskian(spec.k, spec.phi)
    total = sum(spec.k)
    assert w.max_exponent == total and w.min_exponent == -total
    assert abs(w.coeffs[total]) > 0 and abs(w.coeffs[-total]) > 0


@given(street_specs())
def test_sine_wronskian_single_parity(spec):
    assert sine_wronskian(spec.k, spec.phi).parity() is not None


@given(exp_polys(spectral=True), exp_polys(spectral=False))
def test_product_rule(p, q):
    lhs = (p * q).derivative()
    rhs = p.derivative() * q + p * q.derivative()
    assert lhs.almost_equal(rhs, rtol=1e-12)


@given(exp_polys(), exp_polys(), small_complex)
def test_derivative_linearity(p, q, c):
    lhs = (p + q * ExpPolynomial.constant(c)).derivative()
    rhs = p.derivative() + q.derivative() * ExpPolynomial.constant(c)
    scale = p.derivative().norm() + abs(c) * q.derivative().norm() + 1e-300
    diff = lhs - rhs
    assert diff.norm() <= 1e-12 * scale


@given(exp_polys(spectral=True), st.complex_numbers(max_magnitude=1.5, allow_nan=False, allow_infinity=False))
def test_evaluation_matches_definition(p, z):
    direct = sum(c * cmath.exp(1j * n * z) for n, c in p.coeffs.items()) * cmath.exp(1j * p.spectral * z)
    assert evaluate(p, z) == pytest.approx(direct, rel=1e-10, abs=1e-10)


@given(exp_polys(spectral=True), st.complex_numbers(max_magnitude=1.5, allow_nan=False, allow_infinity=False))
def test_shift_by_pi(p, z):
    par = p.parity()
    if par is None:
        return
    factor = (-1) ** par * cmath.exp(1j * p.spectral * math.pi)
    assert evaluate(p, z + math.pi) == pytest.approx(factor * evaluate(p, z), rel=1e-9, abs=1e-9)


@given(street_specs(max_n=3, max_k=12), st.floats(-14, 14))
def test_high_precision_wronskian_agrees(spec, kappa):
    p = sine_wronskian(spec.k, spec.phi, kappa)
    with mp.workdps(40):
        coeffs, spectral = sine_wronskian_mp(spec.k, spec.phi, kappa)
    assert complex(spectral) == p.spectral
    scale = max(abs(c) for c in p.coeffs.values())
    for e in set(coeffs) | set(p.coeffs):
        assert abs(complex(coeffs.get(e, 0)) - p.coeffs.get(e, 0)) <= 1e-14 * scale


def test_product_and_cofactor_expansions_agree(monkeypatch):
    import vortexstreets.trigpoly as tp

    fs = [from_sine(2, 0.3), from_sine(5, 0.1j), ExpPolynomial({1: 1.0, -3: 0.5j}), ExpPolynomial.exponential(1.7)]
    product = wronskian(fs)
    monkeypatch.setattr(tp, "MAX_PRODUCT_TERMS", 0)
    cofactor = wronskian(fs)
    assert product.almost_equal(cofactor, rtol=1e-13)
