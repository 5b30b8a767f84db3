import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hopfmirror.errors import InsufficientDataError
from hopfmirror.numerics import (
    Decay,
    ModularParam,
    ThetaSpec,
    decay_classify,
    frac_part,
    qpow,
    theta,
    theta_sum,
    theta_window,
)

MP = ModularParam(1j)
STD = ThetaSpec(Fraction(0), Fraction(0), Fraction(1))

rationals = st.fractions(min_value=-3, max_value=3, max_denominator=8)
unit_phase = st.floats(min_value=0, max_value=2 * math.pi)
moduli = st.floats(min_value=0.3, max_value=3.0)
taus = st.builds(
    complex, st.floats(min_value=-0.5, max_value=0.5), st.floats(min_value=0.4, max_value=2.0)
)


def test_modular_param_rejects_lower_half_plane():
    with pytest.raises(ValueError):
        ModularParam(-1j)
    with pytest.raises(ValueError):
        ModularParam(0.5)


def test_q_is_exponential_of_tau():
    mp = ModularParam(0.3 + 0.8j)
    assert mp.q == pytest.approx(cmath.exp(2j * math.pi * (0.3 + 0.8j)))
    assert 0 < abs(mp.q) < 1


def test_qpow_reduces_phase():
    assert qpow(MP, 0, Fraction(7, 4)) == pytest.approx(qpow(MP, 0, Fraction(-1, 4)))
    assert frac_part(Fraction(-1, 4)) == Fraction(3, 4)


def test_theta_at_one_matches_partial_sum():
    # sum over |l| <= 50 of e^(-pi l^2)
    frozen = 1.0864348112133082
    assert abs(theta(STD, MP, 1, 1) - frozen) < 1e-12


def test_theta_with_half_characteristic_phase():
    # c'' = 1/2 inserts (-1)^l
    spec = ThetaSpec(Fraction(0), Fraction(1, 2), Fraction(1))
    assert abs(theta(spec, MP, 1, 1) - 0.9135791381561167) < 1e-12


@given(unit_phase, moduli, taus)
def test_theta_inversion_symmetry(phi, r, tau):
    mp = ModularParam(tau)
    x = r * cmath.exp(1j * phi)
    assert abs(theta(STD, mp, 1, x) - theta(STD, mp, 1, 1 / x)) < 1e-10


@given(rationals, rationals, unit_phase, moduli, taus)
def test_theta_characteristic_shift(cp, cpp, phi, r, tau):
    mp = ModularParam(tau)
    x = r * cmath.exp(1j * phi)
    a = theta(ThetaSpec(cp, cpp, Fraction(1)), mp, 1, x)
    b = theta(ThetaSpec(cp + 1, cpp, Fraction(1)), mp, 1, x)
    assert abs(a - b) < 1e-12 * max(1.0, abs(a))


@given(unit_phase, st.floats(min_value=0.4, max_value=2.0))
def test_theta_conjugation_for_real_nome(phi, im):
    mp = ModularParam(1j * im)
    x = cmath.exp(1j * phi)
    assert abs(theta(STD, mp, 1, x.conjugate()) - theta(STD, mp, 1, x).conjugate()) < 1e-12


@given(rationals, rationals, st.sampled_from([Fraction(1), Fraction(2), Fraction(3, 2)]),
       unit_phase, moduli, taus)
def test_doubling_window_stays_within_eps(cp, cpp, nome, phi, r, tau):
    mp = ModularParam(tau)
    spec = ThetaSpec(cp, cpp, nome)
    x = r * cmath.exp(1j * phi)
    eps = 1e-12
    lo, hi = theta_window(spec, mp, 1, x, eps)
    width = hi - lo + 1
    wide = theta_sum(spec, mp, 1, x, lo - width, hi + width)
    assert abs(theta_sum(spec, mp, 1, x, lo, hi) - wide) < eps


def test_theta_validates_inputs():
    with pytest.raises(ValueError):
        ThetaSpec(Fraction(0), Fraction(0), Fraction(0))
    with pytest.raises(ValueError):
        theta(STD, MP, 1, 0)
    with pytest.raises(ValueError):
        theta(STD, MP, 1, 1, eps=0)


def test_decay_gaussian_coefficients_are_super_exponential():
    q = MP.q
    coeffs = [(j, q ** (j * j / 4)) for j in range(-12, 13)]
    assert decay_classify(coeffs) is Decay.SUPER_EXPONENTIAL


def test_decay_constant_coefficients():
    assert decay_classify([(j, 1.0) for j in range(-8, 9)]) is Decay.NOT_SUPER_EXPONENTIAL


def test_decay_geometric_coefficients():
    coeffs = [(j, 2.0 ** -abs(j)) for j in range(-12, 13)]
    assert decay_classify(coeffs) is Decay.NOT_SUPER_EXPONENTIAL


def test_decay_needs_enough_samples():
    with pytest.raises(InsufficientDataError):
        decay_classify([(1, 1.0), (2, 1.0)])
    with pytest.raises(InsufficientDataError):
        decay_classify([(1, 1.0)] * 3 + [(2, 0.5)] * 3)
