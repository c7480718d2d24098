#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import math

import numpy as np
import pytest

from error_handler import ConvergenceError, ParameterError
from qubit_models import (CSFQSpec, ModeSpectrum, TransmonSpec, csfq_f01_profile, csfq_flux_spectrum,
                          csfq_numeric_spectrum, csfq_optimize_xi, csfq_perturbative_spectrum,
                          csfq_potential_minimum, csfq_sweet_spot_params, lowering_operator,
                          normal_ordered_coefficients, perturbative_corrections, potential_derivatives,
                          transmon_spectrum)

SWEET_SPOT_SPEC = CSFQSpec(charging_energy=0.292, josephson_energy=108.9, alpha=0.43)


def test_lowering_operator():
    a = lowering_operator(4)
    assert a[0, 1] == 1.0
    assert a[2, 3] == pytest.approx(math.sqrt(3))
    np.testing.assert_allclose(np.diag(a.T @ a), [0, 1, 2, 3])


def test_duffing_ladder():
    spectrum = transmon_spectrum(TransmonSpec(5.0, -0.3), 4)
    np.testing.assert_allclose(spectrum.array, [0.0, 5.0, 9.7, 14.1])
    assert spectrum.frequency == 5.0
    assert spectrum.anharmonicity == pytest.approx(-0.3)


def test_duffing_ladder_must_increase():
    with pytest.raises(ParameterError):
        transmon_spectrum(TransmonSpec(1.0, -0.6), 4)


def test_mode_spectrum_bounds():
    spectrum = ModeSpectrum.from_energies([2.0, 7.0, 11.7])
    assert spectrum.energies[0] == 0.0
    assert spectrum.truncated(2).energies == (0.0, 5.0)
    with pytest.raises(ParameterError):
        spectrum.transition(2)
    with pytest.raises(ParameterError):
        ModeSpectrum((1.0, 2.0))


@pytest.mark.parametrize('kwargs', [
    {'alpha': 0.5}, {'alpha': 0.6}, {'alpha': -0.1}, {'alpha': 0.4, 'half_order': 1},
])
def test_csfq_parameter_checks(kwargs):
    base = {'charging_energy': 0.3, 'josephson_energy': 100.0}
    with pytest.raises(ParameterError):
        CSFQSpec(**base, **kwargs)


def test_sweet_spot_closed_form():
    omega, delta, phi_zpf = csfq_sweet_spot_params(SWEET_SPOT_SPEC)
    assert omega == pytest.approx(math.sqrt(8 * 108.9 * 0.292 * 0.07))
    assert delta == pytest.approx(4 * 0.292 * 0.305 / 0.14)
    assert delta > 0
    assert phi_zpf ** 4 == pytest.approx(4 * 0.292 / (108.9 * 0.14))


def test_sweet_spot_only_at_half_flux():
    with pytest.raises(ParameterError):
        csfq_sweet_spot_params(CSFQSpec(0.292, 108.9, 0.43, flux=0.51))


def test_potential_derivatives_at_sweet_spot():
    derivatives = potential_derivatives(SWEET_SPOT_SPEC, 0.0, 4)
    assert derivatives[1] == pytest.approx(0.0, abs=1e-9)
    assert derivatives[2] == pytest.approx(108.9 * (0.5 - 0.43))
    assert derivatives[3] == pytest.approx(0.0, abs=1e-9)
    assert derivatives[4] == pytest.approx(108.9 * (0.43 - 1 / 8))


def test_potential_minimum_off_sweet_spot():
    assert csfq_potential_minimum(SWEET_SPOT_SPEC) == 0.0
    spec = CSFQSpec(0.292, 108.9, 0.43, flux=0.502)
    phi0 = csfq_potential_minimum(spec)
    assert potential_derivatives(spec, phi0, 1)[1] == pytest.approx(0.0, abs=1e-9)
    linearised = -2 * np.pi * 0.43 * 0.002 / 0.07
    assert phi0 == pytest.approx(linearised, rel=0.2)


def test_normal_ordered_kinetic_term():
    coefficients = normal_ordered_coefficients([0.0, 0.0, 0.0], 0.25, 0.5)
    assert coefficients[1, 1] == pytest.approx(2.0)
    assert coefficients[0, 0] == pytest.approx(1.0)
    assert coefficients[2, 0] == pytest.approx(-1.0)
    assert coefficients[0, 2] == pytest.approx(-1.0)


def test_harmonic_optimum_is_exact():
    charging, curvature = 0.3, 8.0
    derivatives = [0.0, 0.0, curvature]
    xi_star = (2 * charging / curvature) ** 0.25
    exact = math.sqrt(8 * charging * curvature)

    def f01(xi):
        total = perturbative_corrections(derivatives, charging, xi, 3, 4).total
        return total[1] - total[0]

    levels = perturbative_corrections(derivatives, charging, xi_star, 3, 4)
    np.testing.assert_allclose(levels.first, 0.0, atol=1e-12)
    assert f01(xi_star) == pytest.approx(exact, rel=1e-10)
    assert f01(0.8 * xi_star) > exact
    assert f01(1.25 * xi_star) > exact


def test_perturbation_input_checks():
    with pytest.raises(ParameterError):
        perturbative_corrections([0.0, 0.0, 1.0], 0.3, -0.1, 3, 4)
    with pytest.raises(ParameterError):
        perturbative_corrections([0.0, 0.0, 1.0], 0.3, 0.5, 3, 80)


def test_xi_optimum_window():
    xi_star = csfq_optimize_xi(SWEET_SPOT_SPEC)
    _, _, phi_zpf = csfq_sweet_spot_params(SWEET_SPOT_SPEC)
    assert 0.8 * phi_zpf / math.sqrt(2) < xi_star < 1.1 * phi_zpf
    profile = csfq_f01_profile(SWEET_SPOT_SPEC, [0.7 * xi_star, xi_star, 1.3 * xi_star])
    assert profile[1] <= profile[0]
    assert profile[1] <= profile[2]


def test_xi_window_without_interior_minimum():
    with pytest.raises(ConvergenceError):
        csfq_optimize_xi(SWEET_SPOT_SPEC, window=(0.05, 0.1), grid_points=10)


def test_numeric_spectrum_basis_checks():
    with pytest.raises(ParameterError):
        csfq_numeric_spectrum(SWEET_SPOT_SPEC, basis_size=10)


@pytest.mark.acceptance
def test_perturbative_spectrum_against_numeric():
    xi_star = csfq_optimize_xi(SWEET_SPOT_SPEC)
    perturbative = csfq_perturbative_spectrum(SWEET_SPOT_SPEC, xi_star)
    numeric = csfq_numeric_spectrum(SWEET_SPOT_SPEC)
    assert perturbative.anharmonicity > 0
    assert numeric.anharmonicity > 0
    assert perturbative.frequency == pytest.approx(numeric.frequency, rel=0.01)
    assert perturbative.anharmonicity == pytest.approx(numeric.anharmonicity, rel=0.05)


@pytest.mark.acceptance
def test_frequency_grows_away_from_sweet_spot():
    spectra = csfq_flux_spectrum(SWEET_SPOT_SPEC, [0.5, 0.503, 0.506])
    frequencies = [s.frequency for s in spectra]
    assert frequencies[0] < frequencies[1] < frequencies[2]
