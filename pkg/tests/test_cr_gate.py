#!/usr/bin/env python3
# -*- coding: utf-8 -*-

from dataclasses import replace

import numpy as np
import pytest

from circuit_hamiltonian import BareLabel, OperatorMatrix
from cr_gate import (CrossResonanceModel, DriveSpec, PAULI_LABELS, cancellation_amplitude, cr_drive_matrix,
                     eta_closed_form_ct, eta_closed_form_tt, eta_fit, omega_star_formula, pauli_decompose,
                     pauli_matrix, rotating_frame_rwa)
from device_library import preset
from error_handler import DivergenceError, ParameterError, RegimeError


def test_pauli_decomposition_reconstructs():
    rng = np.random.default_rng(0)
    noise = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h = noise + noise.conj().T
    coefficients = pauli_decompose(h)
    assert len(coefficients.coefficients) == len(PAULI_LABELS) == 16
    np.testing.assert_allclose(coefficients.as_matrix(), h, atol=1e-12)


def test_alpha_normalisation():
    h = 0.3 / 2 * pauli_matrix('ZX') + 0.1 / 4 * pauli_matrix('ZZ') + 0.02 / 2 * pauli_matrix('IX')
    coefficients = pauli_decompose(h)
    assert coefficients.zx == pytest.approx(0.3)
    assert coefficients.zz == pytest.approx(0.1)
    assert coefficients.ix == pytest.approx(0.02)
    assert coefficients.zy == pytest.approx(0.0)


def test_pauli_decompose_checks():
    with pytest.raises(ParameterError):
        pauli_decompose(np.eye(3))
    with pytest.raises(ParameterError):
        pauli_decompose(np.triu(np.ones((4, 4))))


def test_phase_shift_flips_odd_terms():
    h = pauli_matrix('ZX') + pauli_matrix('ZZ') + pauli_matrix('IY') + pauli_matrix('XX')
    shifted = pauli_decompose(h).phase_shifted()
    assert shifted.coefficients['ZX'] == pytest.approx(-1.0)
    assert shifted.coefficients['IY'] == pytest.approx(-1.0)
    assert shifted.coefficients['ZZ'] == pytest.approx(1.0)
    assert shifted.coefficients['XX'] == pytest.approx(1.0)
    zz = pauli_matrix('ZZ')
    np.testing.assert_allclose(shifted.as_matrix(), zz @ h @ zz, atol=1e-12)


def test_drive_matrix():
    plain = cr_drive_matrix(0.1, 3)
    physical = cr_drive_matrix(0.1, 3, physical=True)
    assert plain[1, 2] == pytest.approx(0.1)
    assert physical[1, 2] == pytest.approx(0.1 * np.sqrt(2))
    assert physical[2, 1] == physical[1, 2]
    with pytest.raises(ParameterError):
        cr_drive_matrix(-0.1, 3)
    with pytest.raises(ParameterError):
        DriveSpec(-0.01, 5.0)


def test_rotating_frame_drops_counter_rotating_elements():
    basis = [BareLabel(0, 0, 0), BareLabel(0, 0, 1), BareLabel(1, 0, 0), BareLabel(1, 0, 1)]
    matrix = np.diag([0.0, 5.0, 5.1, 10.1]).astype(complex)
    matrix[0, 3] = matrix[3, 0] = 0.01
    matrix[1, 2] = matrix[2, 1] = 0.02
    rotated = rotating_frame_rwa(OperatorMatrix(matrix, basis), DriveSpec(0.04, 5.0))
    np.testing.assert_allclose(np.real(np.diag(rotated.matrix)), [0.0, 0.0, 0.1, 0.1])
    assert rotated.matrix[0, 3] == 0
    assert rotated.matrix[1, 2] == pytest.approx(0.02)
    assert rotated.matrix[0, 2] == pytest.approx(0.02)
    assert rotated.matrix[1, 3] == pytest.approx(0.02)


def test_model_checks(small_params):
    spec = small_params.build()
    with pytest.raises(ParameterError):
        CrossResonanceModel(spec, method='GRAPE')
    with pytest.raises(ParameterError):
        CrossResonanceModel(spec, drive_stage='coupler')
    with pytest.raises(ParameterError):
        CrossResonanceModel(spec, hamiltonian='lumped')


def test_undriven_zz_matches_static(small_params):
    model = CrossResonanceModel(small_params.build())
    coefficients = model.coefficients(0.0)
    assert coefficients.zz == pytest.approx(model.zeta, rel=2e-2, abs=2e-6)
    assert abs(coefficients.zx) < 1e-9


def test_circuit_stage_undriven_has_no_zx(small_params):
    model = CrossResonanceModel(small_params.build(), hamiltonian='circuit', drive_stage='circuit')
    assert model.h_2q is None
    assert abs(model.coefficients(0.0).zx) < 1e-9


def test_zx_calibrated_and_linear(ct_spec):
    model = CrossResonanceModel(ct_spec)
    weak = model.coefficients(0.005).zx
    assert weak > 0
    assert model.coefficients(0.01).zx == pytest.approx(2 * weak, rel=0.05)
    with pytest.raises(ParameterError):
        model.coefficients(-0.01)


def test_sw_agrees_with_la_at_weak_drive(ct_spec):
    la = CrossResonanceModel(ct_spec, method='LA').coefficients(0.005)
    sw = CrossResonanceModel(ct_spec, method='SW').coefficients(0.005)
    assert sw.zx == pytest.approx(la.zx, rel=1e-2)


def test_eta_fit_quadratic():
    assert eta_fit(lambda omega: 1e-4 + 3.0 * omega ** 2) == pytest.approx(3.0, rel=1e-9)
    assert eta_fit(lambda omega: 2e-4) == 0.0


def test_eta_fit_outside_quadratic_regime():
    with pytest.raises(RegimeError) as info:
        eta_fit(lambda omega: 1e6 * omega ** 4)
    assert 'eta_half' in info.value.details


def test_closed_forms_scale_with_coupling():
    assert eta_closed_form_tt(-0.33, -0.1, 0.0) == 0.0
    assert eta_closed_form_ct(-0.33, 0.1, 0.0) == 0.0
    ratio = eta_closed_form_tt(-0.33, -0.1, 0.004) / eta_closed_form_tt(-0.33, -0.1, 0.002)
    assert ratio == pytest.approx(4.0)
    with pytest.raises(DivergenceError):
        eta_closed_form_tt(-0.33, 0.0, 0.002)
    with pytest.raises(DivergenceError):
        eta_closed_form_ct(-0.33, 0.66, 0.002)


def test_omega_star_formula_equal_anharmonicities():
    expected = 0.1 * np.sqrt(1 - 1.125 * 0.1 / 0.33)
    assert omega_star_formula(-0.1, -0.33, -0.33, 1.0) == pytest.approx(expected)
    assert omega_star_formula(-0.3, -0.33, -0.33, 1.0) is None
    with pytest.raises(ParameterError):
        omega_star_formula(0.1, 0.0, -0.33, 1.0)


def test_unknown_cancellation_method(ct_spec):
    with pytest.raises(ParameterError):
        cancellation_amplitude(ct_spec, method='grape')


@pytest.mark.acceptance
@pytest.mark.parametrize('device_id, expected_mhz', [
    (1, 41.4), (2, 34.0), (3, 40.0), (4, 20.3), (5, None),
    (6, 110.7), (7, 104.0), (8, 81.0), (9, 45.5), (10, 61.0),
])
def test_formula_cancellation_amplitudes(device_id, expected_mhz):
    omega = cancellation_amplitude(preset(device_id).to_circuit(), method='formula')
    if expected_mhz is None:
        assert omega is None
    else:
        assert omega * 1e3 == pytest.approx(expected_mhz, abs=1.0)


@pytest.mark.acceptance
@pytest.mark.parametrize('device_id, expected_mhz', [
    (1, 41.0), (2, 31.0), (3, 24.0), (4, None), (5, None),
    (6, None), (7, 71.0), (8, 83.0), (9, 46.0), (10, 62.0),
])
def test_perturbative_cancellation_amplitudes(device_id, expected_mhz):
    omega = cancellation_amplitude(preset(device_id).to_circuit(), method='on')
    if expected_mhz is None:
        assert omega is None
    else:
        assert omega * 1e3 == pytest.approx(expected_mhz, rel=0.1)


@pytest.mark.acceptance
@pytest.mark.parametrize('device_id, expected_mhz', [
    (1, 42.0), (2, 30.0), (3, 24.0), (4, None), (5, None),
    (6, None), (7, None), (8, 115.0), (9, 61.0), (10, 82.0),
])
def test_least_action_cancellation_amplitudes(device_id, expected_mhz):
    omega = cancellation_amplitude(preset(device_id).to_circuit(), method='la')
    if expected_mhz is None:
        assert omega is None
    else:
        assert omega * 1e3 == pytest.approx(expected_mhz, abs=max(0.15 * expected_mhz, 5.0))


@pytest.mark.acceptance
def test_dynamic_zz_is_positive_for_csfq_transmon(ct_spec):
    assert eta_fit(CrossResonanceModel(ct_spec)) > 0


def test_pi_phase_drive_flips_odd_terms(device):
    model = CrossResonanceModel(device(2).to_circuit())
    plus = model.coefficients(0.03)
    minus = model.coefficients(0.03, np.pi)
    expected = plus.phase_shifted()
    for label in PAULI_LABELS:
        assert minus.coefficients[label] == pytest.approx(expected.coefficients[label], abs=1e-8)
    assert minus.zx == pytest.approx(-plus.zx, rel=1e-6)
    assert minus.zz == pytest.approx(plus.zz, rel=1e-6)


def test_quarter_phase_drive_rotates_zx_into_zy(device):
    model = CrossResonanceModel(device(2).to_circuit())
    plus = model.coefficients(0.02)
    rotated = model.coefficients(0.02, np.pi / 2)
    assert abs(rotated.zx) < 1e-8
    assert abs(rotated.zy) == pytest.approx(plus.zx, rel=1e-6)
    assert rotated.zz == pytest.approx(plus.zz, rel=1e-6)


def test_control_flip_terms_removed(ct_spec):
    model = CrossResonanceModel(ct_spec)
    coefficients = model.coefficients(0.05)
    for label in PAULI_LABELS:
        if label[0] in 'XY':
            assert abs(coefficients.coefficients[label]) < 1e-10


def test_effective_model_drives_nine_levels(ct_spec):
    model = CrossResonanceModel(ct_spec)
    assert model.h_full is None
    assert model.h_2q.dim == 9
    assert model.drive_frequency == pytest.approx(5.292, abs=0.02)


@pytest.mark.acceptance
@pytest.mark.parametrize('device_id', range(1, 11))
def test_sw_agrees_with_la_on_devices(device_id):
    spec = preset(device_id).to_circuit()
    la = CrossResonanceModel(spec, method='LA').coefficients(0.005)
    sw = CrossResonanceModel(spec, method='SW').coefficients(0.005)
    assert sw.zx == pytest.approx(la.zx, rel=0.05)


def test_transmon_pair_eta_closed_form_negative():
    assert eta_closed_form_tt(-0.33, -0.05, 0.004) < 0
    assert eta_closed_form_tt(-0.33, -0.05, -0.006) < 0


@pytest.mark.acceptance
def test_transmon_pair_dynamic_zz_negative(tt_params):
    spec = replace(tt_params, g12=0.0025).with_detuning(-0.05).build()
    assert eta_fit(CrossResonanceModel(spec)) < 0
