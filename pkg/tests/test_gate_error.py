#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import numpy as np
import pytest

from cr_gate import CrossResonanceModel, cancellation_amplitude, pauli_decompose, pauli_matrix
from device_library import preset
from error_handler import ParameterError
from gate_error import (EchoSequence, average_gate_fidelity, echo_frequency, echo_unitary, flat_top_for_pi_over_2,
                        gate_error_curve, gate_length_cutoff, ideal_cr_gate, min_gate_length)

ALPHA_ZX = 0.0027


def _echo_error(alpha_zz, zz_during_pi=False, static_zz=0.0):
    coefficients = pauli_decompose(ALPHA_ZX / 2 * pauli_matrix('ZX') + alpha_zz / 4 * pauli_matrix('ZZ'))
    seq = EchoSequence.from_coefficients(coefficients, static_zz=static_zz, zz_during_pi=zz_during_pi)
    return 1 - average_gate_fidelity(echo_unitary(seq))


def test_echo_frequency():
    assert echo_frequency(3.0, 0.4) == pytest.approx(6.0133, abs=1e-4)
    assert echo_frequency(0.0027, 0.0) == pytest.approx(0.0054)


def test_flat_top_duration():
    assert flat_top_for_pi_over_2(ALPHA_ZX) == pytest.approx(46.3, abs=0.05)
    with pytest.raises(ParameterError):
        flat_top_for_pi_over_2(0.0)


def test_gate_length_floor():
    assert min_gate_length(0.0025) == pytest.approx(180.0)
    assert min_gate_length(0.0025, pi_pulse=20.0) == pytest.approx(140.0)
    with pytest.raises(ParameterError):
        min_gate_length(-0.001)


def test_sequence_length():
    coefficients = pauli_decompose(ALPHA_ZX / 2 * pauli_matrix('ZX'))
    seq = EchoSequence.from_coefficients(coefficients)
    assert seq.gate_length == pytest.approx(2 * seq.tau + 80.0)
    assert seq.minus_cr.zx == pytest.approx(-ALPHA_ZX)
    with pytest.raises(ParameterError):
        EchoSequence(tau=-1.0, plus_cr=coefficients, minus_cr=coefficients)


def test_fidelity_bounds():
    assert average_gate_fidelity(ideal_cr_gate()) == pytest.approx(1.0)
    assert average_gate_fidelity(np.exp(0.7j) * ideal_cr_gate()) == pytest.approx(1.0)
    assert average_gate_fidelity(np.eye(4)) == pytest.approx(0.6)


def test_pure_zx_echo_is_ideal():
    assert _echo_error(0.0) < 1e-10


def test_error_quadratic_in_zz():
    small, double = _echo_error(1e-5), _echo_error(2e-5)
    assert small > 0
    assert double / small == pytest.approx(4.0, rel=1e-2)


def test_static_zz_during_pi_pulses():
    assert _echo_error(0.0, static_zz=1e-4) < 1e-10
    assert _echo_error(0.0, zz_during_pi=True, static_zz=1e-4) > 1e-6


def test_cutoff_follows_largest_zx(ct_spec):
    model = CrossResonanceModel(ct_spec)
    amplitudes = [0.005, 0.01, 0.02]
    alpha_max = max(model.coefficients(a).zx for a in amplitudes)
    assert gate_length_cutoff(model, amplitudes) == pytest.approx(min_gate_length(alpha_max))


def test_curve_skips_undriven_point(ct_spec, single_thread_config):
    model = CrossResonanceModel(ct_spec)
    points = gate_error_curve(model, [0.0, 0.01, 0.02], config=single_thread_config)
    assert [p.amplitude for p in points] == [0.01, 0.02]
    assert points[0].gate_length > points[1].gate_length
    assert all(0 <= p.error < 1 for p in points)


@pytest.mark.acceptance
def test_device_two_has_error_free_gate(single_thread_config):
    spec = preset(2).to_circuit()
    omega_star = cancellation_amplitude(spec, method='la')
    assert omega_star is not None
    model = CrossResonanceModel(spec)
    point, = gate_error_curve(model, [omega_star], zz_during_pi=False, config=single_thread_config)
    assert point.error < 1e-6
    assert point.gate_length == pytest.approx(172.0, abs=10.0)


@pytest.mark.acceptance
def test_static_zz_during_pi_raises_device_two_error(single_thread_config):
    spec = preset(2).to_circuit()
    omega_star = cancellation_amplitude(spec, method='la')
    model = CrossResonanceModel(spec)
    quiet, = gate_error_curve(model, [omega_star], zz_during_pi=False, config=single_thread_config)
    evolved, = gate_error_curve(model, [omega_star], config=single_thread_config)
    assert evolved.gate_length == pytest.approx(quiet.gate_length)
    assert evolved.error > quiet.error


@pytest.mark.acceptance
def test_device_three_error_dip(single_thread_config):
    spec = preset(3).to_circuit()
    omega_star = cancellation_amplitude(spec, method='la')
    assert omega_star is not None
    model = CrossResonanceModel(spec)
    amplitudes = sorted(set(np.round(np.arange(0.005, 0.0451, 0.0025), 6)) | {omega_star})
    points = gate_error_curve(model, amplitudes, zz_during_pi=False, config=single_thread_config)
    best = min(points, key=lambda p: p.error)
    assert best.amplitude == pytest.approx(omega_star)
    assert best.gate_length == pytest.approx(235.0, abs=15.0)


@pytest.mark.acceptance
def test_device_seven_error_floor(single_thread_config):
    model = CrossResonanceModel(preset(7).to_circuit())
    amplitudes = np.arange(0.005, 0.1501, 0.005)
    points = gate_error_curve(model, amplitudes, zz_during_pi=False, config=single_thread_config)
    floor = min(p.error for p in points)
    assert 1e-7 < floor <= 1e-4
    assert gate_length_cutoff(model, amplitudes) == pytest.approx(180.0, abs=15.0)
