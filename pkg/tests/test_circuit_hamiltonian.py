#!/usr/bin/env python3
# -*- coding: utf-8 -*-

from dataclasses import replace

import numpy as np
import pytest

from circuit_hamiltonian import (BareLabel, CircuitSpec, OperatorMatrix, bare_index, bare_label,
                                 build_full_hamiltonian, excitation_numbers)
from error_handler import ParameterError
from qubit_models import TransmonSpec, transmon_spectrum


def test_basis_order(small_params):
    spec = small_params.build()
    basis = spec.basis()
    assert spec.dim == 27
    assert basis[0] == BareLabel(0, 0, 0)
    assert basis[1] == BareLabel(0, 0, 1)
    assert basis[3] == BareLabel(0, 1, 0)
    assert basis[9] == BareLabel(1, 0, 0)
    for index, label in enumerate(basis):
        assert bare_index(label, spec) == index
        assert bare_label(index, spec) == label


def test_index_out_of_range(small_params):
    spec = small_params.build()
    with pytest.raises(ParameterError):
        bare_index(BareLabel(3, 0, 0), spec)
    with pytest.raises(ParameterError):
        bare_label(27, spec)


def test_coupling_elements(small_params):
    spec = small_params.build()
    h = build_full_hamiltonian(spec).matrix

    def element(left, right):
        return h[bare_index(BareLabel(*left), spec), bare_index(BareLabel(*right), spec)]

    assert element((1, 0, 0), (0, 1, 0)) == pytest.approx(0.05)
    assert element((1, 1, 0), (0, 0, 0)) == pytest.approx(0.05)
    assert element((0, 1, 0), (0, 0, 1)) == pytest.approx(0.05)
    assert element((1, 0, 0), (0, 0, 1)) == pytest.approx(0.002)
    assert element((2, 0, 0), (1, 1, 0)) == pytest.approx(0.05 * np.sqrt(2))
    assert element((1, 0, 0), (0, 0, 0)) == 0.0


def test_hamiltonian_hermitian(ct_spec):
    h = build_full_hamiltonian(ct_spec)
    assert h.dim == 125
    assert h.hermiticity_residual() < 1e-14


def test_uncoupled_diagonal(small_params):
    spec = replace(small_params, g1c=0.0, g2c=0.0, g12=0.0).build()
    h = build_full_hamiltonian(spec)
    np.testing.assert_allclose(h.matrix, np.diag([spec.bare_energy(label) for label in h.basis]))


def test_excitation_numbers(small_params):
    basis = small_params.build().basis()
    numbers = excitation_numbers(basis)
    assert numbers[bare_index(BareLabel(2, 1, 2), small_params.build())] == 5
    assert numbers.max() == 6


def test_with_detuning(ct_params):
    moved = ct_params.with_detuning(0.15)
    assert moved.omega2 == ct_params.omega2
    assert moved.detuning == pytest.approx(0.15)
    assert moved.coupler_detuning == pytest.approx(1.2)


def test_dispersive_flag(ct_spec):
    assert ct_spec.dispersive
    strong = replace(ct_spec, g1c=0.5)
    assert not strong.dispersive


def test_spec_validation():
    q = transmon_spectrum(TransmonSpec(5.0, -0.3), 3)
    c = transmon_spectrum(TransmonSpec(6.0, 0.0), 3)
    with pytest.raises(ParameterError):
        CircuitSpec(q1=q, q2=q, coupler=c, q1_kind='fluxonium', truncation=(3, 3, 3))
    with pytest.raises(ParameterError):
        CircuitSpec(q1=q, q2=q, coupler=c, truncation=(4, 3, 3))


def test_operator_matrix_shape():
    with pytest.raises(ParameterError):
        OperatorMatrix(matrix=np.zeros((2, 2)), basis=[BareLabel(0, 0, 0)])
