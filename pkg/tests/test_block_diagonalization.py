#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import numpy as np
import pytest

from block_diagonalization import (BlockPartition, assign_to_blocks, block_diagonalize, block_reduce,
                                   control_partition, decouple_control_states, inverse_sqrt_psd, la_via_x,
                                   least_action_transform, two_stage_reduction, x_generator_forms)
from circuit_hamiltonian import BareLabel, OperatorMatrix, build_full_hamiltonian
from error_handler import DegeneracyError, ParameterError
from exact_diagonalization import eigensolve


def _random_hermitian(seed, coupling=0.05):
    rng = np.random.default_rng(seed)
    noise = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    return np.diag([0.0, 0.2, 0.5, 4.0, 4.3, 4.8]) + coupling * (noise + noise.conj().T) / 2


PARTITION = BlockPartition((0, 1, 2), 6)


@pytest.mark.parametrize('seed', [1, 7, 42])
def test_least_action_block_diagonalises(seed):
    h = _random_hermitian(seed)
    transform = least_action_transform(h, PARTITION)
    assert transform.unitarity_residual < 1e-10
    assert transform.off_block_norm(h) < 1e-10
    np.testing.assert_allclose(np.linalg.eigvalsh(transform.apply(h)), np.linalg.eigvalsh(h), atol=1e-10)


@pytest.mark.parametrize('seed', [3, 11])
def test_x_form_reproduces_transform(seed):
    h = _random_hermitian(seed)
    _, vectors = eigensolve(h)
    kept_columns, _ = assign_to_blocks(vectors, PARTITION)
    via_x = la_via_x(vectors[:, kept_columns], PARTITION)
    np.testing.assert_allclose(via_x.matrix, least_action_transform(h, PARTITION).matrix, atol=1e-10)


def test_x_generator_forms_agree():
    from_kept, from_rest = x_generator_forms(_random_hermitian(5), PARTITION)
    np.testing.assert_allclose(from_kept, from_rest, atol=1e-10)


def test_transform_close_to_identity_at_weak_coupling():
    h = _random_hermitian(2, coupling=1e-4)
    transform = least_action_transform(h, PARTITION)
    assert np.max(np.abs(transform.matrix - np.eye(6))) < 1e-3


def test_assignment_tie_raises():
    vectors = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2)
    with pytest.raises(DegeneracyError):
        assign_to_blocks(vectors, BlockPartition((0,), 2))


def test_inverse_sqrt_singular():
    np.testing.assert_allclose(inverse_sqrt_psd(np.diag([4.0, 0.25])), np.diag([0.5, 2.0]))
    with pytest.raises(DegeneracyError):
        inverse_sqrt_psd(np.diag([1.0, 0.0]))


@pytest.mark.parametrize('kept', [(0, 0), (), (0, 1, 2), (3,)])
def test_partition_checks(kept):
    with pytest.raises(ParameterError):
        BlockPartition(kept, 3)


def test_dimension_mismatch():
    with pytest.raises(ParameterError):
        least_action_transform(np.eye(4), PARTITION)


def test_block_reduce_keeps_labels(small_params):
    h = build_full_hamiltonian(small_params.build())
    partition = BlockPartition.from_labels(h.basis, lambda label: label.nc == 0)
    reduced = block_reduce(h, partition)
    assert reduced.dim == 9
    assert all(label.nc == 0 for label in reduced.basis)
    assert reduced.hermiticity_residual() < 1e-12


def test_two_stage_reduction(small_params):
    h = build_full_hamiltonian(small_params.build())
    h4, h2q = two_stage_reduction(h)
    assert h2q.dim == 9
    assert h4.basis == [BareLabel(0, 0, 0), BareLabel(0, 0, 1), BareLabel(1, 0, 0), BareLabel(1, 0, 1)]
    full_levels = np.linalg.eigvalsh(h.matrix)
    for level in np.linalg.eigvalsh(h4.matrix):
        assert np.min(np.abs(full_levels - level)) < 1e-9


def _computational_hamiltonian(seed):
    rng = np.random.default_rng(seed)
    noise = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h = np.diag([0.0, 0.01, -0.1, -0.08]) + 0.005 * (noise + noise.conj().T) / 2
    return OperatorMatrix(h, [BareLabel(0, 0, 0), BareLabel(0, 0, 1), BareLabel(1, 0, 0), BareLabel(1, 0, 1)])


def test_control_partition():
    basis = _computational_hamiltonian(0).basis
    partition = control_partition(basis)
    assert partition.kept == (0, 1)
    assert partition.rest == (2, 3)


@pytest.mark.parametrize('seed', [2, 5])
def test_decouple_control_states(seed):
    h4 = _computational_hamiltonian(seed)
    decoupled = decouple_control_states(h4)
    assert decoupled.basis == h4.basis
    assert np.max(np.abs(decoupled.matrix[:2, 2:])) == 0
    np.testing.assert_allclose(np.linalg.eigvalsh(decoupled.matrix), np.linalg.eigvalsh(h4.matrix), atol=1e-12)


def test_block_diagonalize_matches_block_reduce(small_params):
    h = build_full_hamiltonian(small_params.build())
    partition = BlockPartition.from_labels(h.basis, lambda label: label.nc == 0)
    full = block_diagonalize(h, partition)
    kept = list(partition.kept)
    np.testing.assert_allclose(full.matrix[np.ix_(kept, kept)], block_reduce(h, partition).matrix, atol=1e-12)
    assert full.basis == h.basis
