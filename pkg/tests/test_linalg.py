import math

import numpy as np
import pytest

from qsdbounds import DensityMatrix, HermitianMatrix, ResourceLimitError, ValidationError
from qsdbounds.linalg import (
    eigh,
    kron,
    matrix_power_support,
    positive_part_trace,
    support_overlap_table,
    tensor_power,
    trace_norm,
)

from helpers import random_full_rank_state, random_unitary

PLUS = np.array([[0.5, 0.5], [0.5, 0.5]])
ZERO = np.array([[1.0, 0.0], [0.0, 0.0]])


def test_hermitian_symmetrizes_and_is_immutable():
    h = HermitianMatrix(np.array([[1.0, 1.0 + 1e-13j], [1.0 - 1e-13j, 2.0]]))
    assert np.allclose(h.array, h.array.conj().T)
    with pytest.raises(ValueError):
        h.array[0, 0] = 5.0


def test_hermitian_symmetrizes_asymmetric_input():
    h = HermitianMatrix(np.array([[0.0, 1.0], [0.0, 0.0]]))
    assert np.allclose(h.array, np.array([[0.0, 0.5], [0.5, 0.0]]))


def test_hermitian_trace_and_arithmetic():
    a = HermitianMatrix(np.diag([1.0, 2.0]))
    b = HermitianMatrix(np.diag([3.0, -1.0]))
    assert (a + b).trace() == pytest.approx(5.0, abs=1e-14)
    assert (a - b).trace() == pytest.approx(1.0, abs=1e-14)
    assert (2.0 * a).trace() == pytest.approx(6.0, abs=1e-14)
    assert (-a).trace() == pytest.approx(-3.0, abs=1e-14)


def test_eigh_groups_degenerate_eigenvalues():
    dec = eigh(HermitianMatrix(np.diag([3.0, 1.0, 1.0])))
    assert np.allclose(dec.eigenvalues, [3.0, 1.0])
    assert dec.ranks() == (1, 2)


def test_eigh_identity_single_group():
    dec = eigh(HermitianMatrix(np.eye(4)))
    assert list(dec.eigenvalues) == [1.0]
    assert np.allclose(dec.projectors[0].array, np.eye(4))


def test_eigh_reconstruction_and_orthogonality():
    rng = np.random.default_rng(7)
    z = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    h = HermitianMatrix((z + z.conj().T) / 2.0)
    dec = eigh(h)
    assert np.max(np.abs(dec.reconstruct().array - h.array)) < 1e-10
    total = sum(p.array for p in dec.projectors)
    assert np.max(np.abs(total - np.eye(6))) < 1e-10
    for j, pj in enumerate(dec.projectors):
        for k, pk in enumerate(dec.projectors):
            if j != k:
                assert np.max(np.abs(pj.array @ pk.array)) < 1e-10


def test_eigh_descending_order():
    dec = eigh(HermitianMatrix(np.diag([-1.0, 5.0, 2.0])))
    assert list(dec.eigenvalues) == sorted(dec.eigenvalues, reverse=True)


def test_matrix_power_support_diagonal_sqrt():
    dec = eigh(HermitianMatrix(np.diag([4.0, 0.0])))
    out = matrix_power_support(dec, 0.5)
    assert np.allclose(out.array, np.diag([2.0, 0.0]), atol=1e-12)


def test_matrix_power_support_zero_power_is_support_projection():
    dec = eigh(HermitianMatrix(np.diag([0.5, 0.5])))
    assert np.allclose(matrix_power_support(dec, 0.0).array, np.eye(2), atol=1e-12)
    rank1 = eigh(HermitianMatrix(np.diag([0.7, 0.0])))
    assert np.allclose(matrix_power_support(rank1, 0.0).array, np.diag([1.0, 0.0]), atol=1e-12)


def test_matrix_power_support_projector_idempotent():
    dec = eigh(HermitianMatrix(PLUS))
    assert np.max(np.abs(matrix_power_support(dec, 3.0).array - PLUS)) < 1e-12


def test_matrix_power_support_rejects_negative():
    dec = eigh(HermitianMatrix(np.diag([1.0, -0.5])))
    with pytest.raises(ValidationError):
        matrix_power_support(dec, 0.5)


def test_matrix_power_one_restricts_to_support():
    rng = np.random.default_rng(11)
    state = random_full_rank_state(rng, 3)
    dec = state.spectral()
    assert np.max(np.abs(matrix_power_support(dec, 1.0).array - state.array)) < 1e-10


def test_kron_identities_and_diagonal():
    assert np.allclose(kron(np.eye(2), np.eye(2)).array, np.eye(4))
    out = kron(np.diag([1.0, 2.0]), np.diag([3.0, 4.0]))
    assert np.allclose(out.array, np.diag([3.0, 4.0, 6.0, 8.0]))


def test_tensor_power_dim_and_trace():
    rng = np.random.default_rng(3)
    state = random_full_rank_state(rng, 2)
    cubed = tensor_power(state.array, 3)
    assert cubed.dim == 8
    assert cubed.trace() == pytest.approx(1.0, abs=1e-12)


def test_tensor_power_cap():
    with pytest.raises(ResourceLimitError):
        tensor_power(np.eye(2), 13)  # 2^13 = 8192 > 4096
    with pytest.raises(ValidationError):
        tensor_power(np.eye(2), 0)


def test_trace_norm_values():
    assert trace_norm(np.diag([1.0, -2.0])) == pytest.approx(3.0, abs=1e-12)
    assert trace_norm(np.zeros((2, 2))) == 0.0
    assert trace_norm(ZERO - PLUS) == pytest.approx(math.sqrt(2.0), abs=1e-12)


def test_positive_part_trace_values():
    assert positive_part_trace(np.diag([1.0, -2.0])) == pytest.approx(1.0, abs=1e-12)
    assert positive_part_trace(np.diag([0.3, 0.7])) == pytest.approx(1.0, abs=1e-12)
    assert positive_part_trace(ZERO - PLUS) == pytest.approx(math.sqrt(2.0) / 2.0, abs=1e-12)


def test_positive_part_identity_with_trace_norm():
    rng = np.random.default_rng(5)
    for _ in range(10):
        z = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        h = (z + z.conj().T) / 2.0
        tn = trace_norm(h)
        assert positive_part_trace(h) == pytest.approx((np.trace(h).real + tn) / 2.0, abs=1e-10)
        assert tn == pytest.approx(positive_part_trace(h) + positive_part_trace(-h), abs=1e-10)


def test_trace_norm_multiplicative_under_kron():
    rng = np.random.default_rng(9)
    za = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    zb = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    a = (za + za.conj().T) / 2.0
    b = (zb + zb.conj().T) / 2.0
    assert trace_norm(kron(a, b)) == pytest.approx(trace_norm(a) * trace_norm(b), rel=1e-9)


def test_density_matrix_validation():
    with pytest.raises(ValidationError):
        DensityMatrix(np.diag([0.6, 0.6]))
    with pytest.raises(ValidationError):
        DensityMatrix(np.diag([1.5, -0.5]))
    state = DensityMatrix(np.diag([0.5, 0.5]))
    assert state.dim == 2


def test_density_matrix_constructors():
    pure = DensityMatrix.pure([1.0, 1.0])
    assert np.allclose(pure.array, PLUS, atol=1e-12)
    diag = DensityMatrix.diagonal([0.2, 0.8])
    assert np.allclose(diag.array, np.diag([0.2, 0.8]))
    with pytest.raises(ValidationError):
        DensityMatrix.diagonal([0.2, 0.3])


def test_support_overlap_table_commuting():
    # indices follow the descending spectral order, not matrix positions
    a = eigh(HermitianMatrix(np.diag([0.9, 0.1])))
    b = eigh(HermitianMatrix(np.diag([0.4, 0.6])))
    rows = support_overlap_table(a, b)
    masses = sorted((ai, bj) for _, _, ai, bj, w in rows if w > 0.5)
    assert len(rows) == 2
    assert masses == [(0.1, 0.6), (0.9, 0.4)]
    assert all(w == pytest.approx(1.0, abs=1e-12) for _, _, _, _, w in rows)


def test_support_overlap_table_pure_states():
    a = eigh(HermitianMatrix(ZERO))
    b = eigh(HermitianMatrix(PLUS))
    rows = support_overlap_table(a, b)
    assert len(rows) == 1
    i, j, ai, bj, w = rows[0]
    assert ai == pytest.approx(1.0, abs=1e-12)
    assert bj == pytest.approx(1.0, abs=1e-12)
    assert w == pytest.approx(0.5, abs=1e-12)


def test_eigh_agrees_between_diagonal_and_rotated_paths():
    rng = np.random.default_rng(13)
    evals = np.array([0.5, 0.3, 0.2])
    u = random_unitary(rng, 3)
    rotated = eigh(HermitianMatrix((u * evals) @ u.conj().T))
    plain = eigh(HermitianMatrix(np.diag(evals)))
    assert np.allclose(rotated.eigenvalues, plain.eigenvalues, atol=1e-12)
