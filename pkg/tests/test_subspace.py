import numpy as np
import pytest

from app.core.rng import Stream, make_rng
from app.core.subspace import OrthoBasis, complement_basis, downdate, sample_gaussian, sample_gaussian_block


def test_complement_of_nothing_is_everything():
    basis = complement_basis(np.zeros((0, 5)), 5)
    assert basis.d == 5
    assert basis.orthonormality_error() < 1e-12


def test_complement_is_orthogonal_to_constraints():
    rng = np.random.default_rng(1)
    W = rng.standard_normal((4, 10))
    basis = complement_basis(W, 10)
    assert basis.d == 6
    assert basis.orthonormality_error() < 1e-10
    assert np.max(np.abs(basis.vectors @ W.T)) < 1e-10


def test_complement_skips_dependent_rows():
    w = np.array([1.0, 2.0, 0.0])
    basis = complement_basis(np.vstack([w, 3 * w, np.zeros(3)]), 3)
    assert basis.d == 2


def test_complement_of_axes():
    basis = complement_basis(np.eye(4)[[0, 2]], 4)
    assert basis.d == 2
    assert np.max(np.abs(basis.vectors[:, [0, 2]])) < 1e-12


def test_downdate_drops_one_dimension():
    rng = np.random.default_rng(2)
    basis = OrthoBasis.full(8)
    ws = rng.standard_normal((3, 8))
    for k, w in enumerate(ws, start=1):
        basis = downdate(basis, w)
        assert basis.d == 8 - k
        assert basis.orthonormality_error() < 1e-10
    assert np.max(np.abs(basis.vectors @ ws.T)) < 1e-10


def test_downdate_matches_complement_span():
    rng = np.random.default_rng(4)
    W = rng.standard_normal((3, 7))
    basis = OrthoBasis.full(7)
    for w in W:
        basis = downdate(basis, w)
    reference = complement_basis(W, 7)
    P1 = basis.vectors.T @ basis.vectors
    P2 = reference.vectors.T @ reference.vectors
    np.testing.assert_allclose(P1, P2, atol=1e-10)


def test_downdate_orthogonal_vector_is_noop():
    basis = complement_basis(np.eye(3)[[0]], 3)
    assert downdate(basis, np.array([1.0, 0.0, 0.0])) is basis


def test_downdate_to_empty():
    basis = complement_basis(np.eye(2)[[0]], 2)
    empty = downdate(basis, np.array([0.0, 1.0]))
    assert empty.d == 0
    assert empty.dim_ambient == 2


def test_basis_is_read_only():
    basis = OrthoBasis.full(3)
    with pytest.raises(ValueError):
        basis.vectors[0, 0] = 2.0


def test_sample_in_empty_basis_is_zero():
    rng = make_rng(0, Stream.WALK)
    np.testing.assert_array_equal(sample_gaussian(OrthoBasis.empty(4), rng), np.zeros(4))
    assert sample_gaussian_block(OrthoBasis.empty(4), rng, 3).shape == (3, 4)


def test_sample_stays_in_subspace():
    W = np.random.default_rng(5).standard_normal((2, 6))
    basis = complement_basis(W, 6)
    G = sample_gaussian_block(basis, make_rng(1, Stream.WALK), 50)
    assert np.max(np.abs(G @ W.T)) < 1e-10


def test_sampler_variance_matches_dimension():
    n = 32
    for k in range(5):
        rng = make_rng(11, Stream.INSTANCE, k)
        W = rng.standard_normal((int(rng.integers(1, n)), n))
        basis = complement_basis(W, n)
        G = sample_gaussian_block(basis, make_rng(11, Stream.WALK, k), 10000)
        var = G.var(axis=0)
        assert abs(var.sum() - basis.d) <= 0.05 * basis.d
        assert var.max() <= 1.05


def test_downdates_agree_with_fresh_complement_on_random_systems():
    rng = np.random.default_rng(21)
    for _ in range(10):
        n = int(rng.integers(2, 33))
        W = rng.standard_normal((int(rng.integers(1, n + 1)), n))
        if rng.random() < 0.5:
            # dependent constraints are skipped by both paths
            W = np.vstack([W, W[:1] * 3.0])
        basis = OrthoBasis.full(n)
        for w in W:
            basis = downdate(basis, w)
        reference = complement_basis(W, n)
        assert basis.d == reference.d
        assert basis.orthonormality_error() <= 1e-8
        if basis.d:
            assert np.max(np.abs(reference.vectors.T - basis.project(reference.vectors.T))) <= 1e-6
            assert np.max(np.abs(basis.vectors.T - reference.project(basis.vectors.T))) <= 1e-6


def test_single_axis_sampler_variance():
    basis = OrthoBasis(2, np.array([[1.0, 0.0]]))
    G = sample_gaussian_block(basis, make_rng(3, Stream.WALK), 100_000)
    assert 0.97 <= G[:, 0].var() <= 1.03
    assert np.all(G[:, 1] == 0.0)


def test_projection_variance_and_tails_along_oblique_direction():
    n = 16
    rng = np.random.default_rng(8)
    basis = complement_basis(rng.standard_normal((5, n)), n)
    u = rng.standard_normal(n)
    u /= np.linalg.norm(u)
    G = sample_gaussian_block(basis, make_rng(4, Stream.WALK), 100_000)
    proj = G @ u
    assert proj.var() <= 1.05

    full = sample_gaussian_block(OrthoBasis.full(n), make_rng(5, Stream.WALK), 100_000) @ u
    for lam in (1.0, 2.0, 3.0):
        assert np.mean(np.abs(full) >= lam) <= 2.0 * np.exp(-lam ** 2 / 2.0) + 0.01
