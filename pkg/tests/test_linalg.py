import numpy as np
import pytest

from conftest import random_density, random_hermitian
from upbwit.construct import mu_of_p
from upbwit.linalg import (
    DimensionProfile,
    NotHermitianError,
    hermitian_eig,
    is_psd,
    kron,
    partial_transpose,
    projector,
    trace_inner,
)

BELL = np.array([1, 0, 0, 1]) / np.sqrt(2)


def pt_second_bruteforce(rho, d1, d2):
    # entry (i1 i2, j1 j2) of the result is entry (i1 j2, j1 i2) of rho
    ret = np.zeros_like(rho)
    for i1 in range(d1):
        for i2 in range(d2):
            for j1 in range(d1):
                for j2 in range(d2):
                    ret[i1 * d2 + i2, j1 * d2 + j2] = rho[i1 * d2 + j2, j1 * d2 + i2]
    return ret


def test_dimension_profile():
    dims = DimensionProfile((2, 3))
    assert dims.N == 6 and dims.n == 2
    with pytest.raises(ValueError):
        DimensionProfile((3,))
    with pytest.raises(ValueError):
        DimensionProfile((1, 3))


def test_kron_examples():
    assert np.array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))
    assert np.array_equal(kron([1, 0], [0, 1]), [0, 1, 0, 0])
    a1 = np.array([1, 1]) / np.sqrt(2)
    b2 = np.array([1, -1]) / np.sqrt(2)
    assert np.allclose(kron(a1, b2), np.array([1, -1, 1, -1]) / 2, atol=1e-15)


def test_kron_properties():
    rng = np.random.default_rng(0)
    for _ in range(200):
        a, b, c, d = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) for _ in range(4))
        e = rng.standard_normal((3, 3))
        assert np.abs(kron(kron(a, b), e) - kron(a, kron(b, e))).max() < 1e-10
        assert np.abs(kron(a, b) @ kron(c, d) - kron(a @ c, b @ d)).max() < 1e-10


def test_trace_inner_examples(tiles):
    N = 9
    d0 = np.eye(N) / N
    assert trace_inner(d0, d0) == pytest.approx(1 / N, abs=1e-15)
    mu0 = mu_of_p(tiles, np.full(5, 0.2))
    rng = np.random.default_rng(1)
    for _ in range(20):
        sigma = random_density(rng, N)
        lhs = trace_inner(sigma - d0, mu0 - d0)
        assert lhs == pytest.approx(np.trace(sigma @ mu0).real - 1 / N, abs=1e-12)
    for mu_r in tiles.projectors():
        assert abs(trace_inner(d0 - mu0, mu_r - mu0)) < 1e-12


def test_trace_inner_errors():
    with pytest.raises(ValueError):
        trace_inner(np.eye(2), np.eye(3))
    with pytest.raises(NotHermitianError):
        trace_inner(np.array([[0, 1], [0, 0]]), np.eye(2))


def test_trace_inner_norm():
    rng = np.random.default_rng(2)
    for _ in range(100):
        a = random_hermitian(rng, 4)
        b = random_hermitian(rng, 4)
        assert trace_inner(a, a) > 0
        assert trace_inner(a, b) == pytest.approx(trace_inner(b, a), abs=1e-12)
    assert trace_inner(np.zeros((3, 3)), np.zeros((3, 3))) == 0


def test_partial_transpose_examples():
    diag = np.diag(np.arange(6.0))
    for subset in ([0], [1], [0, 1]):
        assert np.array_equal(partial_transpose(diag, (2, 3), subset), diag)
    pt = partial_transpose(projector(BELL), (2, 2), [1])
    expected = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]) / 2
    assert np.allclose(pt, expected, atol=1e-15)
    assert np.linalg.eigvalsh(expected)[0] == pytest.approx(-0.5)
    with pytest.raises(IndexError):
        partial_transpose(np.eye(4), (2, 2), [2])


def test_partial_transpose_matches_index_formula():
    rng = np.random.default_rng(3)
    for d1, d2 in [(2, 2), (2, 3), (3, 3)]:
        rho = random_density(rng, d1 * d2)
        assert np.allclose(partial_transpose(rho, (d1, d2), [1]), pt_second_bruteforce(rho, d1, d2))


def test_partial_transpose_properties():
    rng = np.random.default_rng(4)
    dims = (2, 3, 2)
    for _ in range(100):
        rho = random_density(rng, 12)
        for subset in ([0], [1], [2], [0, 1], [1, 2], [0, 2]):
            pt = partial_transpose(rho, dims, subset)
            assert np.allclose(partial_transpose(pt, dims, subset), rho, atol=1e-14)
            assert np.trace(pt) == pytest.approx(1, abs=1e-12)
            assert np.abs(pt - pt.conj().T).max() < 1e-14
            comp = [k for k in range(3) if k not in subset]
            assert np.allclose(partial_transpose(pt, dims, comp), rho.T, atol=1e-14)


def test_hermitian_eig_examples():
    assert np.allclose(hermitian_eig(np.eye(5)).eigenvalues, 1)
    assert np.allclose(hermitian_eig([[0, 1], [1, 0]]).eigenvalues, [-1, 1])
    with pytest.raises(NotHermitianError):
        hermitian_eig([[0, 1], [0, 0]])


def test_hermitian_eig_example2(example_b2):
    mu0 = mu_of_p(example_b2, [3 / 8, 3 / 8, 2 / 8])
    positive = hermitian_eig(mu0).positive()
    s13 = np.sqrt(13)
    assert np.allclose(positive, [(5 - s13) / 16, 3 / 8, (5 + s13) / 16], atol=1e-12)


def test_hermitian_eig_reconstruction():
    rng = np.random.default_rng(5)
    for N in [2, 4, 9, 27]:
        a = random_hermitian(rng, N)
        spec = hermitian_eig(a)
        v, w = spec.eigenvectors, spec.eigenvalues
        assert np.linalg.norm(a - v @ np.diag(w) @ v.conj().T) <= 1e-9
        assert np.abs(v.conj().T @ v - np.eye(N)).max() <= 1e-9
        assert abs(w.sum() - np.trace(a).real) <= 1e-9
        assert np.all(np.diff(w) >= 0)


def test_is_psd():
    ok, x = is_psd(np.eye(4) / 4)
    assert ok and x == pytest.approx(0.25)
    ok, x = is_psd(partial_transpose(projector(BELL), (2, 2), [1]))
    assert not ok and x == pytest.approx(-0.5, abs=1e-12)
    assert is_psd(np.diag([1, -1e-10]))[0]
    assert not is_psd(np.diag([1, -1e-8]))[0]
