"""Dense complex linear algebra on small composite Hilbert spaces."""

from dataclasses import dataclass

import numpy as np

HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-9


class NotHermitianError(ValueError):
    pass


@dataclass(frozen=True)
class DimensionProfile:
    local_dims: tuple

    def __post_init__(self):
        dims = tuple(int(d) for d in self.local_dims)
        if len(dims) < 2:
            raise ValueError(f"need at least two parties, got dims={dims}")
        if any(d < 2 for d in dims):
            raise ValueError(f"every local dimension must be >= 2, got dims={dims}")
        object.__setattr__(self, "local_dims", dims)

    @property
    def N(self):
        return int(np.prod(self.local_dims))

    @property
    def n(self):
        return len(self.local_dims)


def as_dims(dims):
    if isinstance(dims, DimensionProfile):
        return dims
    return DimensionProfile(tuple(dims))


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray  # columns

    @property
    def max(self):
        return float(self.eigenvalues[-1])

    @property
    def min(self):
        return float(self.eigenvalues[0])

    def positive(self, tol=1e-10):
        return self.eigenvalues[self.eigenvalues > tol]


def kron(*mats):
    """Kronecker product of any number of vectors or matrices."""
    ret = np.asarray(mats[0])
    for x in mats[1:]:
        ret = np.kron(ret, np.asarray(x))
    return ret


def hermitize(a, tol=HERMITIAN_TOL):
    """Return (a + a^dagger)/2, refusing inputs whose anti-Hermitian residue exceeds `tol`."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    residue = np.abs(a - a.conj().T).max() if a.size else 0.0
    if residue > tol:
        raise NotHermitianError(f"matrix is not Hermitian (residue {residue:.3e} > {tol:.0e})")
    return (a + a.conj().T) / 2


def trace_inner(a, b):
    """Hilbert-Schmidt inner product Tr(a^dagger b) of two Hermitian matrices."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    a = hermitize(a)
    b = hermitize(b)
    ret = np.vdot(a, b)  # sum conj(a_ij) b_ij == Tr(a^dagger b)
    assert abs(ret.imag) <= 1e-12 * max(1.0, abs(ret.real)), ret
    return float(ret.real)


def hs_norm(a):
    return np.sqrt(max(trace_inner(a, a), 0.0))


def partial_transpose(rho, dims, subset):
    """Transpose the tensor factors listed in `subset` (0-based party indices).

    With ``dims=(d1, d2)`` and ``subset=[1]`` the ``(i1 i2, j1 j2)`` entry of the
    result is the ``(i1 j2, j1 i2)`` entry of ``rho``.
    """
    dims = as_dims(dims)
    rho = np.asarray(rho)
    N, n = dims.N, dims.n
    if rho.shape != (N, N):
        raise ValueError(f"rho has shape {rho.shape}, dims require ({N}, {N})")
    subset = sorted(set(int(s) for s in subset))
    if any(s < 0 or s >= n for s in subset):
        raise IndexError(f"subset {subset} out of range for {n} parties")
    tensor = rho.reshape(dims.local_dims * 2)
    perm = list(range(2 * n))
    for s in subset:
        perm[s], perm[s + n] = perm[s + n], perm[s]
    return tensor.transpose(perm).reshape(N, N)


def hermitian_eig(a):
    """Full spectrum of a Hermitian matrix, eigenvalues ascending.

    Backed by LAPACK ``zheevd`` through :func:`numpy.linalg.eigh`, which is
    deterministic for a fixed input.
    """
    a = hermitize(a)
    w, v = np.linalg.eigh(a)
    if not (np.all(np.isfinite(w)) and np.all(np.isfinite(v))):
        raise np.linalg.LinAlgError("eigensolver returned non-finite values")
    return Spectrum(eigenvalues=w, eigenvectors=v)


def is_psd(a, tol=PSD_TOL):
    """Return ``(ok, min_eigenvalue)`` with ``ok`` true iff min eigenvalue >= -tol."""
    a = hermitize(a)
    min_eig = float(np.linalg.eigvalsh(a)[0])
    return min_eig >= -tol, min_eig


def projector(vec):
    vec = np.asarray(vec).reshape(-1)
    return np.outer(vec, vec.conj())


def null_space(a, tol=1e-9):
    """Orthonormal basis (columns) of the null space of `a`, singular values <= tol count as zero."""
    a = np.atleast_2d(np.asarray(a))
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    rank = int(np.sum(s > tol))
    return vh[rank:].conj().T


def matrix_rank(a, tol=1e-9):
    a = np.atleast_2d(np.asarray(a))
    if a.size == 0:
        return 0
    return int(np.sum(np.linalg.svd(a, compute_uv=False) > tol))
