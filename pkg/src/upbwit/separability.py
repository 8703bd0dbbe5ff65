"""Minimum of Tr(mu0 sigma) over separable states, PPT tests, witness validation.

All randomness flows from ``numpy.random.SeedSequence(seed)``; each restart
or sample batch gets its own spawned child stream (PCG64), so results do not
depend on how the work is scheduled.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from . import linalg
from .linalg import as_dims, kron, partial_transpose

SEESAW_TOL = 1e-12
SEESAW_MAX_ITER = 500
GRID_MAX_PARAMS = 8
GRID_MAX_POINTS = 2**32
EPSILON_FLOOR = 1e-6


class SeparabilityError(ValueError):
    pass


def rng_streams(seed, count):
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


def random_unit(rng, d, size=None):
    """Haar-random unit vector(s) in C^d via normalized complex Gaussians."""
    shape = (d,) if size is None else (size, d)
    z = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return z / np.linalg.norm(z, axis=-1, keepdims=True)


def random_product_factors(rng, dims, size=None):
    return [random_unit(rng, d, size) for d in as_dims(dims).local_dims]


def batch_kron(factors):
    """Row-wise Kronecker product of (K, d_j) arrays."""
    ret = factors[0]
    for x in factors[1:]:
        ret = (ret[:, :, None] * x[:, None, :]).reshape(ret.shape[0], -1)
    return ret


def product_expectations(op, vectors):
    """<v_k|op|v_k> for each row v_k."""
    return np.einsum("ki,ij,kj->k", vectors.conj(), op, vectors).real


# ---------------------------------------------------------------- see-saw


def _environment(tensor, factors, j):
    """Contract every party except j: <others| op |others> as a d_j x d_j matrix."""
    n = len(factors)
    letters = "abcdefghijklmnopqrstuvwxyz"
    rows = letters[:n]
    cols = letters[n : 2 * n]
    ops = [tensor]
    subs = [rows + cols]
    for i in range(n):
        if i == j:
            continue
        ops += [factors[i].conj(), factors[i]]
        subs += [rows[i], cols[i]]
    out = rows[j] + cols[j]
    return np.einsum(",".join(subs) + "->" + out, *ops)


def _objective(op, factors):
    v = kron(*factors)
    return float(np.real(np.vdot(v, op @ v)))


@dataclass(frozen=True)
class SeesawRun:
    value: float
    factors: tuple
    iterations: int
    converged: bool
    history: tuple


def seesaw_single(op, dims, factors, tol=SEESAW_TOL, max_iter=SEESAW_MAX_ITER):
    """Alternating minimization of <v|op|v> over product vectors v, one factor at a time.

    Each factor update is the lowest eigenvector of the environment operator,
    so the objective never increases.
    """
    dims = as_dims(dims)
    tensor = np.asarray(op).reshape(dims.local_dims * 2)
    factors = [np.asarray(f, dtype=np.complex128) for f in factors]
    value = _objective(op, factors)
    history = [value]
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        start = value
        for j in range(dims.n):
            env = _environment(tensor, factors, j)
            env = (env + env.conj().T) / 2
            w, v = np.linalg.eigh(env)
            factors[j] = v[:, 0]
            # monotone by construction; tolerate only round-off
            assert w[0] <= value + 1e-12 * max(1.0, abs(value)), (w[0], value)
            value = float(w[0])
            history.append(value)
        if start - value < tol:
            converged = True
            break
    value = _objective(op, factors)
    return SeesawRun(value, tuple(factors), it, converged, tuple(history))


def seesaw_minimize(op, dims, restarts=256, seed=0, tol=SEESAW_TOL, max_iter=SEESAW_MAX_ITER):
    """Best of `restarts` see-saw runs from Haar-random product starts."""
    dims = as_dims(dims)
    op = linalg.hermitize(op)
    if restarts < 1:
        raise SeparabilityError("restarts must be >= 1")
    if op.shape != (dims.N, dims.N):
        raise SeparabilityError(f"operator shape {op.shape} does not match dims {dims.local_dims}")
    best = None
    for rng in rng_streams(seed, restarts):
        start = random_product_factors(rng, dims)
        run = seesaw_single(op, dims, start, tol, max_iter)
        if best is None or run.value < best.value:
            best = run
    return best


@dataclass(frozen=True)
class EpsilonEstimate:
    value: float  # min found of Tr(mu0 sigma); an upper bound on the infimum
    argmin: tuple  # local factors of the minimizing product vector
    restarts_used: int
    converged: bool
    oracle_value: float = None

    def argmin_vector(self):
        return kron(*self.argmin)


def epsilon_seesaw(mu0, dims, restarts=256, seed=0, oracle_resolution=None):
    """Estimate inf Tr(mu0 sigma) over separable sigma.

    By convexity the infimum is attained on product projectors, so this is a
    minimization of <v|mu0|v> over product unit vectors v.
    """
    dims = as_dims(dims)
    run = seesaw_minimize(mu0, dims, restarts, seed)
    oracle = None
    if oracle_resolution is not None:
        oracle = epsilon_grid_oracle(mu0, dims, oracle_resolution)
    return EpsilonEstimate(run.value, run.factors, restarts, run.converged, oracle)


# ---------------------------------------------------------------- grid oracle


def sphere_grid(d, resolution):
    """Unit vectors in C^d on a deterministic grid, first component real and >= 0.

    Magnitudes come from d - 1 hyperspherical angles in [0, pi/2] (endpoints
    included), phases from d - 1 angles in [0, 2 pi) (endpoint excluded).
    """
    theta = np.linspace(0, np.pi / 2, resolution)
    phi = np.linspace(0, 2 * np.pi, resolution, endpoint=False)
    axes = [theta] * (d - 1) + [phi] * (d - 1)
    grid = np.stack([g.reshape(-1) for g in np.meshgrid(*axes, indexing="ij")], axis=1)
    th, ph = grid[:, : d - 1], grid[:, d - 1 :]
    mag = np.ones((len(grid), d))
    for k in range(d - 1):
        mag[:, k] *= np.cos(th[:, k])
        mag[:, k + 1 :] *= np.sin(th[:, k])[:, None]
    phase = np.concatenate([np.zeros((len(grid), 1)), ph], axis=1)
    return mag * np.exp(1j * phase)


def epsilon_grid_oracle(mu0, dims, resolution, chunk=4096):
    """Brute-force minimum of <a x b...|mu0|a x b...> over a product grid.

    Every returned value is attained by a grid point, so it bounds the
    infimum from above and converges to it as the resolution grows.
    """
    dims = as_dims(dims)
    mu0 = linalg.hermitize(mu0)
    n_params = sum(2 * (d - 1) for d in dims.local_dims)
    if n_params > GRID_MAX_PARAMS:
        raise SeparabilityError(f"{n_params} real parameters exceeds the grid limit {GRID_MAX_PARAMS}")
    if float(resolution) ** n_params > GRID_MAX_POINTS:
        raise SeparabilityError(f"resolution {resolution} gives {resolution}^{n_params} grid points; too many")
    grids = [sphere_grid(d, resolution) for d in dims.local_dims]
    first = grids[0]
    rest = grids[1]
    for g in grids[2:]:
        rest = batch_kron([rest, g])
    d1 = dims.local_dims[0]
    dr = dims.N // d1
    # value(a, r) = sum_ij conj(a_i) a_j <r|M_ij|r>, with M_ij the (i, j) block of mu0
    blocks = mu0.reshape(d1, dr, d1, dr).transpose(0, 2, 1, 3)  # (i, j, s, t)
    aa = (first.conj()[:, :, None] * first[:, None, :]).reshape(len(first), -1)
    best = np.inf
    for lo in range(0, len(rest), chunk):
        r = rest[lo : lo + chunk]
        env = np.einsum("ks,ijst,kt->kij", r.conj(), blocks, r).reshape(len(r), -1)
        vals = (aa @ env.T).real
        best = min(best, float(vals.min()))
    return best


# ---------------------------------------------------------------- PPT


@dataclass(frozen=True)
class PptReport:
    verdicts: dict  # subset tuple -> (is_psd, min_eigenvalue)

    @property
    def is_ppt(self):
        return all(ok for ok, _ in self.verdicts.values())

    @property
    def min_eigenvalue(self):
        return min(x for _, x in self.verdicts.values())


def proper_subsets(n):
    for size in range(1, n):
        yield from itertools.combinations(range(n), size)


def is_ppt(rho, dims, tol=linalg.PSD_TOL):
    """PSD check of the partial transpose over every nonempty proper subset of parties."""
    dims = as_dims(dims)
    verdicts = {}
    for subset in proper_subsets(dims.n):
        verdicts[subset] = linalg.is_psd(partial_transpose(rho, dims, subset), tol)
    return PptReport(verdicts)


# ---------------------------------------------------------------- sampling


def random_separable_density(rng, dims, max_terms=None):
    """Mixture of K random product projectors, K uniform in [1, max_terms], flat simplex weights."""
    dims = as_dims(dims)
    max_terms = dims.N if max_terms is None else max_terms
    k = int(rng.integers(1, max_terms + 1))
    vecs = batch_kron(random_product_factors(rng, dims, size=k))
    w = rng.dirichlet(np.ones(k))
    return (vecs.T * w) @ vecs.conj()


@dataclass(frozen=True)
class WitnessValidation:
    min_sampled: float
    min_attack: float
    violating_sigma: np.ndarray = None
    attack_factors: tuple = None

    @property
    def minimum(self):
        return min(self.min_sampled, self.min_attack)

    def holds(self, tol=1e-9):
        return self.minimum >= -tol


def validate_witness(w, dims, samples=100_000, seed=0, restarts=256, tol=1e-9):
    """Hunt for separable sigma with Tr(W sigma) < 0.

    Draws `samples` random product projectors and `samples` random mixtures
    of up to N of them, then runs the see-saw directly on W (product states
    suffice by convexity).
    """
    dims = as_dims(dims)
    if samples < 1:
        raise SeparabilityError("samples must be >= 1")
    wmat = linalg.hermitize(getattr(w, "matrix", w))
    rng_pure, rng_mix = rng_streams(seed, 2)
    vecs = batch_kron(random_product_factors(rng_pure, dims, size=samples))
    pure = product_expectations(wmat, vecs)

    N = dims.N
    k = rng_mix.integers(1, N + 1, size=samples)
    idx = rng_mix.integers(0, samples, size=(samples, N))
    weights = rng_mix.exponential(size=(samples, N)) * (np.arange(N)[None, :] < k[:, None])
    weights /= weights.sum(axis=1, keepdims=True)  # flat Dirichlet over the first k slots
    mixed = (weights * pure[idx]).sum(axis=1)

    violating = None
    if pure.min() < -tol or mixed.min() < -tol:
        if pure.min() <= mixed.min():
            violating = linalg.projector(vecs[int(pure.argmin())])
        else:
            i = int(mixed.argmin())
            violating = sum(weights[i, s] * linalg.projector(vecs[idx[i, s]]) for s in range(N))
    attack = seesaw_minimize(wmat, dims, restarts, seed + 1)
    if violating is None and attack.value < -tol:
        violating = linalg.projector(kron(*attack.factors))
    return WitnessValidation(
        min_sampled=float(min(pure.min(), mixed.min())),
        min_attack=attack.value,
        violating_sigma=violating,
        attack_factors=attack.factors,
    )
