"""Densities and witnesses built from a product-state set.

The pipeline is: solve Qx = e for the weights p, form mu0 = sum_k p_k mu_k,
reflect it through the maximally mixed state D0 to get rho0 on the boundary
of the density set, then place a separating hyperplane between rho0 and the
separable densities using the measured minimum of Tr(mu0 sigma).
"""

from dataclasses import dataclass

import numpy as np

from . import linalg
from .linalg import hermitian_eig, trace_inner
from .states import gram_q, is_unextendible, overlap_matrix


class ConstructionError(ValueError):
    pass


class Condition2Error(ConstructionError):
    pass


class WitnessError(ConstructionError):
    pass


def as_pvector(p, m=None):
    p = np.asarray(p, dtype=np.float64).reshape(-1)
    if m is not None and len(p) != m:
        raise ConstructionError(f"p has length {len(p)}, expected {m}")
    if np.any(p < -1e-12):
        raise ConstructionError(f"p has negative entries: {p}")
    if abs(p.sum() - 1) > 1e-12:
        raise ConstructionError(f"p sums to {p.sum():.15g}, not 1")
    return np.clip(p, 0, None)


# ---------------------------------------------------------------- Condition 2


@dataclass(frozen=True)
class Condition2Result:
    p: np.ndarray
    c: float  # Tr(mu0^2) = 1 / sum(x)
    x: np.ndarray
    row_sum_bound: float  # max_r sum_{k != r} Q(r, k)
    hypothesis_holds: bool  # row_sum_bound < 1 guarantees strict positivity
    strictly_positive: bool
    residual: float  # ||Qp - c e||_inf


def solve_condition2(q):
    """Weights p with Qp constant, by a direct solve of Qx = e."""
    q = np.asarray(q, dtype=np.float64)
    m = q.shape[0]
    try:
        x = np.linalg.solve(q, np.ones(m))
    except np.linalg.LinAlgError as e:
        raise Condition2Error("Q is singular") from e
    if np.linalg.cond(q) > 1e12:
        raise Condition2Error(f"Q is numerically singular (cond={np.linalg.cond(q):.3e})")
    if np.any(x < -1e-12):
        raise Condition2Error(f"Qx = e has negative entries x={x}; Condition 2 fails on this route")
    x = np.clip(x, 0, None)
    total = x.sum()
    p = x / total
    c = 1 / total
    row_sum_bound = float(np.max(q.sum(axis=1) - np.diag(q)))
    residual = float(np.abs(q @ p - c).max())
    return Condition2Result(
        p=p,
        c=float(c),
        x=x,
        row_sum_bound=row_sum_bound,
        hypothesis_holds=row_sum_bound < 1,
        strictly_positive=bool(np.all(x > 0)),
        residual=residual,
    )


def neumann_solve(q, terms=200):
    """Truncated series sum_k (-1)^k B^k e with B = Q - I; converges when row sums of B are < 1."""
    b = np.asarray(q, dtype=np.float64) - np.eye(len(q))
    term = np.ones(len(q))
    ret = term.copy()
    for _ in range(terms):
        term = -b @ term
        ret += term
    return ret


def recover_weights(states, mu):
    """Convex weights of `mu` over the members, from Tr(mu mu_j) = (Q p)_j."""
    projs = states.projectors()
    rhs = np.array([trace_inner(mu, x) for x in projs])
    return np.linalg.solve(gram_q(states), rhs)


# ---------------------------------------------------------------- densities


def mu_of_p(states, p):
    p = as_pvector(p, states.m)
    v = states.vectors()
    mu = (v.T * p) @ v.conj()
    return linalg.hermitize(mu)


def b_from_pmax(p):
    return 1 / float(np.max(p))


def b_from_lambda_max(mu):
    return 1 / hermitian_eig(mu).max


@dataclass(frozen=True)
class ReflectedDensity:
    rho: np.ndarray
    b: float
    min_eigenvalue: float
    null_dim: int

    @property
    def on_boundary(self):
        return self.null_dim >= 1


def reflect_through_identity(mu, b, tol=1e-10):
    """rho = (N D0 - b mu) / (N - b) = (I - b mu) / (N - b)."""
    mu = linalg.hermitize(mu)
    N = mu.shape[0]
    if b >= N:
        raise ConstructionError(f"b={b} must be < N={N}")
    lam_max = hermitian_eig(mu).max
    if b * lam_max > 1 + tol:
        raise ConstructionError(f"b * lambda_max = {b * lam_max:.12g} > 1; result is not a density")
    rho = (np.eye(N) - b * mu) / (N - b)
    w = hermitian_eig(rho).eigenvalues
    if w[0] < -linalg.PSD_TOL:
        raise ConstructionError(f"reflected matrix has eigenvalue {w[0]:.3e}")
    null_dim = int(np.sum(np.abs(w) <= 1e-9))
    return ReflectedDensity(rho=rho, b=float(b), min_eigenvalue=float(w[0]), null_dim=null_dim)


def rho_of_p(states, p, b="lambda_max"):
    """Reflect mu(p) through D0.

    `b` is either a number or one of the presets ``"p_max"`` (1/max p_k, the
    orthonormal case) or ``"lambda_max"`` (1/largest eigenvalue of mu(p)).
    """
    p = as_pvector(p, states.m)
    mu = mu_of_p(states, p)
    if b == "p_max":
        b = b_from_pmax(p)
    elif b == "lambda_max":
        b = b_from_lambda_max(mu)
    return reflect_through_identity(mu, float(b))


def pmax_index(p):
    """Smallest index attaining max p_k; its member lies in the null space of rho(p)."""
    p = np.asarray(p)
    return int(np.flatnonzero(p == p.max())[0])


def r_matrix(states, p):
    """R(r, n) = p_r <phi_r|phi_n>."""
    return np.asarray(p)[:, None] * overlap_matrix(states)


def r_matrix_spectrum(states, p):
    """Spectrum of the symmetrized R matrix sqrt(p_r) <phi_r|phi_n> sqrt(p_n).

    Its positive eigenvalues are those of mu(p). With zero weights the
    similarity to R is undefined, and the full N x N eigensolve of mu(p)
    is returned instead.
    """
    p = as_pvector(p, states.m)
    if np.any(p <= 0):
        return hermitian_eig(mu_of_p(states, p))
    s = np.sqrt(p)
    r_sym = s[:, None] * overlap_matrix(states) * s[None, :]
    return hermitian_eig(r_sym)


# ---------------------------------------------------------------- conditions


def general_s0(N, value, lambda_max, tr_mu0_sq):
    """s0 = (1 - N value)(N lambda_max - 1) / (N Tr(mu0^2) - 1), value = inf Tr(mu0 sigma)."""
    return (1 - N * value) * (N * lambda_max - 1) / (N * tr_mu0_sq - 1)


def condition3_rhs(N, lambda_max, tr_mu0_sq):
    return (lambda_max - tr_mu0_sq) / (N * lambda_max - 1)


@dataclass(frozen=True)
class ConditionsReport:
    cond1: bool
    cond2: bool
    p: np.ndarray
    tr_mu0_sq: float
    cond2_residual: float
    cond3: bool
    lhs: float  # epsilon * lambda_max, the measured minimum of Tr(mu0 sigma)
    rhs: float
    lambda_max: float
    b: float
    s0: float
    sanity: float  # epsilon * N * lambda_max, must lie in (0, 1)
    complement_dim: int
    s0_agrees: bool  # s0 < 1 must match the Condition 3 verdict
    unextendibility: object = None

    @property
    def sanity_ok(self):
        return 0 < self.sanity < 1

    @property
    def all_hold(self):
        return self.cond1 and self.cond2 and self.cond3


def evaluate_conditions(states, p, epsilon_lambda_max, certificate=None):
    N = states.dims.N
    p = as_pvector(p, states.m)
    if certificate is None:
        certificate = is_unextendible(states)
    # an empty orthocomplement makes the set a full basis, not a UPB
    cond1 = certificate.unextendible and certificate.complement_dim > 0
    q = gram_q(states)
    mu0 = mu_of_p(states, p)
    tr_mu0_sq = float(p @ q @ p)
    residual = float(np.abs(q @ p - tr_mu0_sq).max())
    lam_max = hermitian_eig(mu0).max
    rhs = condition3_rhs(N, lam_max, tr_mu0_sq)
    lhs = float(epsilon_lambda_max)
    s0 = general_s0(N, lhs, lam_max, tr_mu0_sq)
    cond3 = lhs > rhs
    return ConditionsReport(
        cond1=bool(cond1),
        cond2=residual <= 1e-10,
        p=p,
        tr_mu0_sq=tr_mu0_sq,
        cond2_residual=residual,
        cond3=bool(cond3),
        lhs=lhs,
        rhs=float(rhs),
        lambda_max=lam_max,
        b=1 / lam_max,
        s0=float(s0),
        sanity=float(N * lhs),
        complement_dim=certificate.complement_dim,
        s0_agrees=bool((s0 < 1) == cond3) or abs(lhs - rhs) <= 1e-12,
        unextendibility=certificate,
    )


# ---------------------------------------------------------------- witness


@dataclass(frozen=True)
class WitnessMatrix:
    matrix: np.ndarray
    s0: float
    c0: float
    tau0: np.ndarray
    rho0: np.ndarray
    mu0: np.ndarray
    b: float
    value: float  # the minimum of Tr(mu0 sigma) the hyperplane was built from

    def expectation(self, sigma):
        return float(np.real(np.trace(self.matrix @ sigma)))

    @property
    def tr_rho0(self):
        return self.expectation(self.rho0)


def build_witness(states, p, epsilon_lambda_max, force=False):
    """W0 = tau0 + c0 I - rho0 with tau0 = (1 - s0) D0 + s0 rho0.

    s0 is fixed by Tr(mu0 tau0) = epsilon_lambda_max. With ``force=True`` the
    witness is returned even when s0 falls outside (0, 1), so a failing
    Condition 3 can be inspected.
    """
    N = states.dims.N
    p = as_pvector(p, states.m)
    mu0 = mu_of_p(states, p)
    lam_max = hermitian_eig(mu0).max
    tr_mu0_sq = float(np.real(np.vdot(mu0, mu0)))
    value = float(epsilon_lambda_max)
    s0 = general_s0(N, value, lam_max, tr_mu0_sq)
    m = states.m
    if states.is_orthonormal() and np.allclose(p, 1 / m, rtol=0, atol=1e-12):
        s0_orth = 1 - value * N
        if abs(s0 - s0_orth) > 1e-10:
            raise WitnessError(f"general s0={s0!r} differs from orthonormal s0={s0_orth!r}")
    if not (0 < s0 < 1) and not force:
        raise WitnessError(f"s0={s0:.12g} is outside (0, 1); Condition 3 fails")
    reflected = reflect_through_identity(mu0, 1 / lam_max)
    rho0 = reflected.rho
    d0 = np.eye(N) / N
    tau0 = (1 - s0) * d0 + s0 * rho0
    c0 = float(np.real(np.trace(tau0 @ (rho0 - tau0))))
    w = tau0 + c0 * np.eye(N) - rho0
    ret = WitnessMatrix(
        matrix=w, s0=float(s0), c0=c0, tau0=tau0, rho0=rho0, mu0=mu0, b=reflected.b, value=value
    )
    hit = float(np.real(np.trace(mu0 @ tau0)))
    if abs(hit - value) > 1e-9:
        raise WitnessError(f"Tr(mu0 tau0)={hit!r} misses the target {value!r}")
    if ret.tr_rho0 >= 0 and not force:
        raise WitnessError(f"Tr(W0 rho0)={ret.tr_rho0:.3e} is not negative")
    return ret


# ---------------------------------------------------------------- thresholds


def _check_orthogonal_eps(N, m, epsilon):
    if not 0 < N * epsilon / m < 1:
        raise ConstructionError(f"N eps / m = {N * epsilon / m:.6g} is outside (0, 1)")


def pmax_threshold(N, m, epsilon):
    """rho(p) is certified inseparable when p_max is strictly below this value.

    `epsilon` is scaled so that inf Tr(mu0 sigma) = epsilon / m.
    """
    _check_orthogonal_eps(N, m, epsilon)
    return 1 / m + (epsilon / m) * (N - m) / (m - N * epsilon)


def frustum_threshold(N, m, p_max, s0):
    """lambda(t) is certified inseparable for t(b) < t <= 1; t(b) = s0 when p is uniform."""
    return s0 * (N * p_max - 1) / (N / m - 1)


def classify_pmax(p_max, threshold):
    return "inseparable-PPT" if p_max < threshold else "not-certified"


def lambda_of_t(rho_b, t):
    """(1 - t) D0 + t rho(b)."""
    if not 0 <= t <= 1:
        raise ConstructionError(f"t={t} outside [0, 1]")
    N = rho_b.shape[0]
    return (1 - t) * np.eye(N) / N + t * np.asarray(rho_b)
