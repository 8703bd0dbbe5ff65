"""Worked-example checklist behind the ``reproduce-paper`` subcommand."""

import time
from functools import lru_cache

import numpy as np

from . import construct, pipeline, separability
from .linalg import hermitian_eig, kron, projector
from .states import builtin_family, check_subset_basis_condition, gram_q, is_unextendible, tiles_normalizer

GROUPS = ("example1", "example2", "tiles", "example3", "reverse")
SQRT13 = np.sqrt(13)


@lru_cache(maxsize=None)
def _b2(seed, restarts):
    states = builtin_family("example_b2")
    p = construct.solve_condition2(gram_q(states)).p
    mu0 = construct.mu_of_p(states, p)
    eps = separability.epsilon_seesaw(mu0, states.dims, restarts, seed)
    return states, p, mu0, eps


@lru_cache(maxsize=None)
def _tiles(seed, restarts):
    states = builtin_family("tiles")
    p = np.full(5, 1 / 5)
    mu0 = construct.mu_of_p(states, p)
    eps = separability.epsilon_seesaw(mu0, states.dims, restarts, seed)
    return states, p, mu0, eps


def _close(a, b, tol):
    err = float(np.max(np.abs(np.asarray(a) - np.asarray(b))))
    return err <= tol, f"max error {err:.2e} (tol {tol:.0e})"


# ---------------------------------------------------------------- example 1


def check_example1_q(seed, restarts):
    q = gram_q(builtin_family("example_b2"))
    return _close(q, [[1, 0, 0.25], [0, 1, 0.25], [0.25, 0.25, 1]], 1e-12)


def check_example1_p(seed, restarts):
    p = construct.solve_condition2(gram_q(builtin_family("example_b2"))).p
    return _close(p, [3 / 8, 3 / 8, 2 / 8], 1e-12)


def check_example1_unextendible(seed, restarts):
    states = builtin_family("example_b2")
    ok = check_subset_basis_condition(states) and is_unextendible(states).unextendible
    return ok, "every 2-subset is a basis; no orthogonal product vector"


# ---------------------------------------------------------------- example 2


def check_example2_eigenvalues(seed, restarts):
    states, p, mu0, _ = _b2(seed, restarts)
    target = [(5 - SQRT13) / 16, 3 / 8, (5 + SQRT13) / 16]
    via_r = construct.r_matrix_spectrum(states, p).positive()
    full = hermitian_eig(mu0).positive()
    ok1, msg1 = _close(via_r, target, 1e-10)
    ok2, msg2 = _close(full, target, 1e-10)
    return ok1 and ok2, f"R route {msg1}; full eigensolve {msg2}"


def check_example2_overlap(seed, restarts):
    states, p, mu0, eps = _b2(seed, restarts)
    v = kron(states.members[0].factors[0], states.members[1].factors[1])
    exact = float(np.real(np.vdot(v, mu0 @ v)))
    ok = abs(exact - 1 / 16) <= 1e-12 and eps.value <= 1 / 16 + 1e-9
    return ok, f"Tr(mu0 P(a1 x b2)) = {exact:.15g}; see-saw minimum {eps.value:.12g}"


def check_example2_cond3(seed, restarts):
    states, p, mu0, eps = _b2(seed, restarts)
    cond = construct.evaluate_conditions(states, p, eps.value)
    ok = (not cond.cond3) and abs(cond.rhs - (5 - SQRT13) / 16) <= 1e-10 and cond.sanity_ok
    return ok, f"lhs {cond.lhs:.12g} vs rhs {cond.rhs:.12g}"


def check_example2_witness_inversion(seed, restarts):
    states, p, mu0, eps = _b2(seed, restarts)
    try:
        construct.build_witness(states, p, eps.value)
        return False, "witness accepted although Condition 3 fails"
    except construct.WitnessError:
        pass
    wit = construct.build_witness(states, p, eps.value, force=True)
    val = separability.validate_witness(wit, states.dims, samples=2000, seed=seed, restarts=16)
    ok = wit.s0 >= 1 and val.violating_sigma is not None
    return ok, f"s0 = {wit.s0:.12g}; separable sigma with Tr(W0 sigma) = {val.minimum:.3e}"


# ---------------------------------------------------------------- TILES


def check_tiles_ppt(seed, restarts):
    states, p, mu0, eps = _tiles(seed, restarts)
    rho0 = construct.rho_of_p(states, p, b="p_max").rho
    w = hermitian_eig(rho0).eigenvalues
    ok1, msg = _close(w, [0] * 5 + [0.25] * 4, 1e-10)
    ppt = separability.is_ppt(rho0, states.dims)
    ok = ok1 and ppt.is_ppt and ppt.min_eigenvalue >= -1e-10 and is_unextendible(states).unextendible
    return ok, f"spectrum {msg}; PPT min eigenvalue {ppt.min_eigenvalue:.2e}"


def check_tiles_witness(seed, restarts):
    states, p, mu0, eps = _tiles(seed, restarts)
    wit = construct.build_witness(states, p, eps.value)
    val = separability.validate_witness(wit, states.dims, samples=100_000, seed=seed, restarts=restarts)
    N, m = 9, 5
    ok = wit.tr_rho0 < -1e-6 and val.holds(1e-9) and 0 < N * eps.value < 1
    return ok, f"Tr(W0 rho0) = {wit.tr_rho0:.6g}; min Tr(W0 sigma) = {val.minimum:.3e}; N eps/m = {N * eps.value:.6g}"


def check_tiles_frustum(seed, restarts):
    states, p, mu0, eps = _tiles(seed, restarts)
    s0 = construct.build_witness(states, p, eps.value).s0
    t_m = construct.frustum_threshold(9, 5, 1 / 5, s0)
    t_b, _, rows = pipeline.frustum_table(states, steps=20, seed=seed, restarts=restarts)
    labels_ok = all(label == "inseparable-PPT" for t, _, _, label in rows if t > t_b)
    return abs(t_m - s0) <= 1e-12 and labels_ok, f"t(m) = {t_m:.12g}, s0 = {s0:.12g}"


# ---------------------------------------------------------------- example 3


def _perturbed_closed_form(t):
    c = tiles_normalizer(t)
    u = t**2 / (6 * c)
    q = np.eye(5)
    q[0, 4] = q[4, 0] = u
    p = np.array([1, 1 + u, 1 + u, 1 + u, 1]) / (5 + t**2 / (2 * c))
    return q, p


def check_example3_closed_forms(seed, restarts):
    worst = 0.0
    for t in (0.1, 0.01):
        states = builtin_family("tiles_perturbed", t=t)
        q = gram_q(states)
        p = construct.solve_condition2(q).p
        q_ref, p_ref = _perturbed_closed_form(t)
        worst = max(worst, np.abs(q - q_ref).max(), np.abs(p - p_ref).max())
    return worst <= 1e-12, f"max error {worst:.2e}"


def check_example3_convergence(seed, restarts):
    gaps = []
    for t in (1e-1, 1e-2, 1e-3, 1e-4):
        states = builtin_family("tiles_perturbed", t=t)
        p = construct.solve_condition2(gram_q(states)).p
        w = construct.r_matrix_spectrum(states, p).eigenvalues
        gaps.append(float(np.abs(w - 0.2).max()))
    ok = all(a > b for a, b in zip(gaps, gaps[1:]))
    return ok, "max |lambda - 1/5|: " + ", ".join(f"{g:.2e}" for g in gaps)


def check_example3_condition3(seed, restarts):
    t_crit = pipeline.bisect_tiles_condition3(seed=seed, restarts=min(restarts, 64))
    t = t_crit / 2
    report = pipeline.analyze(
        builtin_family("tiles_perturbed", t=t), seed=seed, restarts=restarts, samples=20_000
    )
    ok = report.conditions["cond3"] and report.verdict.startswith("certified-inseparable")
    return ok, f"Condition 3 boundary t ~ {t_crit:.4g}; at t = {t:.4g}: {report.verdict}"


# ---------------------------------------------------------------- reverse construction


def bell_mu0():
    psi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    return (np.eye(4) - projector(psi)) / 3, psi


def check_reverse(seed, restarts):
    mu0, psi = bell_mu0()
    rho = construct.reflect_through_identity(mu0, 3).rho
    ok1, msg = _close(rho, projector(psi), 1e-12)
    ppt = separability.is_ppt(rho, (2, 2))
    ok = ok1 and abs(ppt.min_eigenvalue + 0.5) <= 1e-10
    return ok, f"{msg}; partial-transpose min eigenvalue {ppt.min_eigenvalue:.12g}"


CHECKS = [
    ("example1", "Q matrix", check_example1_q),
    ("example1", "p-vector (3/8, 3/8, 2/8)", check_example1_p),
    ("example1", "subset-basis condition and unextendibility", check_example1_unextendible),
    ("example2", "positive eigenvalues (5 +- sqrt13)/16, 3/8", check_example2_eigenvalues),
    ("example2", "product-state value 1/16 reached", check_example2_overlap),
    ("example2", "Condition 3 fails", check_example2_cond3),
    ("example2", "witness inversion", check_example2_witness_inversion),
    ("tiles", "rho0 spectrum and PPT", check_tiles_ppt),
    ("tiles", "witness separates rho0", check_tiles_witness),
    ("tiles", "frustum threshold t(m) = s0", check_tiles_frustum),
    ("example3", "closed forms for Q(t), p(t)", check_example3_closed_forms),
    ("example3", "eigenvalues converge to 1/5", check_example3_convergence),
    ("example3", "Condition 3 holds for small t", check_example3_condition3),
    ("reverse", "Bell state from a separable mu0", check_reverse),
]


def run_checks(only=None, seed=0, restarts=256, out=print):
    """Run the checklist, printing one PASS/FAIL line per item. Returns the failed names."""
    if only is not None and only not in GROUPS:
        raise ValueError(f"unknown group {only!r}; choose from {GROUPS}")
    failed = []
    for group, name, fn in CHECKS:
        if only is not None and group != only:
            continue
        t0 = time.perf_counter()
        try:
            ok, detail = fn(seed, restarts)
        except Exception as e:  # a crash is a failed check, reported like any other
            ok, detail = False, f"{type(e).__name__}: {e}"
        status = "PASS" if ok else "FAIL"
        out(f"[{status}] {group}: {name} -- {detail} ({time.perf_counter() - t0:.1f}s)")
        if not ok:
            failed.append(f"{group}: {name}")
    return failed
