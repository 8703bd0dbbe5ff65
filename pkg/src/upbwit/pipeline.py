"""End-to-end analysis of a product-state set, and the report it produces."""

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import optimize

from . import construct, separability
from .linalg import hermitian_eig
from .states import builtin_family, gram_q, is_unextendible

VERDICT_PPT = "certified-inseparable-PPT"
VERDICT_NPT = "certified-inseparable-NPT"
VERDICT_INCONCLUSIVE = "inconclusive"

EXIT_OK = 0
EXIT_CERTIFICATE = 1
EXIT_PARSE = 2
EXIT_UNEXTENDIBILITY = 3
EXIT_CONDITIONS = 4

WITNESS_TOL = 1e-9
CONSERVATIVE_SCALE = 0.99


def round_sig(x, digits=12):
    """Round to `digits` significant digits; negative zero becomes zero."""
    if x is None or isinstance(x, bool):
        return x
    x = float(f"{float(x):.{digits}g}")
    return 0.0 if x == 0 else x


def fmt(x, digits=12):
    return f"{round_sig(x, digits):.{digits}g}"


def rational(x, max_den=4096, tol=1e-12):
    """'p/q' when x is within tol of a small-denominator rational, else None."""
    f = Fraction(float(x)).limit_denominator(max_den)
    if abs(float(f) - x) > tol:
        return None
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def fmt_exact(x):
    r = rational(x)
    if r == "0":
        return "0"
    return fmt(x) if r is None or r == fmt(x) else f"{fmt(x)} ({r})"


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return round_sig(obj) if math.isfinite(obj) else None
    return obj


def dumps(data):
    return json.dumps(_clean(data), indent=2, sort_keys=True) + "\n"


@dataclass
class AnalysisReport:
    input: dict
    q: list = None
    p: list = None
    p_exact: list = None
    c: float = None
    spectrum: dict = None
    conditions: dict = None
    epsilon: dict = None
    s0: float = None
    c0: float = None
    witness: dict = None
    ppt: dict = None
    thresholds: dict = None
    conservative: dict = None
    verdict: str = VERDICT_INCONCLUSIVE
    exit_code: int = EXIT_OK
    notes: list = field(default_factory=list)

    def to_dict(self):
        return _clean(self.__dict__)

    def to_json(self):
        return dumps(self.to_dict())


def _ppt_dict(report):
    return {
        "is_ppt": report.is_ppt,
        "min_eigenvalue": report.min_eigenvalue,
        "subsets": [
            {"subset": list(s), "is_psd": ok, "min_eigenvalue": x} for s, (ok, x) in report.verdicts.items()
        ],
    }


def analyze(
    states,
    seed=0,
    restarts=256,
    samples=100_000,
    oracle_resolution=None,
    conservative=False,
):
    """Run the full pipeline: Q -> p -> spectrum -> epsilon -> conditions -> rho0 -> PPT -> witness."""
    dims = states.dims
    N, m = dims.N, states.m
    report = AnalysisReport(
        input={"name": states.name, "dims": list(dims.local_dims), "m": m, "N": N}
    )
    q = gram_q(states)
    report.q = q
    certificate = is_unextendible(states)

    try:
        c2 = construct.solve_condition2(q)
    except construct.Condition2Error as e:
        report.conditions = {"cond1": certificate.unextendible, "cond2": False, "cond3": False}
        report.notes.append(f"Condition 2: {e}")
        report.exit_code = EXIT_UNEXTENDIBILITY if not certificate.unextendible else EXIT_CONDITIONS
        return report
    p = c2.p
    report.p = p
    report.p_exact = [rational(x) for x in p]
    report.c = c2.c
    if not c2.hypothesis_holds:
        report.notes.append("row-sum hypothesis fails; the nonnegative solve succeeded anyway")

    mu0 = construct.mu_of_p(states, p)
    spec = construct.r_matrix_spectrum(states, p)
    positive = spec.positive()
    lam_max = hermitian_eig(mu0).max
    report.spectrum = {"eigenvalues": positive, "lambda_max": lam_max, "b": 1 / lam_max}

    eps = separability.epsilon_seesaw(mu0, dims, restarts, seed, oracle_resolution)
    value = eps.value if eps.oracle_value is None else min(eps.value, eps.oracle_value)
    report.epsilon = {
        "value": value,
        "seesaw_value": eps.value,
        "oracle_value": eps.oracle_value,
        "restarts": restarts,
        "converged": eps.converged,
        "seed": seed,
    }

    cond = construct.evaluate_conditions(states, p, value, certificate)
    report.conditions = {
        "cond1": cond.cond1,
        "cond2": cond.cond2,
        "cond3": cond.cond3,
        "lhs": cond.lhs,
        "rhs": cond.rhs,
        "cond2_residual": cond.cond2_residual,
        "complement_dim": cond.complement_dim,
        "partitions_examined": certificate.partitions_examined,
        "sanity_epsilon_n_lambda_max": cond.sanity,
        "sanity_ok": cond.sanity_ok,
        "s0_agrees_with_cond3": cond.s0_agrees,
    }
    if not certificate.unextendible:
        w = certificate.witness_vector
        report.notes.append(
            "extendible: product vector orthogonal to every member, factors "
            + "; ".join(str(np.round(f, 12).tolist()) for f in w.factors)
        )

    rho0 = construct.rho_of_p(states, p, b="lambda_max").rho
    ppt = separability.is_ppt(rho0, dims)
    report.ppt = _ppt_dict(ppt)

    witness_ok = False
    if value < separability.EPSILON_FLOOR:
        report.notes.append(f"epsilon estimate {value:.3e} below {separability.EPSILON_FLOOR:g}; no witness built")
    else:
        wit = construct.build_witness(states, p, value, force=True)
        report.s0 = wit.s0
        report.c0 = wit.c0
        report.witness = {"tr_w_rho0": wit.tr_rho0, "valid_s0": 0 < wit.s0 < 1}
        if cond.all_hold:
            val = separability.validate_witness(wit, dims, samples, seed, restarts)
            report.witness.update(
                sampled_min=val.min_sampled, attack_min=val.min_attack, samples=samples
            )
            witness_ok = wit.tr_rho0 < -WITNESS_TOL and val.holds(WITNESS_TOL)
        else:
            report.notes.append("witness inconclusive: Condition 3 fails, rho0 lies on the same side as mu0")

    if states.is_orthonormal() and value > 0 and N * value < 1:
        eps_scaled = m * value
        report.thresholds = {
            "epsilon_scaled": eps_scaled,
            "p_max": float(np.max(p)),
            "p_max_threshold": construct.pmax_threshold(N, m, eps_scaled),
            "frustum_t": construct.frustum_threshold(N, m, float(np.max(p)), report.s0),
        }

    if not ppt.is_ppt:
        report.verdict = VERDICT_NPT
    elif cond.all_hold and witness_ok:
        report.verdict = VERDICT_PPT

    if conservative and cond.all_hold and witness_ok:
        scaled = CONSERVATIVE_SCALE * value
        cond_c = construct.evaluate_conditions(states, p, scaled, certificate)
        stable = cond_c.cond3
        entry = {"epsilon_value": scaled, "cond3": cond_c.cond3}
        if stable:
            wit_c = construct.build_witness(states, p, scaled)
            val_c = separability.validate_witness(wit_c, dims, min(samples, 10_000), seed, restarts)
            entry.update(s0=wit_c.s0, tr_w_rho0=wit_c.tr_rho0, attack_min=val_c.minimum)
            stable = wit_c.tr_rho0 < -WITNESS_TOL and val_c.holds(WITNESS_TOL)
        entry["stable"] = stable
        report.conservative = entry
        if not stable:
            report.verdict = VERDICT_INCONCLUSIVE
            report.notes.append("verdict not stable under the conservative epsilon rescaling")

    if not cond.cond1:
        report.exit_code = EXIT_UNEXTENDIBILITY
    elif not (cond.cond2 and cond.cond3):
        report.exit_code = EXIT_CONDITIONS
    elif report.verdict == VERDICT_INCONCLUSIVE:
        report.exit_code = EXIT_CERTIFICATE
    return report


def format_report(report):
    """Human-readable text rendering."""
    lines = [f"input: {report.input['name']}  dims={report.input['dims']}  m={report.input['m']}"]
    if report.q is not None:
        lines.append("Q:")
        for row in np.asarray(report.q):
            lines.append("  " + "  ".join(f"{fmt_exact(x):>14}" for x in row))
    if report.p is not None:
        lines.append("p: " + ", ".join(fmt_exact(x) for x in report.p))
        lines.append(f"c = Tr(mu0^2): {fmt_exact(report.c)}")
    if report.spectrum:
        lines.append("positive eigenvalues of mu0: " + ", ".join(fmt(x) for x in report.spectrum["eigenvalues"]))
        lines.append(f"lambda_max: {fmt(report.spectrum['lambda_max'])}   b: {fmt(report.spectrum['b'])}")
    if report.epsilon:
        e = report.epsilon
        extra = "" if e["oracle_value"] is None else f"  (grid oracle {fmt(e['oracle_value'])})"
        lines.append(f"min Tr(mu0 sigma) over product states: {fmt_exact(e['value'])}{extra}")
    c = report.conditions or {}
    for key in ("cond1", "cond2", "cond3"):
        if key in c:
            lines.append(f"{key}: {c[key]}")
    if "lhs" in c:
        lines.append(f"  Condition 3: lhs {fmt(c['lhs'])} vs rhs {fmt_exact(c['rhs'])}")
        lines.append(f"  epsilon N lambda_max = {fmt(c['sanity_epsilon_n_lambda_max'])} (must lie in (0, 1))")
    if report.ppt:
        lines.append(f"rho0 PPT: {report.ppt['is_ppt']}  (min eigenvalue {fmt(report.ppt['min_eigenvalue'])})")
    if report.witness:
        w = report.witness
        lines.append(f"s0: {fmt(report.s0)}   c0: {fmt(report.c0)}   Tr(W0 rho0): {fmt(w['tr_w_rho0'])}")
        if "attack_min" in w:
            lines.append(
                f"  min Tr(W0 sigma): sampled {fmt(w['sampled_min'])}, see-saw attack {fmt(w['attack_min'])}"
            )
    if report.thresholds:
        t = report.thresholds
        lines.append(f"p_max threshold: {fmt(t['p_max_threshold'])}   frustum t(b): {fmt(t['frustum_t'])}")
    if report.conservative:
        lines.append(f"conservative rerun (0.99 epsilon) stable: {report.conservative['stable']}")
    for note in report.notes:
        lines.append(f"note: {note}")
    lines.append(f"verdict: {report.verdict}")
    return "\n".join(lines)


# ---------------------------------------------------------------- frustum


def frustum_table(states, steps=100, seed=0, restarts=256):
    """Rows (t, Tr(mu0 lambda(t)), PPT min eigenvalue, classification) along D0 -> rho0."""
    if not states.is_orthonormal():
        raise construct.ConstructionError("frustum sweep needs an orthonormal product basis")
    dims = states.dims
    N, m = dims.N, states.m
    p = np.full(m, 1 / m)
    mu0 = construct.mu_of_p(states, p)
    value = separability.epsilon_seesaw(mu0, dims, restarts, seed).value
    s0 = 1 - N * value
    rho_b = construct.rho_of_p(states, p, b="p_max").rho
    t_b = construct.frustum_threshold(N, m, 1 / m, s0)
    rows = []
    for i in range(steps + 1):
        t = i / steps
        lam = construct.lambda_of_t(rho_b, t)
        tr = float(np.real(np.trace(mu0 @ lam)))
        ppt = separability.is_ppt(lam, dims)
        if t == 0:
            label = "known separable by cited ball result"
        elif t > t_b and ppt.is_ppt and tr < value:
            label = "inseparable-PPT"
        else:
            label = "not certified"
        rows.append((t, tr, ppt.min_eigenvalue, label))
    return t_b, value, rows


# ---------------------------------------------------------------- perturbed TILES


def tiles_condition3_margin(t, seed=0, restarts=256):
    """Measured minimum minus the Condition 3 right-hand side for TILES perturbed by t."""
    states = builtin_family("tiles_perturbed", t=t)
    p = construct.solve_condition2(gram_q(states)).p
    mu0 = construct.mu_of_p(states, p)
    value = separability.epsilon_seesaw(mu0, states.dims, restarts, seed).value
    cond = construct.evaluate_conditions(states, p, value)
    return cond.lhs - cond.rhs


def bisect_tiles_condition3(lo=1e-3, hi=1.0, seed=0, restarts=64, xtol=1e-4):
    """Largest-perturbation boundary where Condition 3 stops holding, by bisection."""
    f = lambda t: tiles_condition3_margin(t, seed, restarts)
    if f(lo) <= 0:
        raise construct.ConstructionError(f"Condition 3 already fails at t={lo}")
    if f(hi) > 0:
        return hi
    return optimize.bisect(f, lo, hi, xtol=xtol)
