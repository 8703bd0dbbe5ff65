"""Command-line front end: ``upbwit {analyze,frustum,epsilon,reproduce-paper,families}``."""

import argparse
import csv
import sys
from pathlib import Path

from . import construct, pipeline, reproduce, separability
from .states import FAMILIES, StateSetError, builtin_family, gram_q, load_state_set


def _add_input(sub):
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--family", choices=sorted(FAMILIES))
    group.add_argument("--file", type=Path, help="product-state set as JSON")
    sub.add_argument("--t", type=float, default=None, help="perturbation for tiles_perturbed")
    sub.add_argument("--normalize", action="store_true", help="normalize file factors instead of rejecting them")


def _add_random(sub):
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--restarts", type=int, default=256)


def build_parser():
    parser = argparse.ArgumentParser(prog="upbwit", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("analyze", help="run the full pipeline on a product-state set")
    _add_input(sub)
    _add_random(sub)
    sub.add_argument("--oracle", action="store_true", help="also run the grid oracle for epsilon")
    sub.add_argument("--resolution", type=int, default=None, help="grid oracle points per angle")
    sub.add_argument("--samples", type=int, default=100_000)
    sub.add_argument("--json", type=Path, default=None, help="write the report as JSON")
    sub.add_argument("--conservative", action="store_true", help="recheck with 0.99 epsilon")

    sub = subs.add_parser("frustum", help="sweep lambda(t) from D0 to rho0 and emit CSV")
    _add_input(sub)
    _add_random(sub)
    sub.add_argument("--steps", type=int, default=100)

    sub = subs.add_parser("epsilon", help="estimate min Tr(mu0 sigma) over product states")
    _add_input(sub)
    _add_random(sub)
    sub.add_argument("--oracle", action="store_true")
    sub.add_argument("--resolution", type=int, default=None)

    sub = subs.add_parser("reproduce-paper", help="run the worked-example checklist")
    sub.add_argument("--only", choices=reproduce.GROUPS, default=None)
    _add_random(sub)

    subs.add_parser("families", help="list built-in product-state sets")
    return parser


def _load(args):
    if args.family is not None:
        return builtin_family(args.family, t=args.t)
    return load_state_set(args.file, normalize=args.normalize)


def _default_resolution(states):
    return 40 if states.dims.N <= 4 else 8


def cmd_analyze(args):
    states = _load(args)
    resolution = None
    if args.oracle:
        resolution = args.resolution or _default_resolution(states)
    report = pipeline.analyze(
        states,
        seed=args.seed,
        restarts=args.restarts,
        samples=args.samples,
        oracle_resolution=resolution,
        conservative=args.conservative,
    )
    print(pipeline.format_report(report))
    if args.json is not None:
        args.json.write_text(report.to_json())
    return report.exit_code


def cmd_frustum(args):
    states = _load(args)
    try:
        t_b, value, rows = pipeline.frustum_table(states, args.steps, args.seed, args.restarts)
    except construct.ConstructionError as e:
        print(f"error: {e}", file=sys.stderr)
        return pipeline.EXIT_CONDITIONS
    print(f"# t_b={pipeline.fmt(t_b)} epsilon_value={pipeline.fmt(value)}")
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["t", "tr_mu0_lambda", "ppt_min_eigenvalue", "classification"])
    for t, tr, min_eig, label in rows:
        writer.writerow([pipeline.fmt(t), pipeline.fmt(tr), pipeline.fmt(min_eig), label])
    return pipeline.EXIT_OK


def cmd_epsilon(args):
    states = _load(args)
    p = construct.solve_condition2(gram_q(states)).p
    mu0 = construct.mu_of_p(states, p)
    resolution = (args.resolution or _default_resolution(states)) if args.oracle else None
    eps = separability.epsilon_seesaw(mu0, states.dims, args.restarts, args.seed, resolution)
    print(f"seesaw_value: {pipeline.fmt_exact(eps.value)}")
    print(f"converged: {eps.converged}")
    if eps.oracle_value is not None:
        print(f"oracle_value: {pipeline.fmt(eps.oracle_value)}  (resolution {resolution})")
    for j, f in enumerate(eps.argmin):
        print(f"argmin factor {j}: " + " ".join(pipeline.fmt(z.real) + ("+" if z.imag >= 0 else "-") + pipeline.fmt(abs(z.imag)) + "j" for z in f))
    return pipeline.EXIT_OK


def cmd_reproduce(args):
    failed = reproduce.run_checks(args.only, args.seed, args.restarts)
    if failed:
        print(f"{len(failed)} check(s) failed: " + "; ".join(failed))
        return 1
    print("all checks passed")
    return 0


def cmd_families(args):
    for name, desc in sorted(FAMILIES.items()):
        print(f"{name:16} {desc}")
    return 0


COMMANDS = {
    "analyze": cmd_analyze,
    "frustum": cmd_frustum,
    "epsilon": cmd_epsilon,
    "reproduce-paper": cmd_reproduce,
    "families": cmd_families,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (StateSetError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return pipeline.EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
