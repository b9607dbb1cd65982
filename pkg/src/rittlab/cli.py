"""Command-line entry point.

Subcommands: diagnose, calc, sqf, basis-sweep, verify-identities,
equivalence.  Reports are written as JSON (with CSV side files where a
subcommand produces grids); logs go to stderr only.  Exit codes:
0 success, 1 invalid configuration or arguments, 2 numerical failure,
3 I/O failure.
"""

import argparse
import json
import os
import sys

from . import basis, diagnostics, experiments, funcalc, holo, identities
from . import numkernel, squarefn, stolz, zoo
from .errors import RittLabError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_IO = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class UsageError(Exception):
    pass


def parse_holo_spec(text):
    """Mini-grammar: poly:c0,c1,...  rational:c0,../d0,..  monomial:n  cayley.

    Coefficients are real or "a+bi" complex literals.
    """
    if text == "cayley":
        return holo.cayley()
    if ":" not in text:
        raise UsageError(f"cannot parse function spec {text!r}")
    kind, _, body = text.partition(":")
    if kind == "poly":
        return holo.polynomial([_parse_coeff(c) for c in body.split(",")], label=text)
    if kind == "rational":
        num, _, den = body.partition("/")
        if not den:
            raise UsageError("rational spec needs numerator/denominator")
        return holo.rational(
            [_parse_coeff(c) for c in num.split(",")],
            [_parse_coeff(c) for c in den.split(",")],
            label=text,
        )
    if kind == "monomial":
        return holo.monomial(int(body))
    raise UsageError(f"unknown function kind {kind!r}")


def _parse_coeff(text):
    text = text.strip().replace(" ", "")
    try:
        return complex(text.replace("i", "j"))
    except ValueError as exc:
        raise UsageError(f"bad coefficient {text!r}") from exc


def _load_operator(path):
    with open(path) as fh:
        return numkernel.operator_from_json(fh.read())


def _write(path, text):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w") as fh:
        fh.write(text)


def build_parser():
    ap = _Parser(prog="rittlab", description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    sub = ap.add_subparsers(dest="command", required=True)

    d = sub.add_parser("diagnose", help="classify an operator")
    d.add_argument("--op", required=True, help="operator JSON file")
    d.add_argument("--out", required=True, help="output directory")
    d.add_argument("--power-horizon", type=int, default=128)
    d.add_argument("--dd-horizon", type=int, default=256)
    d.add_argument("--with-rbound", action="store_true")

    c = sub.add_parser("calc", help="evaluate f(T) by contour quadrature")
    c.add_argument("--op", required=True)
    c.add_argument("--f", required=True, help="function spec, e.g. poly:0,1")
    c.add_argument("--theta", type=float, required=True)
    c.add_argument("--tol", type=float, default=1e-9)
    c.add_argument("--out", required=True)
    c.add_argument("--regularized", action="store_true")

    s = sub.add_parser("sqf", help="square-function norms")
    s.add_argument("--op", required=True)
    s.add_argument("--m", type=int, default=1)
    s.add_argument("--out", required=True)
    s.add_argument("--probes", type=int, default=32)

    b = sub.add_parser("basis-sweep", help="pairing sweeps over a Stolz grid")
    b.add_argument("--omega", type=float, required=True)
    b.add_argument("--m", type=int, default=1)
    b.add_argument("--points", type=int, default=500)
    b.add_argument("--min-vertex-distance", type=float, default=1e-2)
    b.add_argument("--out", required=True)

    v = sub.add_parser("verify-identities", help="run the identity audit suites")
    v.add_argument("--suite", default="all",
                   choices=["lemma", "rising", "pairing", "representation",
                            "multiplier", "contour-l1", "all"])
    v.add_argument("--K", type=int, default=500)
    v.add_argument("--out", required=True)

    e = sub.add_parser("equivalence", help="run the equivalence table")
    e.add_argument("--config", required=True, help="experiment config JSON")
    e.add_argument("--out", required=True)
    return ap


def _cmd_diagnose(args):
    T = _load_operator(args.op)
    report = diagnostics.diagnose(
        T, N=args.power_horizon, K=args.dd_horizon,
        with_rbound=args.with_rbound, seed=args.seed, threads=args.threads)
    _write(os.path.join(args.out, "diagnose.json"), report.to_json() + "\n")
    _, _, grid = diagnostics.ritt_constant(T, collect_grid=True)
    diagnostics.ritt_grid_to_csv(grid, os.path.join(args.out, "ritt_grid.csv"))
    print(f"classification: {report.classification}", file=sys.stderr)
    return EXIT_OK


def _cmd_calc(args):
    T = _load_operator(args.op)
    f = parse_holo_spec(args.f)
    if args.regularized:
        res = funcalc.calc_regularized(T, f, args.theta, tol=args.tol, threads=args.threads)
    else:
        res = funcalc.calc_contour(T, f, args.theta, tol=args.tol, threads=args.threads)
    out = {
        "method": res.method,
        "quad_error_est": res.quad_error_est,
        "contour_theta": res.contour_theta,
        "operator": json.loads(numkernel.operator_to_json(res.value)),
    }
    _write(os.path.join(args.out, "calc.json"),
           json.dumps(out, sort_keys=True, indent=2) + "\n")
    return EXIT_OK


def _cmd_sqf(args):
    T = _load_operator(args.op)
    value = squarefn.phi_m_norm(T, args.m, probe_count=args.probes, seed=args.seed)
    dual = squarefn.phi_m_dual_norm(T, args.m, probe_count=args.probes, seed=args.seed)
    lower = squarefn.lower_bound_check(T, args.m, probes=args.probes, seed=args.seed)
    out = {"m": args.m, "phi_norm": value, "phi_dual_norm": dual, "lower_bound": lower}
    _write(os.path.join(args.out, "sqf.json"),
           json.dumps(out, sort_keys=True, indent=2) + "\n")
    x = numkernel.identity_like(T).entries[0]
    squarefn.sequence_to_csv(squarefn.SqfSequence(T, x, args.m), 200,
                             os.path.join(args.out, "sqf_decay.csv"))
    return EXIT_OK


def _cmd_basis_sweep(args):
    summary, riesz_tables, canon_tables = experiments.run_basis_sweep(
        args.omega, args.m, n_points=args.points,
        min_vertex_distance=args.min_vertex_distance)
    _write(os.path.join(args.out, "basis_sweep.json"),
           experiments.report_json(summary, args.seed))
    basis.sweep_to_csv(riesz_tables + canon_tables,
                       os.path.join(args.out, "basis_sweep.csv"))
    return EXIT_OK


def _cmd_verify_identities(args):
    reports = []
    if args.suite in ("lemma", "all"):
        reports.append(identities.verify_lemma_suite(K=args.K, seed=args.seed))
    if args.suite in ("rising", "all"):
        reports.append(identities.verify_rising_suite(K=args.K, seed=args.seed + 1))
    if args.suite in ("pairing", "all"):
        reports.append(identities.audit_pairing_constant(K=max(args.K, 2000)))
    if args.suite in ("representation", "all"):
        f_pair = (holo.polynomial([1.0, 0.5, 0.25], label="probe-poly"), holo.cayley())
        reports.append(identities.audit_representation(f_pair, K=max(args.K, 600)))
    if args.suite in ("multiplier", "all"):
        reports.append(identities.verify_multiplier_suite())
    if args.suite in ("contour-l1", "all"):
        reports.append(identities.verify_contour_l1_suite())
    _write(os.path.join(args.out, "identities.json"),
           identities.reports_to_json(reports) + "\n")
    failed = [r.name for r in reports
              if not r.verified and not r.name.startswith(("pairing-constant",))]
    for r in reports:
        print(f"{r.name}: {r.verdict}", file=sys.stderr)
    return EXIT_OK if not failed else EXIT_NUMERICAL


def _cmd_equivalence(args):
    try:
        with open(args.config) as fh:
            cfg = experiments.config_from_json(fh.read())
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    seed = cfg["seed"] if cfg["seed"] else args.seed
    rows = experiments.run_equivalence(
        cfg["specs"], p=cfg["p"], nu=cfg["nu"], seed=seed,
        budgets=cfg["budgets"], threads=args.threads)
    _write(os.path.join(args.out, "equivalence.json"),
           experiments.report_json(rows, seed))
    return EXIT_OK


_COMMANDS = {
    "diagnose": _cmd_diagnose,
    "calc": _cmd_calc,
    "sqf": _cmd_sqf,
    "basis-sweep": _cmd_basis_sweep,
    "verify-identities": _cmd_verify_identities,
    "equivalence": _cmd_equivalence,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RittLabError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (OSError, json.JSONDecodeError) as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
