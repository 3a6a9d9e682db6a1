"""Command-line front end: solve, instanton sweeps, verification runs.

Exit codes: 0 success, 2 hypothesis-gate refusal, 3 no convergence or
failed verification, 4 invalid configuration.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import RunConfig, parse_config_file, resolve_config
from .errors import (AdmissibilityError, ConvergenceError, GridResolutionError,
                     ParameterDomainError)
from .instanton import build_report, mu_rule_kind
from .params import KGMParams, classify
from .report import write_field_csv, write_instanton_csv, write_report
from .saddle import SolveOptions, solve
from .verify import run_verification

EXIT_OK = 0
EXIT_REFUSED = 2
EXIT_NO_CONVERGENCE = 3
EXIT_INVALID = 4


def _common_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="flat key=value configuration file")
    parser.add_argument("--out", default="runs", help="output directory")
    parser.add_argument("--seed", type=int, help="seed for randomized suites")


def _param_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--dimension", type=int)
    parser.add_argument("--mass", type=float)
    parser.add_argument("--omega", type=float)
    parser.add_argument("--q", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kgmlab",
        description="Radial solitary-wave solver and threshold laboratory for "
                    "the Klein-Gordon-Maxwell system with critical growth.")
    sub = parser.add_subparsers(dest="mode", required=True)

    sp = sub.add_parser("solve", help="find a nontrivial radial wave")
    _common_flags(sp)
    _param_flags(sp)
    sp.add_argument("--mu", type=float)
    sp.add_argument("--rmax", type=float, dest="r_max")
    sp.add_argument("--nodes", type=int)
    sp.add_argument("--tol", type=float)
    sp.add_argument("--knots", type=int)
    sp.add_argument("--override-admissibility", action="store_true", default=None,
                    dest="override_admissibility")
    sp.add_argument("--phi-boundary", choices=("dirichlet", "robin"),
                    dest="phi_boundary")

    ip = sub.add_parser("instanton", help="concentration-profile sweeps")
    _common_flags(ip)
    _param_flags(ip)
    ip.add_argument("--mu", help="subcritical coefficient, or 'rule' for the "
                                 "dimension-dependent growing-mu rule")
    ip.add_argument("--R", type=float)
    ip.add_argument("--eps-decades", dest="eps_decades",
                    help="A:B sweeps epsilon over 10^-A .. 10^-B")
    ip.add_argument("--max-nodes", type=int, dest="max_nodes")

    vp = sub.add_parser("verify", help="run the seeded invariant battery")
    _common_flags(vp)

    return parser


def _cli_values(args: argparse.Namespace) -> dict:
    skip = {"mode", "config", "out"}
    values = {k: v for k, v in vars(args).items() if k not in skip and v is not None}
    if args.mode == "instanton" and "mu" in values:
        if values["mu"] == "rule":
            values["mu_rule"] = True
            del values["mu"]
        else:
            try:
                values["mu"] = float(values["mu"])
            except ValueError as exc:
                raise ParameterDomainError(
                    f"--mu must be a number or 'rule', got {values['mu']!r}") from exc
    return values


def _params_from(cfg: RunConfig) -> KGMParams:
    return KGMParams(dimension=cfg.dimension, m0=cfg.mass, omega=cfg.omega,
                     mu=cfg.mu, q=cfg.q)


def _base_payload(cfg: RunConfig) -> dict:
    return {"schema": "kgmlab-report/1", "config": cfg.as_payload(),
            "config_hash": cfg.hash(), "mode": cfg.mode}


def run_solve(cfg: RunConfig, out_dir: Path) -> int:
    params = _params_from(cfg)
    verdict = classify(params)
    payload = _base_payload(cfg)
    payload["admissibility"] = verdict.as_dict()
    opts = SolveOptions(r_max=cfg.r_max, nodes=cfg.nodes, tol=cfg.tol,
                        knot_count=cfg.knots,
                        mu_continuation_factor=cfg.mu_continuation_factor,
                        override_admissibility=cfg.override_admissibility)
    try:
        result = solve(params, opts)
    except AdmissibilityError as exc:
        payload["status"] = "refused"
        payload["detail"] = str(exc)
        write_report(out_dir, payload)
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except ConvergenceError as exc:
        payload["status"] = "no_convergence"
        payload["detail"] = str(exc)
        payload["trace"] = exc.trace
        write_report(out_dir, payload)
        print(f"no convergence: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE

    payload["status"] = "converged"
    payload["result"] = result.as_dict()
    write_report(out_dir, payload)
    write_field_csv(out_dir / "profile.csv", result.profile)
    write_field_csv(out_dir / "phi.csv", result.phi, value_name="phi")
    print(f"converged: energy={result.energy:.9g} residual={result.residual:.3e} "
          f"below_threshold={result.below_threshold}")
    return EXIT_OK


def run_instanton(cfg: RunConfig, out_dir: Path) -> int:
    params = _params_from(cfg)
    payload = _base_payload(cfg)
    if cfg.mu_rule and mu_rule_kind(cfg.dimension, cfg.q) is None:
        raise ParameterDomainError(
            f"no growing-mu rule applies for N={cfg.dimension}, q={cfg.q:g}; "
            "rules exist for (N=3, 2<q<=4) and (N=5, q>=8/3)")
    report = build_report(params, R=cfg.R, eps_list=cfg.eps_list(),
                          use_mu_rule=cfg.mu_rule, max_nodes=cfg.max_nodes)
    payload["status"] = "done"
    payload["instanton"] = report.as_dict()
    write_report(out_dir, payload)
    write_instanton_csv(out_dir / "instanton.csv", report)
    verdict = report.verdict
    print(f"case={verdict.case} passed={verdict.passed} "
          f"S={report.s_estimate:.6g} threshold={report.threshold:.6g}")
    return EXIT_OK


def run_verify(cfg: RunConfig, out_dir: Path) -> int:
    outcome = run_verification(seed=cfg.seed)
    payload = _base_payload(cfg)
    payload["status"] = "done"
    payload["verification"] = outcome
    write_report(out_dir, payload)
    for suite in outcome["suites"]:
        print(f"{suite['name']}: {suite['passed']}/{suite['total']}")
    print(f"total: {outcome['passed']}/{outcome['total']}")
    return EXIT_OK if outcome["all_passed"] else EXIT_NO_CONVERGENCE


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        file_values = parse_config_file(args.config) if args.config else None
        cfg = resolve_config(args.mode, file_values, _cli_values(args))
        out_dir = Path(args.out)
        if args.mode == "solve":
            return run_solve(cfg, out_dir)
        if args.mode == "instanton":
            return run_instanton(cfg, out_dir)
        return run_verify(cfg, out_dir)
    except (ParameterDomainError, GridResolutionError, OSError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except AdmissibilityError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except ConvergenceError as exc:
        print(f"no convergence: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE


if __name__ == "__main__":
    raise SystemExit(main())
