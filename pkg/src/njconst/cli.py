"""Command-line driver: compute constants, verify oracles, run check suites,
emit the sign matrix.

Exit codes: 0 success (all checks passed), 1 at least one failed check,
2 usage or configuration error (including dimension preconditions).
NJCONST_WORKERS sets the default worker count; --seed pins all randomness,
and reports are byte-identical across runs and worker counts.
"""

import argparse
import os
import sys
from fractions import Fraction
from typing import List, Optional

from . import report as rep
from .analyze import (
    CheckReport,
    b_convexity_scan,
    detect_non_ln1,
    duality_check,
    inequality_suite,
    reproduce_table,
)
from .errors import NjconstError
from .hadamard import sign_matrix
from .optimize import KINDS, OptimizerConfig, estimate_constant
from .spaces import INF, SpaceSpec

DEFAULT_VERIFY_RESTARTS = 48
DEFAULT_VERIFY_GRID = "default"


def parse_space(text: str) -> SpaceSpec:
    """Parse 'lp:p=<exponent>,dim=<d>' with p = inf for the sup norm."""
    body = text
    if body.startswith("lp:"):
        body = body[len("lp:"):]
    fields = {}
    for part in body.split(","):
        if "=" not in part:
            raise ValueError(f"bad space syntax {text!r}; expected lp:p=...,dim=...")
        key, value = part.split("=", 1)
        fields[key.strip()] = value.strip()
    if set(fields) != {"p", "dim"}:
        raise ValueError(f"bad space syntax {text!r}; expected lp:p=...,dim=...")
    p = INF if fields["p"].lower() == "inf" else Fraction(fields["p"])
    return SpaceSpec(p, int(fields["dim"]))


def default_grid() -> List[tuple]:
    grid = []
    for n in (2, 3):
        d = max(n, 2 ** (n - 1))
        for p in (Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3),
                  Fraction(4), INF):
            grid.append((n, p, d))
    return grid


def _add_common(parser, restarts_default=None):
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--restarts", type=int, default=restarts_default)
    parser.add_argument("--max-iter", type=int, default=None, dest="max_iter")
    parser.add_argument("--tol", type=float, default=None)
    parser.add_argument("--eps", type=float, default=None)
    parser.add_argument(
        "--workers",
        type=int,
        default=None,
        help="thread count; default from NJCONST_WORKERS, else 1",
    )
    parser.add_argument(
        "--format", choices=["json", "csv", "text"], default="json"
    )
    parser.add_argument("--out", default=None, help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="njconst",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="estimate one constant of a space")
    c.add_argument("--space", required=True, help="lp:p=<exponent>,dim=<d>")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--kind", choices=list(KINDS), required=True)
    c.add_argument(
        "--method",
        choices=["auto", "enumerate", "multistart", "seeds"],
        default="auto",
    )
    _add_common(c)

    v = sub.add_parser("verify", help="closed-form oracles vs estimates on a grid")
    v.add_argument("--grid", choices=[DEFAULT_VERIFY_GRID], default=DEFAULT_VERIFY_GRID)
    _add_common(v, restarts_default=DEFAULT_VERIFY_RESTARTS)

    k = sub.add_parser("check", help="property suites for one space")
    k.add_argument(
        "--suite",
        choices=["inequalities", "duality", "non-ln1", "b-convexity"],
        required=True,
    )
    k.add_argument("--space", required=True)
    k.add_argument("--n", type=int, default=2)
    k.add_argument("--samples", type=int, default=10000)
    k.add_argument("--n-max", type=int, default=3, dest="n_max")
    _add_common(k)

    m = sub.add_parser("matrix", help="emit the order-n sign matrix")
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--format", choices=["json", "csv", "text"], default="csv")
    m.add_argument("--out", default=None)

    return parser


def _workers(args) -> int:
    if getattr(args, "workers", None):
        return max(1, args.workers)
    env = os.environ.get("NJCONST_WORKERS", "").strip()
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise NjconstError(f"NJCONST_WORKERS must be an integer, got {env!r}") from exc
    return 1


def _cfg_from_args(args) -> OptimizerConfig:
    base = OptimizerConfig()
    return OptimizerConfig(
        restarts=args.restarts if args.restarts else base.restarts,
        max_iters=args.max_iter if args.max_iter else base.max_iters,
        tol=args.tol if args.tol else base.tol,
        eps=args.eps if args.eps else base.eps,
        seed=args.seed,
    )


def _config_echo(args, cfg: OptimizerConfig, **extra) -> dict:
    echo = {
        "command": args.command,
        "seed": cfg.seed,
        "restarts": cfg.restarts,
        "max_iters": cfg.max_iters,
        "tol": cfg.tol,
        "eps": cfg.eps,
        "format": args.format,
    }
    echo.update(extra)
    return echo


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _emit_report(args, config: dict, report: CheckReport) -> int:
    if args.format == "json":
        text = rep.dumps(rep.envelope(args.command, config, rep.check_report_result(report)))
    elif args.format == "csv":
        text = rep.check_report_csv(report)
    else:
        text = rep.check_report_text(report)
    _emit(text, args.out)
    return 0 if report.all_passed else 1


def _run_compute(args) -> int:
    space = parse_space(args.space)
    cfg = _cfg_from_args(args)
    est = estimate_constant(
        space, args.n, args.kind, cfg=cfg, method=args.method, workers=_workers(args)
    )
    config = _config_echo(
        args,
        cfg,
        space={"p": space.p_label, "dim": space.dim},
        n=args.n,
        kind=args.kind,
        method=args.method,
    )
    if args.format == "json":
        text = rep.dumps(
            rep.envelope("compute", config, rep.estimate_result(est, space, args.n))
        )
    elif args.format == "csv":
        text = rep.estimate_csv(est, space, args.n)
    else:
        text = rep.estimate_text(est, space, args.n)
    _emit(text, args.out)
    return 0


def _run_verify(args) -> int:
    cfg = _cfg_from_args(args)
    grid = default_grid()
    report = reproduce_table(grid, cfg=cfg, workers=_workers(args))
    config = _config_echo(args, cfg, grid=args.grid)
    return _emit_report(args, config, report)


def _run_check(args) -> int:
    space = parse_space(args.space)
    cfg = _cfg_from_args(args)
    workers = _workers(args)
    config = _config_echo(
        args,
        cfg,
        suite=args.suite,
        space={"p": space.p_label, "dim": space.dim},
        n=args.n,
        samples=args.samples,
    )
    if args.suite == "inequalities":
        detection = detect_non_ln1(space, args.n, cfg=cfg, workers=workers)
        report = inequality_suite(
            space,
            args.n,
            samples=args.samples,
            seed=cfg.seed,
            sphere_delta=detection.delta_sphere,
        )
        report.config.update({"verdict": detection.verdict})
    elif args.suite == "duality":
        report = duality_check(space.p, space.dim, args.n, cfg=cfg, workers=workers)
    elif args.suite == "non-ln1":
        from .analyze import Check

        res = detect_non_ln1(space, args.n, cfg=cfg, workers=workers)
        ok = res.verdict != "undetermined"
        report = CheckReport(
            checks=[
                Check(
                    name=f"non-ln1-verdict:n={args.n}",
                    status="pass" if ok else "skip",
                    observed=res.verdict,
                    expected=None,
                    tolerance=None,
                    provenance=res.bound_provenance or "estimate:multistart",
                    detail=(
                        f"delta={rep.fmt7(res.delta)} "
                        f"delta_sphere={rep.fmt7(res.delta_sphere)} "
                        f"bound={rep.fmt7(res.modified_bound)} "
                        f"estimate={rep.fmt7(res.estimate.value)}"
                    ),
                )
            ],
            config=config,
        )
    else:  # b-convexity
        from .analyze import Check

        res = b_convexity_scan(space, args.n_max, cfg=cfg, workers=workers)
        verdict = "b-convex" if res.b_convex else "undetermined"
        report = CheckReport(
            checks=[
                Check(
                    name=f"b-convexity-scan:n_max={args.n_max}",
                    status="pass" if res.b_convex else "skip",
                    observed=verdict,
                    expected=None,
                    tolerance=None,
                    provenance="scan:non-ln1-detection",
                    detail=f"witness_n={res.witness_n} verdicts={list(res.verdicts)}",
                )
            ],
            config=config,
        )
    return _emit_report(args, config, report)


def _run_matrix(args) -> int:
    m = sign_matrix(args.n)
    rows = m.entries.tolist()
    if args.format == "json":
        config = {"command": "matrix", "n": args.n, "format": args.format}
        text = rep.dumps(rep.envelope("matrix", config, {"n": args.n, "rows": rows}))
    elif args.format == "csv":
        text = "\n".join(",".join(str(v) for v in row) for row in rows) + "\n"
    else:
        text = "\n".join(" ".join(f"{v:>2d}" for v in row) for row in rows) + "\n"
    _emit(text, args.out)
    return 0


def run(argv: Optional[List[str]] = None) -> int:
    """Parse argv and execute; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        if args.command == "compute":
            return _run_compute(args)
        if args.command == "verify":
            return _run_verify(args)
        if args.command == "check":
            return _run_check(args)
        return _run_matrix(args)
    except NjconstError as exc:
        sys.stderr.write(f"njconst: {exc}\n")
        return 2
    except ValueError as exc:
        sys.stderr.write(f"njconst: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
