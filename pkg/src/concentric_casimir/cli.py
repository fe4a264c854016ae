"""Command-line front end.

Subcommands: ``compute`` (single point), ``sweep`` (grid, CSV), ``verify``
(built-in checks) and ``dump-debye`` (coefficient audit).

Exit codes: 0 success, 1 failed verification, 2 configuration error,
3 non-convergence.
"""
from __future__ import annotations

import argparse
import csv
import datetime
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional

from . import __version__
from .config import (
    apply_overrides,
    build_run,
    build_sweep,
    load_config,
    point_params,
)
from .debye import DEFAULT_THETA_ORDER, generate_correction_coefficients
from .dispersion import model_label
from .engine import FreeEnergyResult, convergence_report, free_energy
from .errors import ConfigError, DomainError
from . import verification

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_NOT_CONVERGED = 3

CSV_COLUMNS = (
    "t",
    "d_over_a",
    "n_or_model",
    "beta_F",
    "minus_beta_F_t_log10",
    "Y",
    "terms",
    "converged",
)


@dataclass
class PointResult:
    run: object
    result: Optional[FreeEnergyResult]
    error: Optional[str] = None
    # raw inputs, echoed when the point could not even be set up
    params: Optional[dict] = None

    @property
    def converged(self) -> bool:
        return self.result is not None and self.result.converged

    def csv_row(self):
        run, res = self.run, self.result
        if run is None:
            p = self.params or {}
            return [p.get("t", "nan"), p.get("d_over_a", "nan"), p.get("n", p.get("model", "nan")),
                    "nan", "nan", "nan", "0", "false"]
        if res is None:
            beta_f = log_ft = y = math.nan
            terms = 0
        else:
            beta_f = res.beta_F
            ft = -beta_f * run.thermal.t
            log_ft = math.log10(ft) if ft > 0 else math.nan
            y = res.zero_mode_fraction
            y = math.nan if y is None else y
            terms = res.terms_evaluated
        return [
            repr(run.thermal.t),
            repr(run.d_over_a),
            model_label(run.model),
            repr(float(beta_f)),
            repr(float(log_ft)),
            repr(float(y)),
            str(terms),
            "true" if self.converged else "false",
        ]


def run_single(run) -> PointResult:
    return PointResult(run, free_energy(run.geometry, run.thermal, run.model, run.policy))


def format_report(point: PointResult) -> str:
    run, res = point.run, point.result
    rep = convergence_report(res)
    t = run.thermal.t
    ft = -res.beta_F * t
    y = res.zero_mode_fraction
    lines = [
        f"geometry        a/b = {run.geometry.ratio!r}, d/a = {run.d_over_a!r}",
        f"temperature     t = 2 pi a / beta = {t!r}",
        f"model           {model_label(run.model)}",
        f"beta F          {res.beta_F!r}",
        f"beta F t        {res.beta_F * t!r}",
        f"log10(-beta F t) {math.log10(ft)!r}" if ft > 0 else "log10(-beta F t) n/a",
        f"zero mode       beta F(m=0) = {res.zero_mode_beta_F!r}",
        f"Y = F(m=0)/F    {y!r}" if y is not None else "Y = F(m=0)/F    n/a",
        f"terms           {res.terms_evaluated} over {rep.matsubara_terms} Matsubara indices, max l {rep.max_l_used}",
        "paths           "
        + ", ".join(f"{p.value}={c}" for p, c in sorted(rep.path_counts.items(), key=lambda kv: kv[0].value)),
        f"converged       {res.converged}" + (f" (cap: {res.cap_hit})" if res.cap_hit else ""),
        f"tail estimate   {rep.estimated_abs_error:.3e} (about {rep.achieved_digits:.1f} digits)",
    ]
    return "\n".join(lines) + "\n"


def _write_csv(out, points, header: bool):
    if header:
        stamp = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
        out.write(f"# concentric_casimir {__version__} generated {stamp}\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for point in points:
        writer.writerow(point.csv_row())


def _gather_params(args):
    params = load_config(args.config) if args.config else {}
    params = apply_overrides(params, args.set)
    if args.truncation is not None:
        params["truncation"] = repr(args.truncation)
    if args.threads is not None:
        params["threads"] = str(args.threads)
    return params


def _open_out(args):
    if args.out:
        return open(args.out, "w", encoding="utf-8", newline="")
    return sys.stdout


def cmd_compute(args) -> int:
    run = build_run(_gather_params(args))
    point = run_single(run)
    out = _open_out(args)
    try:
        if args.format == "csv":
            _write_csv(out, [point], header=not args.no_header)
        else:
            out.write(format_report(point))
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK if point.converged else EXIT_NOT_CONVERGED


def run_sweep(spec, threads: int = 1):
    """Evaluate every sweep point; failures become ``converged=false`` rows."""

    def one(value):
        params = point_params(spec, value)
        try:
            run = build_run(params)
        except (ConfigError, DomainError) as exc:
            return PointResult(None, None, str(exc), params)
        try:
            return run_single(run)
        except (DomainError, ArithmeticError, RuntimeError) as exc:
            return PointResult(run, None, str(exc), params)

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(one, spec.values))
    return [one(v) for v in spec.values]


def cmd_sweep(args) -> int:
    params = _gather_params(args)
    spec = build_sweep(params)
    threads = int(params.get("threads", 1))
    # points are the unit of parallelism here; each engine call stays serial
    spec = replace(spec, fixed_params={**spec.fixed_params, "threads": "1"})
    points = run_sweep(spec, threads)
    out = _open_out(args)
    try:
        _write_csv(out, points, header=not args.no_header)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK if all(p.converged for p in points) else EXIT_NOT_CONVERGED


def cmd_verify(args) -> int:
    ok = True
    for name, passed, detail in verification.run_all():
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def cmd_dump_debye(args) -> int:
    text = generate_correction_coefficients(args.theta_order).to_text()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value configuration file")
    common.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key")
    common.add_argument("--truncation", type=float, help="term/sum truncation ratio (default 1e-9)")
    common.add_argument("--threads", type=int, help="worker threads")
    common.add_argument("--no-header", action="store_true", help="omit the timestamped CSV comment")
    common.add_argument("--out", help="write output to this path instead of stdout")

    parser = argparse.ArgumentParser(
        prog="concentric-casimir",
        description="Casimir free energy between concentric dielectric spheres.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", parents=[common], help="evaluate one parameter point")
    p.add_argument("--format", choices=("report", "csv"), default="report")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("sweep", parents=[common], help="evaluate a one-dimensional sweep as CSV")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the built-in accuracy checks")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dump-debye", help="print the Debye correction coefficients")
    p.add_argument("--theta-order", type=int, default=DEFAULT_THETA_ORDER)
    p.add_argument("--out", help="write to this path instead of stdout")
    p.set_defaults(func=cmd_dump_debye)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
